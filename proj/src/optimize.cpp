#include "dampdisc/optimize.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace dampdisc {

namespace {

constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5) - 1) / 2
// Grid values closer than this count as ties and keep the earlier point.
constexpr double kTieTol = 1e-12;

double finite_or_lowest(double v) {
  return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
}

ComplexMatrix projector_from_angles(double theta, double chi) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Complex u1 = std::polar(s, chi);
  ComplexMatrix pu(2);
  pu(0, 0) = c * c;
  pu(0, 1) = c * std::conj(u1);
  pu(1, 0) = u1 * c;
  pu(1, 1) = s * s;
  return pu;
}

// l2 I + (l1 - l2) |u><u|.
ComplexMatrix effect_from_projector(double l1, double l2, const ComplexMatrix& pu) {
  ComplexMatrix m(2);
  m(0, 0) = l2 + (l1 - l2) * pu(0, 0);
  m(0, 1) = (l1 - l2) * pu(0, 1);
  m(1, 0) = (l1 - l2) * pu(1, 0);
  m(1, 1) = l2 + (l1 - l2) * pu(1, 1);
  return m;
}

ComplexMatrix effect_from_params(const std::array<double, 4>& p) {
  return effect_from_projector(p[0], p[1], projector_from_angles(p[2], p[3]));
}

}  // namespace

ScalarMax golden_section_max(const std::function<double(double)>& f, double a, double b,
                             double tol) {
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = finite_or_lowest(f(c));
  double fd = finite_or_lowest(f(d));
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = finite_or_lowest(f(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = finite_or_lowest(f(d));
    }
  }
  return fc >= fd ? ScalarMax{c, fc} : ScalarMax{d, fd};
}

ScalarMax maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                          int grid_points, double tol) {
  if (!(lo < hi)) throw NumericError("maximize_scalar: empty interval (lo >= hi)");
  if (grid_points < 2) throw NumericError("maximize_scalar: need at least two grid points");

  const double step = (hi - lo) / (grid_points - 1);
  auto node = [&](int i) { return i == grid_points - 1 ? hi : lo + step * i; };

  int best = 0;
  double best_val = finite_or_lowest(f(lo));
  for (int i = 1; i < grid_points; ++i) {
    const double v = finite_or_lowest(f(node(i)));
    if (v > best_val + kTieTol) {
      best = i;
      best_val = v;
    }
  }

  const double a = node(best > 0 ? best - 1 : 0);
  const double b = node(best < grid_points - 1 ? best + 1 : grid_points - 1);
  const ScalarMax refined = golden_section_max(f, a, b, tol);
  if (refined.value > best_val) return refined;
  return {node(best), best_val};
}

PlanarMax maximize_2d(const std::function<double(double, double)>& f, double x_lo, double x_hi,
                      double y_lo, double y_hi, int grid_points, double tol) {
  if (!(x_lo < x_hi) || !(y_lo < y_hi)) throw NumericError("maximize_2d: empty box");
  if (grid_points < 2) throw NumericError("maximize_2d: need at least two grid points");

  const int n = grid_points;
  auto xs = [&](int i) { return i == n - 1 ? x_hi : x_lo + (x_hi - x_lo) * i / (n - 1); };
  auto ys = [&](int j) { return j == n - 1 ? y_hi : y_lo + (y_hi - y_lo) * j / (n - 1); };

  int bi = 0;
  int bj = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double v = finite_or_lowest(f(xs(i), ys(j)));
      if (v > best + kTieTol) {
        best = v;
        bi = i;
        bj = j;
      }
    }
  }

  const double xa = xs(bi > 0 ? bi - 1 : 0);
  const double xb = xs(bi < n - 1 ? bi + 1 : n - 1);
  const double ya = ys(bj > 0 ? bj - 1 : 0);
  const double yb = ys(bj < n - 1 ? bj + 1 : n - 1);

  double inner_arg = 0.0;
  auto profile = [&](double x) {
    const ScalarMax m = golden_section_max([&](double y) { return f(x, y); }, ya, yb, tol);
    inner_arg = m.argmax;
    return m.value;
  };
  const ScalarMax outer = golden_section_max(profile, xa, xb, tol);
  profile(outer.argmax);
  const double refined_y = inner_arg;
  const double refined_val = finite_or_lowest(f(outer.argmax, refined_y));

  if (refined_val > best) return {outer.argmax, refined_y, refined_val};
  return {xs(bi), ys(bj), best};
}

PovmMax maximize_povm_2x2(const std::function<double(const BinaryPovm&)>& objective,
                          std::span<const BinaryPovm> seeds) {
  constexpr int n = kPovmGridPoints;
  const double half_pi = std::numbers::pi / 2.0;
  const double two_pi = 2.0 * std::numbers::pi;
  const std::array<double, 4> step{1.0 / (n - 1), 1.0 / (n - 1), half_pi / (n - 1), two_pi / n};

  std::array<double, 4> best_p{1.0, 0.0, 0.0, 0.0};
  double best = -std::numeric_limits<double>::infinity();
  BinaryPovm trial{ComplexMatrix(2)};

  for (int it = 0; it < n; ++it) {
    for (int ic = 0; ic < n; ++ic) {
      const ComplexMatrix pu = projector_from_angles(it * step[2], ic * step[3]);
      for (int i1 = 0; i1 < n; ++i1) {
        for (int i2 = 0; i2 < n; ++i2) {
          const std::array<double, 4> p{i1 * step[0], i2 * step[1], it * step[2], ic * step[3]};
          trial.effect = effect_from_projector(p[0], p[1], pu);
          const double v = finite_or_lowest(objective(trial));
          if (v > best) {
            best = v;
            best_p = p;
          }
        }
      }
    }
  }

  // Coordinate-wise golden refinement, one grid cell either side.
  const std::array<double, 4> lower{0.0, 0.0, 0.0, -std::numeric_limits<double>::infinity()};
  const std::array<double, 4> upper{1.0, 1.0, half_pi, std::numeric_limits<double>::infinity()};
  std::array<double, 4> width = step;
  for (int round = 0; round < 4; ++round) {
    const double before = best;
    for (int k = 0; k < 4; ++k) {
      const double a = std::max(lower[k], best_p[k] - width[k]);
      const double b = std::min(upper[k], best_p[k] + width[k]);
      if (!(a < b)) continue;
      auto along = [&](double t) {
        std::array<double, 4> p = best_p;
        p[k] = t;
        trial.effect = effect_from_params(p);
        return objective(trial);
      };
      const ScalarMax m = golden_section_max(along, a, b, 1e-10);
      if (m.value > best) {
        best = m.value;
        best_p[k] = m.argmax;
      }
    }
    for (double& w : width) w *= 0.5;
    if (best - before < 1e-14) break;
  }

  PovmMax out;
  out.povm = BinaryPovm{effect_from_params(best_p)};
  out.value = best;
  out.params = best_p;

  for (const BinaryPovm& seed : seeds) {
    const double v = finite_or_lowest(objective(seed));
    if (v > out.value) {
      out.value = v;
      out.povm = seed;
      out.params.fill(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return out;
}

}  // namespace dampdisc
