#include "dampdisc/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dampdisc {

namespace {

void require_dim(int dim) {
  if (dim != 2 && dim != 4) {
    throw NumericError("matrix dimension must be 2 or 4, got " + std::to_string(dim));
  }
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) {
    throw NumericError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                       std::to_string(b.dim()));
  }
}

void require_hermitian(const ComplexMatrix& m, const char* what) {
  const double asym = m.max_asymmetry();
  if (asym > kHermiticityTol) {
    std::ostringstream os;
    os << what << ": matrix is not Hermitian (max asymmetry " << asym << ")";
    throw NumericError(os.str());
  }
}

struct Vec4 {
  int dim = 2;
  std::array<Complex, 4> v{};
};

// Makes the first nonzero component real positive.
void fix_phase(Vec4& x) {
  for (int i = 0; i < x.dim; ++i) {
    const double mag = std::abs(x.v[i]);
    if (mag > 1e-12) {
      const Complex ph = std::conj(x.v[i]) / mag;
      for (int k = 0; k < x.dim; ++k) x.v[k] *= ph;
      x.v[i] = Complex(std::abs(x.v[i]), 0.0);
      return;
    }
  }
}

void normalize(Vec4& x) {
  double n2 = 0.0;
  for (int i = 0; i < x.dim; ++i) n2 += std::norm(x.v[i]);
  const double n = std::sqrt(n2);
  for (int i = 0; i < x.dim; ++i) x.v[i] /= n;
}

// True if a should precede b among (numerically) equal eigenvalues.
bool lexicographically_first(const Vec4& a, const Vec4& b) {
  for (int i = 0; i < a.dim; ++i) {
    const double ra = a.v[i].real();
    const double rb = b.v[i].real();
    if (std::abs(ra - rb) > 1e-12) return ra > rb;
  }
  return false;
}

struct RawEig {
  int dim = 2;
  std::array<double, 4> values{};
  std::array<Vec4, 4> vectors{};
};

std::array<double, 2> eigenvalues_2x2(const ComplexMatrix& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const double mean = 0.5 * (a + d);
  const double half = 0.5 * (a - d);
  const double r = std::sqrt(half * half + std::norm(m(0, 1)));
  return {mean + r, mean - r};
}

RawEig eig_2x2(const ComplexMatrix& m) {
  RawEig out;
  out.dim = 2;
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const Complex b = m(0, 1);
  const auto [hi, lo] = eigenvalues_2x2(m);
  out.values = {hi, lo, 0.0, 0.0};

  Vec4 top;
  top.dim = 2;
  if (hi - lo == 0.0) {
    top.v[0] = 1.0;
    top.v[1] = 0.0;
  } else if (a >= d) {
    top.v[0] = hi - d;
    top.v[1] = std::conj(b);
  } else {
    top.v[0] = b;
    top.v[1] = hi - a;
  }
  normalize(top);
  Vec4 bottom;
  bottom.dim = 2;
  bottom.v[0] = -std::conj(top.v[1]);
  bottom.v[1] = std::conj(top.v[0]);
  out.vectors[0] = top;
  out.vectors[1] = bottom;
  return out;
}

// Cyclic complex Jacobi. Each rotation is a phase change on column q followed
// by a real Givens rotation that annihilates A(p, q).
RawEig eig_jacobi(const ComplexMatrix& m) {
  const int n = m.dim();
  ComplexMatrix a = m;
  ComplexMatrix v = ComplexMatrix::identity(n);

  double scale = 0.0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) scale = std::max(scale, std::abs(a(r, c)));

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (off <= 1e-34 * scale * scale || off == 0.0) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double g = std::abs(a(p, q));
        if (g <= 1e-300) continue;
        const Complex e = a(p, q) / g;
        const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * g);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        ComplexMatrix rot = ComplexMatrix::identity(n);
        rot(p, p) = c;
        rot(p, q) = s;
        rot(q, p) = -s * std::conj(e);
        rot(q, q) = c * std::conj(e);

        a = rot.adjoint() * a * rot;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        v = v * rot;
      }
    }
  }

  RawEig out;
  out.dim = n;
  for (int i = 0; i < n; ++i) {
    out.values[i] = a(i, i).real();
    out.vectors[i].dim = n;
    for (int r = 0; r < n; ++r) out.vectors[i].v[r] = v(r, i);
    normalize(out.vectors[i]);
  }
  return out;
}

RawEig sorted_eig(const ComplexMatrix& m) {
  RawEig raw = m.dim() == 2 ? eig_2x2(m) : eig_jacobi(m);
  const int n = raw.dim;
  for (int i = 0; i < n; ++i) fix_phase(raw.vectors[i]);

  double scale = 1.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(raw.values[i]));
  const double tie_tol = 1e-12 * scale;

  // Insertion sort; n <= 4.
  for (int i = 1; i < n; ++i) {
    for (int j = i; j > 0; --j) {
      const double lhs = raw.values[j - 1];
      const double rhs = raw.values[j];
      bool swap;
      if (std::abs(lhs - rhs) > tie_tol) {
        swap = rhs > lhs;
      } else {
        swap = lexicographically_first(raw.vectors[j], raw.vectors[j - 1]);
      }
      if (!swap) break;
      std::swap(raw.values[j - 1], raw.values[j]);
      std::swap(raw.vectors[j - 1], raw.vectors[j]);
    }
  }
  return raw;
}

}  // namespace

ComplexMatrix::ComplexMatrix(int dim) : dim_(dim) { require_dim(dim); }

ComplexMatrix::ComplexMatrix(int dim, std::initializer_list<Complex> row_major) : dim_(dim) {
  require_dim(dim);
  if (static_cast<int>(row_major.size()) != dim * dim) {
    throw NumericError("expected " + std::to_string(dim * dim) + " entries, got " +
                       std::to_string(row_major.size()));
  }
  int k = 0;
  for (const Complex& z : row_major) {
    (*this)(k / dim, k % dim) = z;
    ++k;
  }
}

ComplexMatrix ComplexMatrix::identity(int dim) {
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<double> diag) {
  ComplexMatrix m(static_cast<int>(diag.size()));
  int i = 0;
  for (double d : diag) {
    m(i, i) = d;
    ++i;
  }
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) out(r, c) = std::conj((*this)(c, r));
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_asymmetry() const {
  double worst = 0.0;
  for (int r = 0; r < dim_; ++r)
    for (int c = r; c < dim_; ++c)
      worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return worst;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require_same_dim(*this, o);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) (*this)(r, c) += o(r, c);
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require_same_dim(*this, o);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) (*this)(r, c) -= o(r, c);
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) (*this)(r, c) *= s;
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(double s) {
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) (*this)(r, c) *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b);
  const int n = a.dim();
  ComplexMatrix out(n);
  for (int r = 0; r < n; ++r)
    for (int k = 0; k < n; ++k) {
      const Complex ark = a(r, k);
      if (ark == Complex(0.0, 0.0)) continue;
      for (int c = 0; c < n; ++c) out(r, c) += ark * b(k, c);
    }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b);
  double worst = 0.0;
  for (int r = 0; r < a.dim(); ++r)
    for (int c = 0; c < a.dim(); ++c) worst = std::max(worst, std::abs(a(r, c) - b(r, c)));
  return worst;
}

PureState::PureState(std::initializer_list<Complex> amplitudes)
    : PureState(std::vector<Complex>(amplitudes)) {}

PureState::PureState(const std::vector<Complex>& amplitudes) {
  dim_ = static_cast<int>(amplitudes.size());
  require_dim(dim_);
  double n2 = 0.0;
  for (int i = 0; i < dim_; ++i) {
    v_[i] = amplitudes[i];
    n2 += std::norm(v_[i]);
  }
  if (std::abs(std::sqrt(n2) - 1.0) > kUnitNormTol) {
    std::ostringstream os;
    os << "state vector is not normalized (norm " << std::sqrt(n2) << ")";
    throw NumericError(os.str());
  }
}

PureState PureState::normalized(const std::vector<Complex>& v) {
  double n2 = 0.0;
  for (const Complex& z : v) n2 += std::norm(z);
  if (n2 <= 0.0) throw NumericError("cannot normalize the zero vector");
  const double n = std::sqrt(n2);
  std::vector<Complex> w(v);
  for (Complex& z : w) z /= n;
  return PureState(w);
}

PureState PureState::basis(int dim, int index) {
  std::vector<Complex> v(static_cast<std::size_t>(dim), Complex(0.0, 0.0));
  v.at(static_cast<std::size_t>(index)) = 1.0;
  return PureState(v);
}

ComplexMatrix PureState::projector() const {
  ComplexMatrix p(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) p(r, c) = v_[r] * std::conj(v_[c]);
  return p;
}

Complex inner(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw NumericError("inner product of states with different dimensions");
  Complex s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

DensityMatrix::DensityMatrix(const ComplexMatrix& m) : m_(m) {
  const double asym = m.max_asymmetry();
  if (asym > 1e-12) {
    std::ostringstream os;
    os << "density matrix is not Hermitian (max asymmetry " << asym << ")";
    throw NumericError(os.str());
  }
  const Complex tr = m.trace();
  if (std::abs(tr - 1.0) > kUnitTraceTol) {
    std::ostringstream os;
    os << "density matrix trace is " << tr.real() << ", expected 1";
    throw NumericError(os.str());
  }
  const Spectrum sp = hermitian_eigenvalues(m);
  if (sp.values[sp.dim - 1] < -kNegativeEigenTol) {
    std::ostringstream os;
    os << "density matrix has negative eigenvalue " << sp.values[sp.dim - 1];
    throw NumericError(os.str());
  }
}

EigenDecomposition hermitian_eig(const ComplexMatrix& m) {
  require_hermitian(m, "hermitian_eig");
  const RawEig raw = sorted_eig(m);
  EigenDecomposition out;
  out.eigenvalues.reserve(static_cast<std::size_t>(raw.dim));
  out.eigenvectors.reserve(static_cast<std::size_t>(raw.dim));
  for (int i = 0; i < raw.dim; ++i) {
    out.eigenvalues.push_back(raw.values[i]);
    out.eigenvectors.emplace_back(
        std::vector<Complex>(raw.vectors[i].v.begin(), raw.vectors[i].v.begin() + raw.dim));
  }
  return out;
}

Spectrum hermitian_eigenvalues(const ComplexMatrix& m) {
  require_hermitian(m, "hermitian_eigenvalues");
  Spectrum s;
  s.dim = m.dim();
  if (m.dim() == 2) {
    const auto ev = eigenvalues_2x2(m);
    s.values[0] = ev[0];
    s.values[1] = ev[1];
    return s;
  }
  const RawEig raw = eig_jacobi(m);
  for (int i = 0; i < raw.dim; ++i) s.values[i] = raw.values[i];
  std::sort(s.values.begin(), s.values.begin() + s.dim, std::greater<>());
  return s;
}

double trace_norm(const ComplexMatrix& m) {
  if (m.dim() == 2) {
    require_hermitian(m, "trace_norm");
    // |mean + r| + |mean - r| = 2 max(|mean|, r).
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double half = 0.5 * (a - d);
    const double r = std::sqrt(half * half + std::norm(m(0, 1)));
    return 2.0 * std::max(std::abs(0.5 * (a + d)), r);
  }
  const Spectrum s = hermitian_eigenvalues(m);
  double sum = 0.0;
  for (int i = 0; i < s.dim; ++i) sum += std::abs(s.values[i]);
  return sum;
}

double trace_product_real(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw NumericError("trace_product_real: dimension mismatch");
  double sum = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int k = 0; k < a.dim(); ++k) sum += (a(i, k) * b(k, i)).real();
  return sum;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != 2 || b.dim() != 2) throw NumericError("tensor expects two 2x2 factors");
  ComplexMatrix out(4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

PureState tensor(const PureState& a, const PureState& b) {
  if (a.dim() != 2 || b.dim() != 2) throw NumericError("tensor expects two qubit states");
  return PureState::normalized({a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]});
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Subsystem traced) {
  if (m.dim() != 4) throw NumericError("partial_trace expects a 4x4 operator");
  ComplexMatrix out(2);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      for (int k = 0; k < 2; ++k) {
        if (traced == Subsystem::Second) {
          out(r, c) += m(2 * r + k, 2 * c + k);
        } else {
          out(r, c) += m(2 * k + r, 2 * k + c);
        }
      }
  return out;
}

ComplexMatrix matrix_exp_skew(const ComplexMatrix& h) {
  require_hermitian(h, "matrix_exp_skew");
  const RawEig raw = h.dim() == 2 ? eig_2x2(h) : eig_jacobi(h);
  const int n = h.dim();
  ComplexMatrix out(n);
  for (int i = 0; i < n; ++i) {
    const Complex phase = std::polar(1.0, -raw.values[i]);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        out(r, c) += phase * raw.vectors[i].v[r] * std::conj(raw.vectors[i].v[c]);
  }
  return out;
}

bool is_product_state(const PureState& psi, double tol) {
  if (psi.dim() != 4) throw NumericError("is_product_state expects a two-qubit state");
  return std::abs(psi[0] * psi[3] - psi[1] * psi[2]) <= tol;
}

}  // namespace dampdisc
