#include "dampdisc/sweep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "dampdisc/optimize.hpp"

namespace dampdisc {

namespace {

using nlohmann::json;

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kQuarterPi = std::numbers::pi / 4.0;
// Inputs within this distance outside [0, pi/2] are clamped rather than rejected.
constexpr double kRangeSlack = 1e-12;

constexpr std::array<std::pair<Strategy, const char*>, 11> kStrategyNames{{
    {Strategy::OneShot, "one-shot"},
    {Strategy::SideEnt, "side-ent"},
    {Strategy::Feedback, "feedback"},
    {Strategy::TwoShotEntangled, "two-shot-entangled"},
    {Strategy::TwoShotProduct, "two-shot-product"},
    {Strategy::Adaptive, "adaptive"},
    {Strategy::AdaptiveFb, "adaptive-fb"},
    {Strategy::Backward, "backward"},
    {Strategy::Sequential, "sequential"},
    {Strategy::FwdBwdDiff, "fwd-bwd-diff"},
    {Strategy::PolarCurve, "polar-curve"},
}};

constexpr std::array<std::pair<Figure, const char*>, 11> kFigureNames{{
    {Figure::Fig2new, "fig2new"},
    {Figure::Fig3, "fig3"},
    {Figure::Fig4new, "fig4new"},
    {Figure::Fig4, "fig4"},
    {Figure::Fig6, "fig6"},
    {Figure::Fig7, "fig7"},
    {Figure::Fig8, "fig8"},
    {Figure::Fig10, "fig10"},
    {Figure::Fig11, "fig11"},
    {Figure::Fig13, "fig13"},
    {Figure::Fig15, "fig15"},
}};

std::string fmt12(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string fmt_full(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

double clamp_angle(double v, const char* name) {
  if (!(v >= -kRangeSlack && v <= kHalfPi + kRangeSlack)) {
    throw UsageError(std::string(name) + " = " + fmt12(v) + " lies outside [0, pi/2]");
  }
  return std::clamp(v, 0.0, kHalfPi);
}

void check_unit(const std::optional<double>& v, const char* name) {
  if (v && !(*v >= 0.0 && *v <= 1.0)) {
    throw UsageError(std::string(name) + " = " + fmt12(*v) + " lies outside [0, 1]");
  }
}

void require_close(double a, double b, double tol, const std::string& what) {
  if (!(std::abs(a - b) <= tol)) {
    std::ostringstream os;
    os << std::setprecision(15) << what << ": " << a << " vs " << b << " (|diff| " << std::abs(a - b)
       << " > " << tol << ")";
    throw ConsistencyError(os.str());
  }
}

Strategy strategy_of(const SweepConfig& cfg) {
  const auto s = parse_strategy(cfg.command);
  if (!s) throw UsageError("'" + cfg.command + "' is not a strategy");
  return *s;
}

double max_over_x(const std::function<double(double)>& f) {
  return maximize_scalar(f, 0.0, 1.0).value;
}

std::function<double(double, double)> strategy_cell(const SweepConfig& cfg, Strategy s) {
  const auto x = cfg.x;
  const auto y = cfg.y;
  const auto alpha = cfg.alpha;
  const TwoShotVariant variant = cfg.variant;
  switch (s) {
    case Strategy::OneShot:
      return [x](double e0, double e1) {
        const ChannelPair p(e0, e1);
        return x ? one_shot_psucc_numeric(p, *x) : one_shot_optimal_numeric(p).psucc;
      };
    case Strategy::SideEnt:
      return [y](double e0, double e1) {
        const ChannelPair p(e0, e1);
        return y ? side_ent_psucc(p, *y) : side_ent_optimal_numeric(p).psucc;
      };
    case Strategy::Feedback:
      return [x, alpha](double e0, double e1) {
        const ChannelPair p(e0, e1);
        return x && alpha ? feedback_psucc(p, *x, *alpha) : feedback_optimal_numeric(p).psucc;
      };
    case Strategy::TwoShotEntangled:
      return [x, variant](double e0, double e1) {
        const ChannelPair p(e0, e1);
        if (x) return two_shot_entangled_psucc(p, variant, *x);
        return max_over_x([&](double v) { return two_shot_entangled_psucc(p, variant, v); });
      };
    case Strategy::TwoShotProduct:
      return [x](double e0, double e1) {
        const ChannelPair p(e0, e1);
        return x ? two_shot_product_psucc(p, *x) : two_shot_product_optimal(p).result.psucc;
      };
    case Strategy::Adaptive:
      return [x](double e0, double e1) {
        const ChannelPair p(e0, e1);
        return x ? adaptive_forward_psucc(p, *x) : adaptive_forward_optimal(p).psucc;
      };
    case Strategy::AdaptiveFb:
      return [](double e0, double e1) { return adaptive_feedback_psucc(ChannelPair(e0, e1)); };
    case Strategy::Backward:
      return [x](double e0, double e1) {
        const ChannelPair p(e0, e1);
        return x ? backward_adaptive_psucc(p, *x) : backward_adaptive_optimal(p).psucc;
      };
    case Strategy::Sequential:
      return [x](double e0, double e1) {
        const ChannelPair p(e0, e1);
        return x ? sequential_two_shot_psucc(p, *x) : sequential_optimal(p).psucc;
      };
    case Strategy::FwdBwdDiff:
      return [](double e0, double e1) { return fwd_bwd_difference(ChannelPair(e0, e1)); };
    case Strategy::PolarCurve:
      break;
  }
  throw UsageError("polar-curve produces curves, not an (eta0, eta1) grid");
}

std::function<double(double, double)> figure_cell(Figure f) {
  switch (f) {
    case Figure::Fig3:
      return [](double e0, double e1) {
        const ChannelPair p(e0, e1);
        return side_ent_optimal_numeric(p).psucc - side_ent_psucc(p, 0.0);
      };
    case Figure::Fig4new:
      return [](double e0, double e1) { return side_ent_optimal_numeric(ChannelPair(e0, e1)).psucc; };
    case Figure::Fig4:
      return [](double e0, double e1) { return side_ent_optimal_y(ChannelPair(e0, e1)); };
    case Figure::Fig6:
      return [](double e0, double e1) {
        const ChannelPair p(e0, e1);
        return feedback_optimal_numeric(p).psucc - one_shot_optimal_numeric(p).psucc;
      };
    case Figure::Fig7:
      return [](double e0, double e1) {
        const ChannelPair p(e0, e1);
        return two_shot_product_optimal(p).result.psucc - one_shot_optimal_numeric(p).psucc;
      };
    case Figure::Fig8:
      return [](double e0, double e1) {
        return two_shot_product_optimal(ChannelPair(e0, e1)).result.params.at("x");
      };
    case Figure::Fig10:
      return [](double e0, double e1) {
        const ChannelPair p(e0, e1);
        return two_shot_product_optimal(p).result.psucc - adaptive_forward_optimal(p).psucc;
      };
    case Figure::Fig11:
      return [](double e0, double e1) {
        const ChannelPair p(e0, e1);
        return adaptive_forward_optimal(p).psucc - one_shot_optimal_numeric(p).psucc;
      };
    case Figure::Fig13:
      return [](double e0, double e1) {
        const ChannelPair p(e0, e1);
        return adaptive_feedback_psucc(p) - feedback_optimal_numeric(p).psucc;
      };
    case Figure::Fig15:
      // Only the region where the forward strategy falls short of the
      // collective one is computed; elsewhere backward is squeezed between
      // two equal values and the difference is 0.
      return [](double e0, double e1) {
        const ChannelPair p(e0, e1);
        if (p.gamma() >= 1.0 / std::numbers::sqrt2) return 0.0;
        return fwd_bwd_difference(p);
      };
    case Figure::Fig2new:
      break;
  }
  throw UsageError("fig2new produces curves, not an (eta0, eta1) grid");
}

std::map<std::string, std::string> metadata_for(const SweepConfig& cfg) {
  std::map<std::string, std::string> m;
  m["command"] = cfg.command;
  m["grid_n"] = std::to_string(cfg.grid_n);
  m["eta0_range"] = fmt_full(cfg.eta0_range.lo) + "," + fmt_full(cfg.eta0_range.hi);
  m["eta1_range"] = fmt_full(cfg.eta1_range.lo) + "," + fmt_full(cfg.eta1_range.hi);
  if (cfg.x) m["x"] = fmt_full(*cfg.x);
  if (cfg.y) m["y"] = fmt_full(*cfg.y);
  if (cfg.alpha) m["alpha"] = fmt_full(*cfg.alpha);
  if (cfg.command == "two-shot-entangled") {
    m["variant"] = cfg.variant == TwoShotVariant::Odd ? "odd" : "even";
  }
  m["version"] = kVersion;
  return m;
}

SweepGrid empty_grid(const SweepConfig& cfg) {
  SweepGrid g;
  g.eta0_values = linspace(cfg.eta0_range.lo, cfg.eta0_range.hi, cfg.grid_n);
  g.eta1_values = linspace(cfg.eta1_range.lo, cfg.eta1_range.hi, cfg.grid_n);
  g.values.assign(g.eta0_values.size() * g.eta1_values.size(), 0.0);
  g.metadata = metadata_for(cfg);
  return g;
}

void require_finite(const SweepGrid& g) {
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    if (!std::isfinite(g.values[k])) {
      const std::size_t n1 = g.eta1_values.size();
      throw ConsistencyError("non-finite value at eta0 = " + fmt12(g.eta0_values[k / n1]) +
                             ", eta1 = " + fmt12(g.eta1_values[k % n1]));
    }
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

template <class Data>
void emit_impl(const Data& data, const SweepConfig& cfg, std::ostream& fallback) {
  std::ostringstream os;
  if (cfg.format == OutputFormat::Json) {
    write_json(data, os);
  } else {
    write_csv(data, os);
  }
  if (cfg.output_path.empty()) {
    fallback << os.str();
    fallback.flush();
    if (!fallback) throw IoError("failed writing to standard output");
  } else {
    write_file(cfg.output_path, os.str());
  }
}

}  // namespace

std::string to_string(Strategy s) {
  for (const auto& [k, name] : kStrategyNames)
    if (k == s) return name;
  return "unknown";
}

std::string to_string(Figure f) {
  for (const auto& [k, name] : kFigureNames)
    if (k == f) return name;
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  for (const auto& [k, n] : kStrategyNames)
    if (name == n) return k;
  return std::nullopt;
}

std::optional<Figure> parse_figure(std::string_view name) {
  for (const auto& [k, n] : kFigureNames)
    if (name == n) return k;
  return std::nullopt;
}

std::vector<std::string> command_names() {
  std::vector<std::string> out;
  for (const auto& [k, n] : kStrategyNames) out.emplace_back(n);
  for (const auto& [k, n] : kFigureNames) out.emplace_back(n);
  return out;
}

void SweepConfig::validate() const {
  const auto strategy = parse_strategy(command);
  const auto figure = parse_figure(command);
  if (!strategy && !figure) {
    throw UsageError(command.empty() ? "no command given" : "unknown command '" + command + "'");
  }
  if (grid_n < 2) throw UsageError("grid must be at least 2, got " + std::to_string(grid_n));
  for (const auto& [r, name] : {std::pair{eta0_range, "eta0-range"}, std::pair{eta1_range, "eta1-range"}}) {
    clamp_angle(r.lo, name);
    clamp_angle(r.hi, name);
    if (r.lo > r.hi) throw UsageError(std::string(name) + " has lo > hi");
  }
  if (eta0) clamp_angle(*eta0, "eta0");
  if (eta1) clamp_angle(*eta1, "eta1");
  if (eta0.has_value() != eta1.has_value() && command != "polar-curve") {
    throw UsageError("eta0 and eta1 must be given together");
  }
  check_unit(x, "x");
  check_unit(y, "y");
  if (alpha && !(*alpha >= 0.0 && *alpha <= kHalfPi + kRangeSlack)) {
    throw UsageError("alpha = " + fmt12(*alpha) + " lies outside [0, pi/2]");
  }
  if (strategy == Strategy::Feedback && x.has_value() != alpha.has_value()) {
    throw UsageError("feedback takes x and alpha together (or neither, to optimize)");
  }
  if (trials) {
    if (*trials < 1) throw UsageError("trials must be at least 1");
    if (!strategy || *strategy == Strategy::FwdBwdDiff || *strategy == Strategy::PolarCurve) {
      throw UsageError("Monte Carlo is not available for '" + command + "'");
    }
    if (!is_point()) throw UsageError("Monte Carlo needs a point: give eta0 and eta1");
  }
}

SweepConfig config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config must be a JSON object");

  SweepConfig cfg;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "strategy") cfg.command = v.get<std::string>();
      else if (key == "grid") cfg.grid_n = v.get<int>();
      else if (key == "eta0") cfg.eta0 = v.get<double>();
      else if (key == "eta1") cfg.eta1 = v.get<double>();
      else if (key == "x") cfg.x = v.get<double>();
      else if (key == "y") cfg.y = v.get<double>();
      else if (key == "alpha") cfg.alpha = v.get<double>();
      else if (key == "out") cfg.output_path = v.get<std::string>();
      else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (key == "trials") cfg.trials = v.get<std::int64_t>();
      else if (key == "format") {
        const auto f = v.get<std::string>();
        if (f == "csv") cfg.format = OutputFormat::Csv;
        else if (f == "json") cfg.format = OutputFormat::Json;
        else throw UsageError("format must be csv or json, got '" + f + "'");
      } else if (key == "variant") {
        const auto s = v.get<std::string>();
        if (s == "odd") cfg.variant = TwoShotVariant::Odd;
        else if (s == "even") cfg.variant = TwoShotVariant::Even;
        else throw UsageError("variant must be odd or even, got '" + s + "'");
      } else if (key == "eta0_range" || key == "eta1_range") {
        const auto r = v.get<std::vector<double>>();
        if (r.size() != 2) throw UsageError(key + " must be [lo, hi]");
        (key == "eta0_range" ? cfg.eta0_range : cfg.eta1_range) = Range{r[0], r[1]};
      } else {
        throw UsageError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad config value: ") + e.what());
  }
  return cfg;
}

SweepConfig load_config(const std::string& path) { return config_from_json(read_file(path)); }

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) throw UsageError("linspace needs at least two points");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  v.back() = hi;
  return v;
}

std::function<double(double, double)> cell_function(const SweepConfig& cfg) {
  if (const auto f = parse_figure(cfg.command)) return figure_cell(*f);
  return strategy_cell(cfg, strategy_of(cfg));
}

SweepGrid run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const auto f = cell_function(cfg);
  SweepGrid g = empty_grid(cfg);
  const std::int64_t n1 = static_cast<std::int64_t>(g.eta1_values.size());
  const std::int64_t cells = static_cast<std::int64_t>(g.values.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < cells; ++k) {
    try {
      g.values[k] = f(g.eta0_values[k / n1], g.eta1_values[k % n1]);
    } catch (...) {
#pragma omp critical(dampdisc_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  require_finite(g);
  return g;
}

SweepGrid run_sweep_serial(const SweepConfig& cfg) {
  cfg.validate();
  const auto f = cell_function(cfg);
  SweepGrid g = empty_grid(cfg);
  const std::size_t n1 = g.eta1_values.size();
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    g.values[k] = f(g.eta0_values[k / n1], g.eta1_values[k % n1]);
  }
  require_finite(g);
  return g;
}

PointReport run_point(const SweepConfig& cfg) {
  cfg.validate();
  if (!cfg.is_point()) throw UsageError("a point needs both eta0 and eta1");
  PointReport r;
  r.command = cfg.command;
  r.eta0 = clamp_angle(*cfg.eta0, "eta0");
  r.eta1 = clamp_angle(*cfg.eta1, "eta1");
  const ChannelPair p(r.eta0, r.eta1);
  r.swapped = p.swapped();

  if (const auto fig = parse_figure(cfg.command)) {
    r.value = figure_cell(*fig)(r.eta0, r.eta1);
    return r;
  }

  switch (strategy_of(cfg)) {
    case Strategy::OneShot:
      if (cfg.x) {
        r.value = one_shot_psucc_numeric(p, *cfg.x);
        require_close(r.value, one_shot_psucc(p, *cfg.x), 1e-10, "one-shot closed form");
        r.params["x"] = *cfg.x;
      } else {
        const StrategyResult num = one_shot_optimal_numeric(p);
        const StrategyResult cf = one_shot_optimal(p);
        require_close(num.psucc, cf.psucc, 1e-8, "one-shot optimum");
        if (!p.degenerate()) require_close(num.params.at("x"), cf.params.at("x"), 1e-4, "one-shot x*");
        r.value = num.psucc;
        r.params = num.params;
      }
      break;
    case Strategy::SideEnt:
      if (cfg.y) {
        r.value = side_ent_psucc(p, *cfg.y);
        require_close(r.value, 0.5 + side_ent_trace_norm_closed_form(p, *cfg.y) / 4.0, 1e-9,
                      "side-entanglement closed form");
        r.params["y"] = *cfg.y;
      } else {
        const StrategyResult num = side_ent_optimal_numeric(p);
        if (!p.degenerate()) {
          require_close(num.params.at("y"), side_ent_optimal_y(p), 1e-3, "side-entanglement y*");
        }
        r.value = num.psucc;
        r.params = num.params;
      }
      break;
    case Strategy::Feedback:
      if (cfg.x) {
        r.value = feedback_psucc(p, *cfg.x, *cfg.alpha);
        const double cf = feedback_psucc_closed_form(p, *cfg.x, *cfg.alpha);
        if (std::isfinite(cf)) require_close(r.value, cf, 1e-9, "feedback closed form");
        r.params = {{"x", *cfg.x}, {"alpha", *cfg.alpha}};
      } else {
        const StrategyResult num = feedback_optimal_numeric(p);
        require_close(num.psucc, feedback_optimal(p).psucc, 1e-6, "feedback optimum");
        r.value = num.psucc;
        r.params = num.params;
      }
      break;
    case Strategy::TwoShotEntangled: {
      auto f = [&](double v) { return two_shot_entangled_psucc(p, cfg.variant, v); };
      double x = 1.0;
      if (cfg.x) {
        x = *cfg.x;
        r.value = f(x);
      } else {
        const ScalarMax m = maximize_scalar(f, 0.0, 1.0);
        x = m.argmax;
        r.value = m.value;
      }
      if (cfg.variant == TwoShotVariant::Odd) {
        require_close(r.value, two_shot_odd_closed_form(p), 1e-10, "two-shot odd closed form");
      } else {
        require_close(r.value, two_shot_even_closed_form(p, x), 1e-9, "two-shot even closed form");
      }
      r.params["x"] = x;
      break;
    }
    case Strategy::TwoShotProduct:
      if (cfg.x) {
        r.value = two_shot_product_psucc(p, *cfg.x);
        r.params["x"] = *cfg.x;
        r.params["local"] = two_shot_helstrom_is_local(p, *cfg.x) ? 1.0 : 0.0;
      } else {
        const TwoShotProductResult t = two_shot_product_optimal(p);
        r.value = t.result.psucc;
        r.params = t.result.params;
        r.params["local"] = t.local_measurement ? 1.0 : 0.0;
      }
      break;
    case Strategy::Adaptive:
      if (cfg.x) {
        r.value = adaptive_forward_psucc(p, *cfg.x);
        r.params["x"] = *cfg.x;
      } else {
        const StrategyResult res = adaptive_forward_optimal(p);
        r.value = res.psucc;
        r.params = res.params;
      }
      break;
    case Strategy::AdaptiveFb:
      r.value = adaptive_feedback_psucc(p);
      require_close(r.value, adaptive_feedback_closed_form(p), 1e-9, "adaptive feedback closed form");
      break;
    case Strategy::Backward:
      if (cfg.x) {
        r.value = backward_adaptive_psucc(p, *cfg.x);
        const double fwd = adaptive_forward_psucc(p, *cfg.x);
        if (r.value < fwd - 1e-9) require_close(r.value, fwd, 1e-9, "backward below forward");
        r.params["x"] = *cfg.x;
      } else {
        const StrategyResult res = backward_adaptive_optimal(p);
        r.value = res.psucc;
        r.params = res.params;
      }
      break;
    case Strategy::Sequential:
      if (cfg.x) {
        r.value = sequential_two_shot_psucc(p, *cfg.x);
        r.params["x"] = *cfg.x;
      } else {
        const StrategyResult res = sequential_optimal(p);
        r.value = res.psucc;
        r.params = res.params;
      }
      break;
    case Strategy::FwdBwdDiff:
      r.value = fwd_bwd_difference(p);
      break;
    case Strategy::PolarCurve:
      throw UsageError("polar-curve produces a curve; give only eta1");
  }
  return r;
}

void print_point(const PointReport& r, std::ostream& os) {
  const bool strategy = parse_strategy(r.command).has_value();
  os << "command: " << r.command << '\n';
  os << "eta0: " << fmt12(r.eta0) << '\n';
  os << "eta1: " << fmt12(r.eta1) << '\n';
  if (r.swapped) os << "note: eta0 < eta1, hypotheses relabelled\n";
  os << (strategy ? "psucc: " : "value: ") << fmt12(r.value) << '\n';
  for (const auto& [k, v] : r.params) os << k << ": " << fmt12(v) << '\n';
}

StrategyDescriptor descriptor_for(const SweepConfig& cfg) {
  cfg.validate();
  if (!cfg.is_point()) throw UsageError("Monte Carlo needs a point: give eta0 and eta1");
  StrategyDescriptor d;
  d.eta0 = clamp_angle(*cfg.eta0, "eta0");
  d.eta1 = clamp_angle(*cfg.eta1, "eta1");
  d.variant = cfg.variant;
  const ChannelPair p(d.eta0, d.eta1);
  switch (strategy_of(cfg)) {
    case Strategy::OneShot:
      d.kind = StrategyKind::OneShot;
      d.x = cfg.x.value_or(one_shot_optimal(p).params.at("x"));
      break;
    case Strategy::SideEnt:
      d.kind = StrategyKind::SideEnt;
      d.y = cfg.y.value_or(side_ent_optimal_y(p));
      break;
    case Strategy::Feedback:
      d.kind = StrategyKind::Feedback;
      d.x = cfg.x.value_or(1.0);
      d.alpha = cfg.alpha.value_or(kQuarterPi);
      break;
    case Strategy::TwoShotEntangled:
      d.kind = StrategyKind::TwoShotEntangled;
      d.x = cfg.x.value_or(1.0);
      break;
    case Strategy::TwoShotProduct:
      d.kind = StrategyKind::TwoShotProduct;
      d.x = cfg.x ? *cfg.x : two_shot_product_optimal(p).result.params.at("x");
      break;
    case Strategy::Adaptive:
      d.kind = StrategyKind::AdaptiveForward;
      d.x = cfg.x ? *cfg.x : adaptive_forward_optimal(p).params.at("x");
      break;
    case Strategy::AdaptiveFb:
      d.kind = StrategyKind::AdaptiveFeedback;
      d.x = 1.0;
      d.alpha = kQuarterPi;
      break;
    case Strategy::Backward:
      d.kind = StrategyKind::Backward;
      d.x = cfg.x ? *cfg.x : backward_adaptive_optimal(p).params.at("x");
      break;
    case Strategy::Sequential:
      d.kind = StrategyKind::Sequential;
      d.x = cfg.x ? *cfg.x : sequential_optimal(p).params.at("x");
      break;
    case Strategy::FwdBwdDiff:
    case Strategy::PolarCurve:
      throw UsageError("Monte Carlo is not available for '" + cfg.command + "'");
  }
  return d;
}

McReport run_mc(const SweepConfig& cfg) {
  if (!cfg.trials) throw UsageError("Monte Carlo needs trials");
  McReport r;
  r.command = cfg.command;
  r.descriptor = descriptor_for(cfg);
  r.analytic = analytic_psucc(r.descriptor);
  r.mc = monte_carlo_psucc(r.descriptor, *cfg.trials, cfg.seed);
  const double var = r.analytic * (1.0 - r.analytic) / static_cast<double>(r.mc.trials);
  const double diff = r.mc.estimate - r.analytic;
  if (var > 0.0) {
    r.z = diff / std::sqrt(var);
  } else {
    // A deterministic protocol: any disagreement is infinitely unlikely.
    r.z = std::abs(diff) <= 1e-12 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  return r;
}

void print_mc(const McReport& r, std::ostream& os) {
  const StrategyDescriptor& d = r.descriptor;
  os << "command: " << r.command << '\n';
  os << "eta0: " << fmt12(d.eta0) << '\n';
  os << "eta1: " << fmt12(d.eta1) << '\n';
  switch (d.kind) {
    case StrategyKind::SideEnt: os << "y: " << fmt12(d.y) << '\n'; break;
    case StrategyKind::Feedback:
    case StrategyKind::AdaptiveFeedback:
      os << "x: " << fmt12(d.x) << '\n' << "alpha: " << fmt12(d.alpha) << '\n';
      break;
    default: os << "x: " << fmt12(d.x) << '\n';
  }
  os << "analytic: " << fmt12(r.analytic) << '\n';
  os << "estimate: " << fmt12(r.mc.estimate) << '\n';
  os << "stderr: " << fmt12(r.mc.std_error) << '\n';
  os << "z: " << fmt12(r.z) << '\n';
  os << "trials: " << r.mc.trials << '\n';
  os << "status: " << (r.passed() ? "pass" : "fail") << " (|z| <= 4)\n";
}

void write_csv(const SweepGrid& grid, std::ostream& os) {
  os << "eta0,eta1,value\n";
  for (std::size_t i = 0; i < grid.eta0_values.size(); ++i) {
    for (std::size_t j = 0; j < grid.eta1_values.size(); ++j) {
      os << fmt12(grid.eta0_values[i]) << ',' << fmt12(grid.eta1_values[j]) << ','
         << fmt12(grid.at(i, j)) << '\n';
    }
  }
}

void write_json(const SweepGrid& grid, std::ostream& os) {
  json j;
  j["metadata"] = grid.metadata;
  j["eta0_values"] = grid.eta0_values;
  j["eta1_values"] = grid.eta1_values;
  j["values"] = grid.values;
  os << j.dump(2) << '\n';
}

SweepGrid read_grid_json(std::istream& is) {
  SweepGrid g;
  try {
    const json j = json::parse(is);
    g.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
    g.eta0_values = j.at("eta0_values").get<std::vector<double>>();
    g.eta1_values = j.at("eta1_values").get<std::vector<double>>();
    g.values = j.at("values").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed grid JSON: ") + e.what());
  }
  if (g.values.size() != g.eta0_values.size() * g.eta1_values.size()) {
    throw IoError("grid JSON: values do not match the axis sizes");
  }
  return g;
}

PolarCurves run_polar(const SweepConfig& cfg) {
  cfg.validate();
  PolarCurves out;
  if (cfg.command == "fig2new") {
    out.eta1_values = {0.0, std::numbers::pi / 6.0, std::numbers::pi / 3.0};
  } else if (cfg.command == "polar-curve") {
    out.eta1_values = cfg.eta1 ? std::vector<double>{clamp_angle(*cfg.eta1, "eta1")}
                               : linspace(cfg.eta1_range.lo, cfg.eta1_range.hi, cfg.grid_n);
  } else {
    throw UsageError("'" + cfg.command + "' does not produce polar curves");
  }
  for (double e1 : out.eta1_values) out.curves.push_back(damping_polar_curve(e1, cfg.grid_n));
  out.metadata["command"] = cfg.command;
  out.metadata["grid_n"] = std::to_string(cfg.grid_n);
  out.metadata["version"] = kVersion;
  return out;
}

void write_csv(const PolarCurves& curves, std::ostream& os) {
  os << "eta1,theta,radius\n";
  for (std::size_t c = 0; c < curves.eta1_values.size(); ++c) {
    for (const PolarCurvePoint& pt : curves.curves[c]) {
      os << fmt12(curves.eta1_values[c]) << ',' << fmt12(pt.theta) << ',' << fmt12(pt.radius) << '\n';
    }
  }
}

void write_json(const PolarCurves& curves, std::ostream& os) {
  json j;
  j["metadata"] = curves.metadata;
  json list = json::array();
  for (std::size_t c = 0; c < curves.eta1_values.size(); ++c) {
    std::vector<double> theta;
    std::vector<double> radius;
    for (const PolarCurvePoint& pt : curves.curves[c]) {
      theta.push_back(pt.theta);
      radius.push_back(pt.radius);
    }
    list.push_back({{"eta1", curves.eta1_values[c]}, {"theta", theta}, {"radius", radius}});
  }
  j["curves"] = list;
  os << j.dump(2) << '\n';
}

void emit(const SweepGrid& grid, const SweepConfig& cfg, std::ostream& fallback) {
  emit_impl(grid, cfg, fallback);
}

void emit(const PolarCurves& curves, const SweepConfig& cfg, std::ostream& fallback) {
  emit_impl(curves, cfg, fallback);
}

}  // namespace dampdisc
