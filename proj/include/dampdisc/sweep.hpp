#pragma once

// Parameter sweeps over (eta0, eta1), figure presets and their file formats.

#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dampdisc/protocols.hpp"
#include "dampdisc/strategies.hpp"

namespace dampdisc {

inline constexpr const char* kVersion = "1.0.0";

/// Bad command line or configuration.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A closed form and its numeric construction disagree beyond tolerance.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Strategy {
  OneShot,
  SideEnt,
  Feedback,
  TwoShotEntangled,
  TwoShotProduct,
  Adaptive,
  AdaptiveFb,
  Backward,
  Sequential,
  FwdBwdDiff,
  PolarCurve,
};

enum class Figure { Fig2new, Fig3, Fig4new, Fig4, Fig6, Fig7, Fig8, Fig10, Fig11, Fig13, Fig15 };

std::string to_string(Strategy s);
std::string to_string(Figure f);
std::optional<Strategy> parse_strategy(std::string_view name);
std::optional<Figure> parse_figure(std::string_view name);

/// Every accepted command name, strategies first.
std::vector<std::string> command_names();

enum class OutputFormat { Csv, Json };

struct Range {
  double lo = 0.0;
  double hi = 1.5707963267948966;
};

struct SweepConfig {
  std::string command;  // strategy or figure name
  int grid_n = 25;
  Range eta0_range;
  Range eta1_range;
  std::optional<double> eta0;
  std::optional<double> eta1;
  std::optional<double> x;
  std::optional<double> y;
  std::optional<double> alpha;
  TwoShotVariant variant = TwoShotVariant::Odd;
  std::string output_path;  // empty: standard output
  OutputFormat format = OutputFormat::Csv;
  std::uint64_t seed = 1;
  std::optional<std::int64_t> trials;

  bool is_figure() const { return parse_figure(command).has_value(); }
  bool is_point() const { return eta0.has_value() && eta1.has_value(); }

  /// Throws UsageError naming the offending field.
  void validate() const;
};

/// Reads a JSON object with the same field names as the command-line flags
/// ("strategy", "grid", "eta0", "eta0_range", "out", ...). Unknown keys
/// are rejected.
SweepConfig config_from_json(std::string_view text);
SweepConfig load_config(const std::string& path);

struct SweepGrid {
  std::vector<double> eta0_values;
  std::vector<double> eta1_values;
  std::vector<double> values;  // row-major: eta0 outer, eta1 inner
  std::map<std::string, std::string> metadata;

  double at(std::size_t i0, std::size_t i1) const { return values[i0 * eta1_values.size() + i1]; }
};

/// n points from lo to hi inclusive; the last one is exactly hi.
std::vector<double> linspace(double lo, double hi, int n);

/// The scalar a grid cell holds for this command. Optimized quantities are
/// maximized numerically unless the config fixes the parameter.
std::function<double(double, double)> cell_function(const SweepConfig& cfg);

/// OpenMP-parallel over cells; the result does not depend on thread count.
SweepGrid run_sweep(const SweepConfig& cfg);
SweepGrid run_sweep_serial(const SweepConfig& cfg);

struct PointReport {
  std::string command;
  double eta0 = 0.0;
  double eta1 = 0.0;
  bool swapped = false;
  double value = 0.0;  // psucc for strategies, the plotted quantity for figures
  std::map<std::string, double> params;
};

/// Evaluates one (eta0, eta1) point and cross-checks every available closed
/// form against its numeric construction; throws ConsistencyError on a
/// mismatch.
PointReport run_point(const SweepConfig& cfg);

void print_point(const PointReport& r, std::ostream& os);

struct McReport {
  std::string command;
  StrategyDescriptor descriptor;
  double analytic = 0.0;
  McEstimate mc;
  double z = 0.0;  // (estimate - analytic) / sqrt(analytic (1 - analytic) / trials)

  bool passed() const { return std::abs(z) <= 4.0; }
};

/// Parameters not fixed in the config are taken from the strategy's optimum.
StrategyDescriptor descriptor_for(const SweepConfig& cfg);
McReport run_mc(const SweepConfig& cfg);
void print_mc(const McReport& r, std::ostream& os);

// Output. CSV: "eta0,eta1,value", 12 significant digits, LF endings.
// JSON: {metadata, eta0_values, eta1_values, values} at full precision.
void write_csv(const SweepGrid& grid, std::ostream& os);
void write_json(const SweepGrid& grid, std::ostream& os);
SweepGrid read_grid_json(std::istream& is);

/// Polar curves: one (theta, radius) list per eta1.
struct PolarCurves {
  std::vector<double> eta1_values;
  std::vector<std::vector<PolarCurvePoint>> curves;
  std::map<std::string, std::string> metadata;
};

PolarCurves run_polar(const SweepConfig& cfg);
/// CSV: "eta1,theta,radius".
void write_csv(const PolarCurves& curves, std::ostream& os);
void write_json(const PolarCurves& curves, std::ostream& os);

/// Writes to cfg.output_path, or to `fallback` when the path is empty.
/// Throws IoError with the path on failure.
void emit(const SweepGrid& grid, const SweepConfig& cfg, std::ostream& fallback);
void emit(const PolarCurves& curves, const SweepConfig& cfg, std::ostream& fallback);

}  // namespace dampdisc
