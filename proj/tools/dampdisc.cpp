// dampdisc: evaluate, sweep and simulate strategies for telling two
// amplitude damping channels apart.
//
//   dampdisc one-shot --eta0 1.5707963 --eta1 1.0471976
//   dampdisc fig6 --grid 50 --out fig6.csv
//   dampdisc feedback --eta0 1.5707963 --eta1 0.7853982 --x 1 --alpha 0.7853982 --trials 100000
//
// Exit status: 0 success, 1 usage error, 2 numeric-consistency failure,
// 3 I/O error.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dampdisc/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConsistency = 2;
constexpr int kExitIo = 3;

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

int run(const dampdisc::SweepConfig& cfg) {
  using namespace dampdisc;
  cfg.validate();
  if (cfg.trials) {
    const McReport r = run_mc(cfg);
    print_mc(r, std::cout);
    return r.passed() ? kExitOk : kExitConsistency;
  }
  if (cfg.command == "fig2new" || cfg.command == "polar-curve") {
    emit(run_polar(cfg), cfg, std::cout);
    return kExitOk;
  }
  if (cfg.is_point()) {
    print_point(run_point(cfg), std::cout);
    return kExitOk;
  }
  emit(run_sweep(cfg), cfg, std::cout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace dampdisc;

  CLI::App app{"Discrimination of two amplitude damping channels"};
  app.footer("Commands: " + join(command_names()));

  std::string command;
  std::string config_path;
  std::optional<double> eta0, eta1, x, y, alpha;
  std::optional<int> grid;
  std::optional<std::string> out, format, variant;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  std::vector<double> eta0_range, eta1_range;

  app.add_option("command", command, "Strategy or figure preset");
  app.add_option("--config", config_path, "JSON config with the same field names; flags override it");
  app.add_option("--eta0", eta0, "First channel parameter in [0, pi/2]");
  app.add_option("--eta1", eta1, "Second channel parameter in [0, pi/2]");
  app.add_option("--x", x, "Fixed excited-state population in [0, 1]");
  app.add_option("--y", y, "Fixed side-entanglement weight in [0, 1]");
  app.add_option("--alpha", alpha, "Fixed environment measurement angle in [0, pi/2]");
  app.add_option("--grid", grid, "Points per axis (>= 2)");
  app.add_option("--eta0-range", eta0_range, "Sweep range for eta0: LO HI")->expected(2);
  app.add_option("--eta1-range", eta1_range, "Sweep range for eta1: LO HI")->expected(2);
  app.add_option("--out", out, "Output file (default: standard output)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--variant", variant, "Two-shot entangled input: odd or even")
      ->check(CLI::IsMember({"odd", "even"}));
  app.add_option("--seed", seed, "Monte Carlo seed");
  app.add_option("--trials", trials, "Run a Monte Carlo check with this many trials");
  app.set_version_flag("--version", std::string(dampdisc::kVersion));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    SweepConfig cfg = config_path.empty() ? SweepConfig{} : load_config(config_path);
    if (!command.empty()) cfg.command = command;
    if (eta0) cfg.eta0 = eta0;
    if (eta1) cfg.eta1 = eta1;
    if (x) cfg.x = x;
    if (y) cfg.y = y;
    if (alpha) cfg.alpha = alpha;
    if (grid) cfg.grid_n = *grid;
    if (eta0_range.size() == 2) cfg.eta0_range = {eta0_range[0], eta0_range[1]};
    if (eta1_range.size() == 2) cfg.eta1_range = {eta1_range[0], eta1_range[1]};
    if (out) cfg.output_path = *out;
    if (format) cfg.format = *format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    if (variant) cfg.variant = *variant == "even" ? TwoShotVariant::Even : TwoShotVariant::Odd;
    if (seed) cfg.seed = *seed;
    if (trials) cfg.trials = trials;
    return run(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConsistencyError& e) {
    std::cerr << "consistency failure: " << e.what() << '\n';
    return kExitConsistency;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConsistency;
  }
}
