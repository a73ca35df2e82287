#pragma once

// Experiment runner behind the command-line tool: flat key=value
// configuration, single-point evaluation, sweep presets, table
// reproduction, region maps and Monte Carlo verification.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cogcap/policy.hpp"

namespace cogcap {

/// Bad configuration; what() starts with the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A number as written (e.g. "5dB") and its linear value.
struct Quantity {
  std::string text;
  double linear = 0.0;
  bool operator==(const Quantity&) const = default;
};

/// Parses "3.2", "1e-3" or "5dB" (10^(x/10)). Throws ConfigError(field).
Quantity parse_quantity(const std::string& text, const std::string& field);

/// Formats with 12 significant digits; "inf"/"-inf"/"nan" for non-finite values.
std::string format_number(double value);

struct ExperimentConfig {
  std::string budget = "average";  // average | peak
  Quantity p_avg{"1", 1.0};
  Quantity p_peak{"1", 1.0};
  std::string outage = "interference";  // interference | si
  Quantity q_peak{"10", 10.0};
  Quantity p_pp{"10", 10.0};
  Quantity lambda_th{"1", 1.0};
  double epsilon = 0.042;
  double sigma_p_sq = 1.0;

  // Sweeps
  std::string sweep;                // swept key, empty when unset
  std::string grid;                 // "a,b,c" or "lo:hi:step" (dB when lo has the suffix)
  std::string sigma_p_sq_set = "0,0.1,0.5,1";
  std::string p_avg_set = "0dB,5dB,10dB,15dB";

  double hp_hat_sq = 1.0;  // fixed estimate for fig3
  std::uint64_t n = 1'000'000;
  std::uint64_t seed = 20240607;
  double cap_scale = 1.0;  // test hook: inflates the policy cap

  bool operator==(const ExperimentConfig&) const = default;

  ConstraintSpec spec() const;

  /// Rejects bad values; the ConfigError names the key.
  void validate() const;

  /// key=value lines that parse back to an identical config.
  std::string echo() const;
};

/// Applies one "key=value" assignment. Throws ConfigError for unknown keys
/// and unparsable values.
void apply_setting(ExperimentConfig& config, const std::string& assignment);

/// Applies a config file body: one assignment per line, '#' comments.
void apply_config_text(ExperimentConfig& config, const std::string& text);

ExperimentConfig parse_config_text(const std::string& text);

/// Expands the grid string into strictly increasing quantities.
std::vector<Quantity> expand_grid(const std::string& grid, const std::string& field);

/// Default assignments of a preset, applied before user settings.
/// Throws ConfigError("preset") for an unknown name.
std::vector<std::string> preset_defaults(const std::string& preset);

/// A rectangular CSV table.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write_csv(std::ostream& os) const;
};

namespace experiment {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kUsageError = 2 };

/// Prints the capacity by every applicable method and the policy regime.
/// The single-row CSV form is returned for --out.
Table run_eval(const ExperimentConfig& config, std::ostream& report);

/// Runs a preset (fig2..fig8, regions) or, for an empty name, the free-form
/// sweep of config.sweep over config.grid.
Table run_sweep(const std::string& preset, const ExperimentConfig& config);

struct VerifyOutcome {
  bool pass = false;
  Table table;
};

/// Monte Carlo verification of the configured spec.
VerifyOutcome run_verify(const ExperimentConfig& config, std::ostream& report);

struct Table1Outcome {
  Table table;
  double max_discrepancy = 0.0;
};

/// Closed form against quadrature for every no-CSI row kind.
Table1Outcome run_table1();

}  // namespace experiment
}  // namespace cogcap
