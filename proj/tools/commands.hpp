#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "lrswap/local_ops.hpp"
#include "lrswap/master.hpp"
#include "lrswap/process.hpp"
#include "lrswap/rational.hpp"

namespace lrswap::cli {

class ConfigError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class Mode { Exact, Float };

struct RunConfig {
  int species = 2;                                   // N
  std::optional<std::vector<Rational>> mu;           // default (1/3, 2/5) for N = 2
  Rational p = 1;
  int particles = 2;                                 // n
  std::uint64_t seed = 1;
  std::size_t trials = 1'000'000;
  double t_max = 1.0;
  std::optional<Window> window;                      // default depends on n
  std::string out;
  Mode mode = Mode::Exact;
  std::optional<double> tolerance;                   // default depends on the command
  std::size_t points = 50;                           // spectral points
  std::size_t draws = 0;                             // 0: use mu as given
  std::optional<Configuration> initial;
  std::string order = "both";                        // forward | backward | both
  std::vector<std::array<Rational, 3>> spectral_points;
  std::string distribution_csv;
  bool tamper = false;

  ModelParams<Rational> params() const;  // throws ConfigError
  std::vector<Rational> resolved_mu() const;  // empty when unset and N != 2
  Window resolved_window() const;
  Configuration resolved_initial() const;
  void validate() const;                 // throws ConfigError
  nlohmann::ordered_json to_json() const;
};

// Fields of a JSON document onto the defaults; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& doc);

// argv without the program name. Exit codes: 0 pass, 1 verification
// failure, 2 usage or config error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lrswap::cli
