#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lrswap/local_ops.hpp"
#include "lrswap/rng.hpp"
#include "lrswap/word.hpp"

namespace lrswap {

using Site = long long;

// Occupied sites in increasing order and the species word read left to right.
struct Configuration {
  std::vector<Site> positions;
  Word word;

  std::size_t size() const { return positions.size(); }
  bool admissible() const;  // strictly increasing, lengths agree
  void validate(int species) const;  // throws std::invalid_argument

  auto operator<=>(const Configuration&) const = default;
};

std::string to_string(const Configuration& c);  // "0,1,2|112"

enum class Direction : int { Left = -1, Right = 1 };
inline int sign(Direction d) { return static_cast<int>(d); }
std::string to_string(Direction d);

// Consecutive sites starting at `first`.
Configuration block_configuration(const Word& w, Site first = 0);

class ResolutionCapExceeded : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kResolutionStepCap = 1'000'000;

// Particle k (0-based, left to right) attempts one step in direction dir; the
// collision is resolved with an explicit active token until it settles.
Configuration resolve_collision(const Configuration& config, std::size_t k, Direction dir,
                                const ModelParams<double>& params, Rng& rng);

using OutcomeDistribution = std::map<Configuration, Rational>;

class OracleCapacityError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kOracleStateCap = 10'000;

// Exact law of resolve_collision: absorbing-chain solve over the hidden
// states (settled particles, active token).
OutcomeDistribution exact_resolution_distribution(const Configuration& config, std::size_t k, Direction dir,
                                                  const ModelParams<Rational>& params,
                                                  std::size_t state_cap = kOracleStateCap);

// Counts of resolve_collision outcomes over `draws` independent streams.
std::map<Configuration, std::size_t> empirical_resolution(const Configuration& config, std::size_t k, Direction dir,
                                                          const ModelParams<double>& params, std::size_t draws,
                                                          std::uint64_t seed, unsigned threads = 1);

struct TrajectoryEvent {
  double time = 0.0;
  std::size_t particle = 0;
  Direction direction = Direction::Right;
  Configuration pre, post;
};

struct Trajectory {
  std::uint64_t seed = 0;
  Configuration initial, final;
  std::vector<TrajectoryEvent> events;
};

// Gillespie dynamics: total rate n, particle uniform, right with probability p.
Trajectory simulate(const Configuration& initial, double t_max, const ModelParams<double>& params,
                    std::uint64_t seed);

// Same dynamics without the event log.
Configuration simulate_final(const Configuration& initial, double t_max, const ModelParams<double>& params, Rng& rng);

void write_trajectory_csv(std::ostream& out, const Trajectory& t);

struct ShiftRateEstimate {
  int sites = 0;
  int species = 0;
  std::size_t trials = 0;
  std::size_t shifts = 0;
  std::uint64_t seed = 0;
  double frequency = 0.0;  // shifts / trials
  double rate = 0.0;       // p * frequency
  double ci_low = 0.0;     // Wald 3 sigma, scaled by p
  double ci_high = 0.0;
  bool brackets(double value) const { return ci_low <= value && value <= ci_high; }
};

// Leftmost particle of a block of `sites` particles of one species attempts a
// rightward step; a full shift is the whole block moved one site right.
ShiftRateEstimate estimate_shift_rate(int sites, int species_label, const ModelParams<double>& params,
                                      std::size_t trials, std::uint64_t seed, unsigned threads = 1);

}  // namespace lrswap
