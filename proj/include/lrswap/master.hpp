#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lrswap/local_ops.hpp"
#include "lrswap/process.hpp"
#include "lrswap/reduction.hpp"
#include "lrswap/report.hpp"

namespace lrswap {

// Closed site interval [lo, hi].
struct Window {
  Site lo = 0;
  Site hi = 0;
  bool contains(Site x) const { return lo <= x && x <= hi; }
  bool contains(const Configuration& c) const;
  std::size_t width() const { return static_cast<std::size_t>(hi - lo + 1); }
};

// Continuous-time generator on the admissible configurations inside a window.
// rates[from][to] holds the off-diagonal rate (to != from); self-loops are
// folded into the diagonal; leak[from] is the total rate of leaving the
// window. Forward equation: dP_to/dt = sum_from P_from Q[from][to].
template <class S>
struct GeneratorSystem {
  int particles = 0;
  int species = 0;
  Window window;
  std::vector<Configuration> states;
  std::map<Configuration, std::size_t> index;
  std::vector<std::map<std::size_t, S>> rates;
  std::vector<S> diagonal;
  std::vector<S> leak;

  std::size_t size() const { return states.size(); }
  std::optional<std::size_t> find(const Configuration& c) const;
  double norm_inf() const;  // max_from |diag| + sum_to |rate|
};

// All n-particle configurations in the window, words lexicographic within
// each position tuple.
template <class S>
GeneratorSystem<S> empty_generator(int particles, int species, Window window);

// Rate p (or q) times the exact resolution law, per state, particle and direction.
GeneratorSystem<Rational> build_generator_from_rules(int particles, Window window,
                                                     const ModelParams<Rational>& params);

// Coefficient operators of the evolution equation for U(X): source positions
// -> C with dU(X)/dt = sum C U(source). Blocked terms are replaced by block
// elimination; the entry for X itself includes the -n diagonal.
template <class S>
using EquationTerms = std::map<std::vector<Site>, SpeciesOperator<S>>;

template <class S>
EquationTerms<S> equation_terms(const std::vector<Site>& x, const ModelParams<S>& params,
                                EliminationOrder order = EliminationOrder::Forward);

// Free operator plus boundary elimination; particles <= 3.
template <class S>
GeneratorSystem<S> build_generator_bethe(int particles, Window window, const ModelParams<S>& params,
                                         EliminationOrder order = EliminationOrder::Forward);

// Two particles, written directly from the adjacent-pair evolution equation
// with M^r = N^l = B and N^r = M^l = B'.
GeneratorSystem<Rational> build_generator_pair_equation(Window window, const ModelParams<Rational>& params);

// p[B U(x-1,x) + B' U(x,x+1)] + q[B' U(x+1,x+2) + B U(x,x+1)] = p U(x,x) + q U(x+1,x+1)
// with both coinciding terms expanded by the pair boundary condition.
VerificationReport pair_boundary_identity(const ModelParams<Rational>& params);

GeneratorSystem<double> to_double(const GeneratorSystem<Rational>& g);

// Exact entrywise comparison: state lists, rates, diagonals, leaks.
VerificationReport compare_generators(const GeneratorSystem<Rational>& a, const GeneratorSystem<Rational>& b,
                                      const std::string& label = {});

// Off-diagonal rates and leaks nonnegative; diagonal + rates + leak = 0 per row.
VerificationReport check_generator(const GeneratorSystem<Rational>& g, const std::string& label = {});

struct DistributionGrid {
  double time = 0.0;
  std::vector<double> mass;  // per generator state
  double leaked = 0.0;
  double total() const;
};

DistributionGrid point_mass(const GeneratorSystem<double>& g, const Configuration& c);

class IntegrationFailure : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Classical RK4 for the forward equation plus the leak channel. dt <= 0 picks
// 0.01 / ||Q||_inf; a larger dt throws std::invalid_argument. Mass
// conservation (including leak) is enforced to 1e-9.
DistributionGrid integrate(const GeneratorSystem<double>& g, const DistributionGrid& initial, double t, double dt = 0.0);

// Monte Carlo law of the configuration at time t; samples ending outside the
// window go to `leaked`.
DistributionGrid sample_distribution(const GeneratorSystem<double>& g, const Configuration& initial, double t,
                                     const ModelParams<double>& params, std::size_t samples, std::uint64_t seed,
                                     unsigned threads = 1);

// Half the L1 distance, with the leak treated as one extra outcome.
double total_variation(const DistributionGrid& a, const DistributionGrid& b);

void write_distribution_csv(std::ostream& out, const GeneratorSystem<double>& g, const DistributionGrid& d);

}  // namespace lrswap
