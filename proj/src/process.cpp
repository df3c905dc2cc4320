#include "lrswap/process.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "lrswap/algebra.hpp"
#include "lrswap/parallel.hpp"

namespace lrswap {

bool Configuration::admissible() const {
  if (positions.size() != word.size()) return false;
  for (std::size_t i = 1; i < positions.size(); ++i)
    if (positions[i] <= positions[i - 1]) return false;
  return true;
}

void Configuration::validate(int species) const {
  if (positions.size() != word.size()) throw std::invalid_argument("positions and word differ in length");
  if (!admissible()) throw std::invalid_argument("positions must be strictly increasing: " + to_string(*this));
  for (std::size_t i = 0; i < word.size(); ++i)
    if (word[i] < 1 || word[i] > species)
      throw std::invalid_argument("species label " + std::to_string(word[i]) + " outside [1, " +
                                  std::to_string(species) + "]");
}

std::string to_string(const Configuration& c) {
  std::string out;
  for (std::size_t i = 0; i < c.positions.size(); ++i) out += (i ? "," : "") + std::to_string(c.positions[i]);
  return out + "|" + to_string(c.word);
}

std::string to_string(Direction d) { return d == Direction::Right ? "right" : "left"; }

Configuration block_configuration(const Word& w, Site first) {
  Configuration c;
  c.word = w;
  for (std::size_t i = 0; i < w.size(); ++i) c.positions.push_back(first + static_cast<Site>(i));
  return c;
}

namespace {

using Occupancy = std::vector<std::pair<Site, int>>;

Occupancy occupancy_of(const Configuration& c) {
  Occupancy occ;
  occ.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) occ.emplace_back(c.positions[i], c.word[i]);
  return occ;
}

Configuration configuration_of(const Occupancy& occ) {
  Configuration c;
  std::vector<int> letters;
  for (const auto& [s, a] : occ) {
    c.positions.push_back(s);
    letters.push_back(a);
  }
  c.word = Word(std::move(letters));
  return c;
}

Occupancy::iterator find_site(Occupancy& occ, Site s) {
  return std::lower_bound(occ.begin(), occ.end(), s, [](const auto& e, Site v) { return e.first < v; });
}

void check_mover(const Configuration& config, std::size_t k, int species) {
  config.validate(species);
  if (k >= config.size())
    throw std::out_of_range("particle index " + std::to_string(k) + " outside a configuration of " +
                            std::to_string(config.size()) + " particles");
}

}  // namespace

Configuration resolve_collision(const Configuration& config, std::size_t k, Direction dir,
                                const ModelParams<double>& params, Rng& rng) {
  check_mover(config, k, params.species);
  Occupancy occ = occupancy_of(config);
  int a = occ[k].second;
  int d = sign(dir);
  Site s = occ[k].first + d;
  occ.erase(occ.begin() + static_cast<std::ptrdiff_t>(k));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (std::size_t step = 0; step < kResolutionStepCap; ++step) {
    auto it = find_site(occ, s);
    if (it == occ.end() || it->first != s) {
      occ.insert(it, {s, a});
      return configuration_of(occ);
    }
    const int b = it->second;
    bool jump = a < b;
    if (a == b) {
      const double pj = d > 0 ? params.mu_of(a) : 1.0 - params.mu_of(a);
      jump = pj >= 1.0 || (pj > 0.0 && unit(rng) < pj);
    }
    if (jump) {
      s += d;
      continue;
    }
    // swap: the token settles, the resident turns back into the side it came from
    it->second = a;
    a = b;
    d = -d;
    s += d;
  }
  throw ResolutionCapExceeded("collision resolution exceeded " + std::to_string(kResolutionStepCap) +
                              " steps starting from " + to_string(config));
}

namespace {

struct Hidden {
  Occupancy settled;
  int token = 0;
  Site site = 0;
  int dir = 1;
  auto operator<=>(const Hidden&) const = default;
};

}  // namespace

OutcomeDistribution exact_resolution_distribution(const Configuration& config, std::size_t k, Direction dir,
                                                  const ModelParams<Rational>& params, std::size_t state_cap) {
  params.validate();
  check_mover(config, k, params.species);
  Hidden start;
  start.settled = occupancy_of(config);
  start.token = start.settled[k].second;
  start.dir = sign(dir);
  start.site = start.settled[k].first + start.dir;
  start.settled.erase(start.settled.begin() + static_cast<std::ptrdiff_t>(k));

  std::map<Hidden, std::size_t> index;
  std::vector<Hidden> states;
  std::map<Configuration, std::size_t> outcome_index;
  std::vector<Configuration> outcomes;
  // per transient state: (target, probability), target >= 0 transient, < 0 absorbing ~(id)
  std::vector<std::vector<std::pair<long, Rational>>> edges;

  auto intern = [&](Hidden h) -> long {
    Occupancy& occ = h.settled;
    auto it = find_site(occ, h.site);
    if (it == occ.end() || it->first != h.site) {
      occ.insert(it, {h.site, h.token});
      auto cfg = configuration_of(occ);
      auto [pos, inserted] = outcome_index.emplace(cfg, outcomes.size());
      if (inserted) outcomes.push_back(std::move(cfg));
      return -static_cast<long>(pos->second) - 1;
    }
    auto [pos, inserted] = index.emplace(h, states.size());
    if (inserted) {
      if (states.size() >= state_cap)
        throw OracleCapacityError("hidden-state graph exceeds " + std::to_string(state_cap) + " states");
      states.push_back(std::move(h));
    }
    return static_cast<long>(pos->second);
  };

  const long root = intern(start);
  if (root < 0) return {{outcomes[0], Rational(1)}};

  for (std::size_t i = 0; i < states.size(); ++i) {
    Hidden h = states[i];
    auto it = find_site(h.settled, h.site);
    const int b = it->second;
    std::vector<std::pair<long, Rational>> out;
    Rational pj = h.token < b ? Rational(1) : Rational(0);
    if (h.token == b) pj = h.dir > 0 ? params.mu_of(b) : params.lambda_of(b);
    if (!is_zero(pj)) {
      Hidden next = h;
      next.site += h.dir;
      out.emplace_back(intern(std::move(next)), pj);
    }
    if (pj != 1) {
      Hidden next = h;
      auto jt = find_site(next.settled, next.site);
      jt->second = h.token;
      next.token = b;
      next.dir = -h.dir;
      next.site += next.dir;
      out.emplace_back(intern(std::move(next)), 1 - pj);
    }
    edges.push_back(std::move(out));
  }

  // absorption probabilities from the root: row root of (I - Q)^{-1} R
  const std::size_t t = states.size();
  Matrix<Rational> m = Matrix<Rational>::identity(t);
  for (std::size_t i = 0; i < t; ++i)
    for (const auto& [target, prob] : edges[i])
      if (target >= 0) m(i, static_cast<std::size_t>(target)) -= prob;
  const auto fundamental = exact_inverse(m);
  OutcomeDistribution dist;
  Rational total = 0;
  for (std::size_t i = 0; i < t; ++i) {
    const Rational& weight = fundamental(static_cast<std::size_t>(root), i);
    if (is_zero(weight)) continue;
    for (const auto& [target, prob] : edges[i])
      if (target < 0) {
        Rational add = weight * prob;
        dist[outcomes[static_cast<std::size_t>(-target - 1)]] += add;
        total += add;
      }
  }
  if (total != 1) throw std::logic_error("resolution probabilities sum to " + to_string(total));
  return dist;
}

std::map<Configuration, std::size_t> empirical_resolution(const Configuration& config, std::size_t k, Direction dir,
                                                          const ModelParams<double>& params, std::size_t draws,
                                                          std::uint64_t seed, unsigned threads) {
  threads = std::max(1u, threads);
  std::vector<std::map<Configuration, std::size_t>> partial(threads);
  const std::size_t chunk = (draws + threads - 1) / threads;
  parallel_for(threads, threads, [&](std::size_t w) {
    const std::size_t end = std::min(draws, (w + 1) * chunk);
    for (std::size_t i = w * chunk; i < end; ++i) {
      Rng rng = trial_rng(seed, i);
      ++partial[w][resolve_collision(config, k, dir, params, rng)];
    }
  });
  std::map<Configuration, std::size_t> out;
  for (const auto& p : partial)
    for (const auto& [c, n] : p) out[c] += n;
  return out;
}

namespace {

template <class Record>
Configuration run_gillespie(const Configuration& initial, double t_max, const ModelParams<double>& params, Rng& rng,
                            Record&& record) {
  params.validate();
  initial.validate(params.species);
  if (!(t_max >= 0.0)) throw std::invalid_argument("t_max must be >= 0");
  Configuration current = initial;
  const std::size_t n = current.size();
  if (n == 0) return current;
  std::exponential_distribution<double> wait(static_cast<double>(n));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::bernoulli_distribution rightward(params.p);
  double t = 0.0;
  for (;;) {
    t += wait(rng);
    if (t > t_max) return current;
    const std::size_t k = pick(rng);
    const Direction d = rightward(rng) ? Direction::Right : Direction::Left;
    Configuration next = resolve_collision(current, k, d, params, rng);
    record(t, k, d, current, next);
    current = std::move(next);
  }
}

}  // namespace

Trajectory simulate(const Configuration& initial, double t_max, const ModelParams<double>& params,
                    std::uint64_t seed) {
  Trajectory out;
  out.seed = seed;
  out.initial = initial;
  Rng rng(seed);
  out.final = run_gillespie(initial, t_max, params, rng,
                            [&](double t, std::size_t k, Direction d, const Configuration& pre,
                                const Configuration& post) { out.events.push_back({t, k, d, pre, post}); });
  return out;
}

Configuration simulate_final(const Configuration& initial, double t_max, const ModelParams<double>& params,
                             Rng& rng) {
  return run_gillespie(initial, t_max, params, rng,
                       [](double, std::size_t, Direction, const Configuration&, const Configuration&) {});
}

void write_trajectory_csv(std::ostream& out, const Trajectory& t) {
  auto positions = [](const Configuration& c) {
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? ";" : "") + std::to_string(c.positions[i]);
    return s;
  };
  out << "time,particle,direction,positions,word\n";
  out << std::setprecision(17);
  out << 0.0 << ",,," << positions(t.initial) << "," << to_string(t.initial.word) << "\n";
  for (const auto& e : t.events)
    out << e.time << "," << e.particle << "," << to_string(e.direction) << "," << positions(e.post) << ","
        << to_string(e.post.word) << "\n";
}

ShiftRateEstimate estimate_shift_rate(int sites, int species_label, const ModelParams<double>& params,
                                      std::size_t trials, std::uint64_t seed, unsigned threads) {
  params.validate();
  if (sites < 1) throw std::invalid_argument("block needs at least one particle");
  if (species_label < 1 || species_label > params.species) throw std::invalid_argument("species label out of range");
  if (trials < 10'000) throw std::invalid_argument("estimate_shift_rate needs at least 10^4 trials");
  const Configuration block = block_configuration(Word(std::vector<int>(static_cast<std::size_t>(sites), species_label)));
  Configuration shifted = block;
  for (auto& x : shifted.positions) ++x;

  threads = std::max(1u, threads);
  std::vector<std::size_t> hits(threads, 0);
  const std::size_t chunk = (trials + threads - 1) / threads;
  parallel_for(threads, threads, [&](std::size_t w) {
    const std::size_t end = std::min(trials, (w + 1) * chunk);
    for (std::size_t i = w * chunk; i < end; ++i) {
      Rng rng = trial_rng(seed, i);
      if (resolve_collision(block, 0, Direction::Right, params, rng) == shifted) ++hits[w];
    }
  });

  ShiftRateEstimate e;
  e.sites = sites;
  e.species = species_label;
  e.trials = trials;
  e.seed = seed;
  for (auto h : hits) e.shifts += h;
  e.frequency = static_cast<double>(e.shifts) / static_cast<double>(trials);
  const double half = 3.0 * std::sqrt(e.frequency * (1.0 - e.frequency) / static_cast<double>(trials));
  e.rate = params.p * e.frequency;
  e.ci_low = params.p * (e.frequency - half);
  e.ci_high = params.p * (e.frequency + half);
  return e;
}

}  // namespace lrswap
