#include "lrswap/master.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <tuple>

#include "lrswap/parallel.hpp"

namespace lrswap {

bool Window::contains(const Configuration& c) const {
  return std::all_of(c.positions.begin(), c.positions.end(), [&](Site x) { return contains(x); });
}

template <class S>
std::optional<std::size_t> GeneratorSystem<S>::find(const Configuration& c) const {
  auto it = index.find(c);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

template <class S>
double GeneratorSystem<S>::norm_inf() const {
  double best = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    double row = std::abs(to_double(diagonal[i]));
    for (const auto& [to, r] : rates[i]) row += std::abs(to_double(r));
    best = std::max(best, row);
  }
  return best;
}

template struct GeneratorSystem<Rational>;
template struct GeneratorSystem<double>;

namespace {

void position_tuples(int particles, Window window, std::vector<Site>& current,
                     std::vector<std::vector<Site>>& out) {
  if (static_cast<int>(current.size()) == particles) {
    out.push_back(current);
    return;
  }
  const Site start = current.empty() ? window.lo : current.back() + 1;
  const Site remaining = particles - static_cast<Site>(current.size()) - 1;
  for (Site x = start; x + remaining <= window.hi; ++x) {
    current.push_back(x);
    position_tuples(particles, window, current, out);
    current.pop_back();
  }
}

std::vector<std::vector<Site>> position_tuples(int particles, Window window) {
  std::vector<std::vector<Site>> out;
  std::vector<Site> current;
  position_tuples(particles, window, current, out);
  return out;
}

void check_system_size(int particles, int species, Window window) {
  if (particles < 1) throw std::invalid_argument("particle count must be >= 1");
  if (species < 1) throw std::invalid_argument("species count must be >= 1");
  if (window.hi < window.lo || window.width() < static_cast<std::size_t>(particles))
    throw std::invalid_argument("window [" + std::to_string(window.lo) + ", " + std::to_string(window.hi) +
                                "] cannot hold " + std::to_string(particles) + " particles");
}

}  // namespace

template <class S>
GeneratorSystem<S> empty_generator(int particles, int species, Window window) {
  check_system_size(particles, species, window);
  GeneratorSystem<S> g;
  g.particles = particles;
  g.species = species;
  g.window = window;
  const std::size_t words = basis_dimension(species, particles);
  for (const auto& pos : position_tuples(particles, window))
    for (std::size_t w = 0; w < words; ++w) {
      Configuration c{pos, index_word(w, particles, species)};
      g.index.emplace(c, g.states.size());
      g.states.push_back(std::move(c));
    }
  g.rates.resize(g.size());
  g.diagonal.assign(g.size(), S(0));
  g.leak.assign(g.size(), S(0));
  return g;
}

template GeneratorSystem<Rational> empty_generator(int, int, Window);
template GeneratorSystem<double> empty_generator(int, int, Window);

GeneratorSystem<Rational> build_generator_from_rules(int particles, Window window,
                                                     const ModelParams<Rational>& params) {
  params.validate();
  auto g = empty_generator<Rational>(particles, params.species, window);
  // Resolution stays on the mover's consecutive run plus the first empty
  // site beyond it, so outcomes are cached per (run word, mover, direction).
  std::map<std::tuple<Word, std::size_t, int>, OutcomeDistribution> cache;
  const Rational q = params.q();
  for (std::size_t from = 0; from < g.size(); ++from) {
    const auto& c = g.states[from];
    const auto n = c.size();
    Rational self = -Rational(particles);
    for (std::size_t k = 0; k < n; ++k)
      for (Direction dir : {Direction::Right, Direction::Left}) {
        const Rational& rate = dir == Direction::Right ? params.p : q;
        if (is_zero(rate)) continue;
        std::size_t lo = k, hi = k;
        if (dir == Direction::Right)
          while (hi + 1 < n && c.positions[hi + 1] == c.positions[hi] + 1) ++hi;
        else
          while (lo > 0 && c.positions[lo - 1] == c.positions[lo] - 1) --lo;
        std::vector<int> letters(c.word.letters().begin() + lo, c.word.letters().begin() + hi + 1);
        Word run(std::move(letters));
        auto key = std::make_tuple(run, k - lo, sign(dir));
        auto it = cache.find(key);
        if (it == cache.end())
          it = cache.emplace(key, exact_resolution_distribution(block_configuration(run), k - lo, dir, params)).first;
        for (const auto& [local, prob] : it->second) {
          Configuration next;
          next.positions.assign(c.positions.begin(), c.positions.begin() + lo);
          next.word = Word(std::vector<int>(c.word.letters().begin(), c.word.letters().begin() + lo));
          std::vector<int> letters_out = next.word.letters();
          for (std::size_t t = 0; t < local.size(); ++t) {
            next.positions.push_back(local.positions[t] + c.positions[lo]);
            letters_out.push_back(local.word[t]);
          }
          for (std::size_t t = hi + 1; t < n; ++t) {
            next.positions.push_back(c.positions[t]);
            letters_out.push_back(c.word[t]);
          }
          next.word = Word(std::move(letters_out));
          const Rational r = rate * prob;
          if (next == c) {
            self += r;
          } else if (auto to = g.find(next)) {
            g.rates[from][*to] += r;
          } else {
            g.leak[from] += r;
          }
        }
      }
    g.diagonal[from] = self;
  }
  return g;
}

namespace {

template <class S>
class BetheAssembler {
 public:
  BetheAssembler(const ModelParams<S>& params, EliminationOrder order) : params_(params), order_(order) {}

  EquationTerms<S> terms(const std::vector<Site>& x) {
    const int n = static_cast<int>(x.size());
    const int species = params_.species;
    const auto I = SpeciesOperator<S>::identity(species, n);
    const S p = params_.p;
    const S q = params_.q();
    EquationTerms<S> out;
    auto add = [&](const std::vector<Site>& src, const SpeciesOperator<S>& c) {
      auto it = out.find(src);
      if (it == out.end())
        out.emplace(src, c);
      else
        it->second = it->second + c;
    };
    add(x, S(-n) * I);
    for (int i = 0; i < n; ++i) {
      const auto iu = static_cast<std::size_t>(i);
      if (!is_zero(p)) {
        if (i == 0 || x[iu - 1] < x[iu] - 1) {
          auto y = x;
          --y[iu];
          add(y, p * I);
        } else {
          int s = i - 1;
          while (s > 0 && x[static_cast<std::size_t>(s) - 1] == x[static_cast<std::size_t>(s)] - 1) --s;
          const int m = i - s;
          const auto& e = elimination(m, s + 1, n);
          auto w0 = x;
          for (int t = 0; t <= m; ++t) w0[static_cast<std::size_t>(s + t)] = x[static_cast<std::size_t>(s)] - 1 + t;
          add(w0, p * e.L[static_cast<std::size_t>(m) - 1]);
          add(x, p * e.Lprime[static_cast<std::size_t>(m) - 1]);
        }
      }
      if (!is_zero(q)) {
        if (i == n - 1 || x[iu + 1] > x[iu] + 1) {
          auto y = x;
          ++y[iu];
          add(y, q * I);
        } else {
          int e_end = i + 1;
          while (e_end < n - 1 && x[static_cast<std::size_t>(e_end) + 1] == x[static_cast<std::size_t>(e_end)] + 1)
            ++e_end;
          const int m = e_end - i;
          const auto& e = elimination(m, i + 1, n);
          auto w_last = x;
          for (int t = i; t <= e_end; ++t) ++w_last[static_cast<std::size_t>(t)];
          add(x, q * e.L[0]);
          add(w_last, q * e.Lprime[0]);
        }
      }
    }
    return out;
  }

 private:
  const EliminationResult<S>& elimination(int m, int j, int sites) {
    auto key = std::make_tuple(m, j, sites);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, eliminate_block(m, j, sites, params_, order_)).first;
    return it->second;
  }

  ModelParams<S> params_;
  EliminationOrder order_;
  std::map<std::tuple<int, int, int>, EliminationResult<S>> cache_;
};

// Scatter C U(source) of the equation for U(x) into the generator.
template <class S>
void assemble(GeneratorSystem<S>& g, const std::function<EquationTerms<S>(const std::vector<Site>&)>& terms_of) {
  const std::size_t words = basis_dimension(g.species, g.particles);
  for (const auto& x : position_tuples(g.particles, g.window)) {
    for (const auto& [src, coef] : terms_of(x)) {
      Configuration probe{src, Word{}};
      if (!g.window.contains(probe)) continue;
      for (std::size_t pi = 0; pi < words; ++pi)
        for (std::size_t sigma = 0; sigma < words; ++sigma) {
          const S& v = coef(pi, sigma);
          if (is_zero(v)) continue;
          const std::size_t to = g.index.at(Configuration{x, index_word(pi, g.particles, g.species)});
          const std::size_t from = g.index.at(Configuration{src, index_word(sigma, g.particles, g.species)});
          if (to == from)
            g.diagonal[to] += v;
          else
            g.rates[from][to] += v;
        }
    }
  }
  for (std::size_t from = 0; from < g.size(); ++from) {
    S out = -g.diagonal[from];
    for (const auto& [to, r] : g.rates[from]) out -= r;
    g.leak[from] = out;
  }
}

}  // namespace

template <class S>
EquationTerms<S> equation_terms(const std::vector<Site>& x, const ModelParams<S>& params, EliminationOrder order) {
  params.validate();
  if (x.empty() || !std::is_sorted(x.begin(), x.end()) || std::adjacent_find(x.begin(), x.end()) != x.end())
    throw std::invalid_argument("positions must be strictly increasing");
  return BetheAssembler<S>(params, order).terms(x);
}

template EquationTerms<Rational> equation_terms(const std::vector<Site>&, const ModelParams<Rational>&,
                                                EliminationOrder);
template EquationTerms<double> equation_terms(const std::vector<Site>&, const ModelParams<double>&, EliminationOrder);

template <class S>
GeneratorSystem<S> build_generator_bethe(int particles, Window window, const ModelParams<S>& params,
                                         EliminationOrder order) {
  params.validate();
  if (particles > 3) throw std::invalid_argument("the boundary elimination generator is built for n <= 3");
  auto g = empty_generator<S>(particles, params.species, window);
  BetheAssembler<S> assembler(params, order);
  assemble<S>(g, [&](const std::vector<Site>& x) { return assembler.terms(x); });
  return g;
}

template GeneratorSystem<Rational> build_generator_bethe(int, Window, const ModelParams<Rational>&, EliminationOrder);
template GeneratorSystem<double> build_generator_bethe(int, Window, const ModelParams<double>&, EliminationOrder);

GeneratorSystem<Rational> build_generator_pair_equation(Window window, const ModelParams<Rational>& params) {
  params.validate();
  auto g = empty_generator<Rational>(2, params.species, window);
  const auto pair = build_local_pair(params);
  const auto I = SpeciesOperator<Rational>::identity(params.species, 2);
  const Rational p = params.p, q = params.q();
  const auto& Mr = pair.B;
  const auto& Nr = pair.Bprime;
  const auto& Ml = pair.Bprime;
  const auto& Nl = pair.B;
  assemble<Rational>(g, [&](const std::vector<Site>& x) {
    const Site a = x[0], b = x[1];
    EquationTerms<Rational> t;
    if (b > a + 1) {
      t.emplace(std::vector<Site>{a - 1, b}, p * I);
      t.emplace(std::vector<Site>{a, b - 1}, p * I);
      t.emplace(std::vector<Site>{a + 1, b}, q * I);
      t.emplace(std::vector<Site>{a, b + 1}, q * I);
      t.emplace(x, Rational(-2) * I);
    } else {
      t.emplace(std::vector<Site>{a - 1, a + 1}, p * I);
      t.emplace(std::vector<Site>{a - 1, a}, p * Mr);
      t.emplace(std::vector<Site>{a, a + 2}, q * I);
      t.emplace(std::vector<Site>{a + 1, a + 2}, q * Ml);
      t.emplace(x, p * Nr + q * Nl - Rational(2) * I);
    }
    return t;
  });
  return g;
}

namespace {

std::string positions_text(const std::vector<Site>& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + std::to_string(x[i]);
  return s + ")";
}

std::string compare_terms(const EquationTerms<Rational>& expected, const EquationTerms<Rational>& actual) {
  auto nonzero = [](const EquationTerms<Rational>& t) {
    EquationTerms<Rational> out;
    for (const auto& [k, v] : t)
      if (!v.matrix().is_zero()) out.emplace(k, v);
    return out;
  };
  const auto e = nonzero(expected), a = nonzero(actual);
  for (const auto& [k, v] : e) {
    auto it = a.find(k);
    if (it == a.end()) return "missing term U" + positions_text(k);
    if (!(it->second == v)) return "coefficient of U" + positions_text(k) + " differs";
  }
  for (const auto& [k, v] : a)
    if (!e.count(k)) return "unexpected term U" + positions_text(k);
  return {};
}

}  // namespace

VerificationReport pair_boundary_identity(const ModelParams<Rational>& params) {
  params.validate();
  VerificationReport report;
  const auto pair = build_local_pair(params);
  const int N = params.species;
  const auto I = SpeciesOperator<Rational>::identity(N, 2);
  const Rational p = params.p, q = params.q();
  using V = std::vector<Site>;

  // Left side: the interaction terms of the adjacent-pair equation at (0,1).
  EquationTerms<Rational> lhs{{V{-1, 0}, p * pair.B}, {V{0, 1}, p * pair.Bprime + q * pair.B}, {V{1, 2}, q * pair.Bprime}};
  // Right side: p U(0,0) + q U(1,1), each expanded by U(x,x) = B U(x-1,x) + B' U(x,x+1).
  EquationTerms<Rational> rhs;
  auto add = [&](const V& k, const SpeciesOperator<Rational>& c) {
    auto it = rhs.find(k);
    if (it == rhs.end())
      rhs.emplace(k, c);
    else
      it->second = it->second + c;
  };
  add(V{-1, 0}, p * pair.B);
  add(V{0, 1}, p * pair.Bprime);
  add(V{0, 1}, q * pair.B);
  add(V{1, 2}, q * pair.Bprime);
  auto diff = compare_terms(lhs, rhs);
  report.add("pair equation from the boundary condition at x and x+1", diff.empty(), diff);

  // The assembled equation at (0,1) is the free part plus the left side.
  EquationTerms<Rational> expected = lhs;
  expected.emplace(V{-1, 1}, p * I);
  expected.emplace(V{0, 2}, q * I);
  expected.at(V{0, 1}) = expected.at(V{0, 1}) - Rational(2) * I;
  for (auto order : {EliminationOrder::Forward, EliminationOrder::Backward}) {
    diff = compare_terms(expected, equation_terms(V{0, 1}, params, order));
    report.add(std::string("assembled adjacent-pair equation (") +
                   (order == EliminationOrder::Forward ? "forward" : "backward") + " elimination)",
               diff.empty(), diff);
  }

  // Separated pair: free walk only.
  EquationTerms<Rational> free{{V{-1, 3}, p * I}, {V{0, 2}, p * I}, {V{1, 3}, q * I}, {V{0, 4}, q * I}, {V{0, 3}, Rational(-2) * I}};
  diff = compare_terms(free, equation_terms(V{0, 3}, params));
  report.add("separated pair equation is free", diff.empty(), diff);
  return report;
}

GeneratorSystem<double> to_double(const GeneratorSystem<Rational>& g) {
  GeneratorSystem<double> out;
  out.particles = g.particles;
  out.species = g.species;
  out.window = g.window;
  out.states = g.states;
  out.index = g.index;
  out.rates.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (const auto& [to, r] : g.rates[i]) out.rates[i][to] = r.get_d();
  for (const auto& d : g.diagonal) out.diagonal.push_back(d.get_d());
  for (const auto& l : g.leak) out.leak.push_back(l.get_d());
  return out;
}

VerificationReport compare_generators(const GeneratorSystem<Rational>& a, const GeneratorSystem<Rational>& b,
                                      const std::string& label) {
  VerificationReport report;
  const std::string prefix = label.empty() ? "" : label + ": ";
  const bool same_states = a.states == b.states;
  report.add(prefix + "state spaces agree", same_states,
             same_states ? "" : std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " states");
  if (!same_states) return report;
  auto name = [&](std::size_t i) { return to_string(a.states[i]); };
  std::string rate_diff, diag_diff, leak_diff;
  for (std::size_t i = 0; i < a.size() && rate_diff.empty(); ++i) {
    auto nonzero = [](const std::map<std::size_t, Rational>& m) {
      std::map<std::size_t, Rational> out;
      for (const auto& [k, v] : m)
        if (!is_zero(v)) out.emplace(k, v);
      return out;
    };
    const auto ra = nonzero(a.rates[i]), rb = nonzero(b.rates[i]);
    if (ra == rb) continue;
    std::set<std::size_t> keys;
    for (const auto& [k, v] : ra) keys.insert(k);
    for (const auto& [k, v] : rb) keys.insert(k);
    for (auto k : keys) {
      Rational va = ra.count(k) ? ra.at(k) : Rational(0);
      Rational vb = rb.count(k) ? rb.at(k) : Rational(0);
      if (va != vb) {
        rate_diff = name(i) + " -> " + name(k) + ": " + to_string(va) + " vs " + to_string(vb);
        break;
      }
    }
  }
  for (std::size_t i = 0; i < a.size() && diag_diff.empty(); ++i)
    if (a.diagonal[i] != b.diagonal[i])
      diag_diff = name(i) + ": " + to_string(a.diagonal[i]) + " vs " + to_string(b.diagonal[i]);
  for (std::size_t i = 0; i < a.size() && leak_diff.empty(); ++i)
    if (a.leak[i] != b.leak[i])
      leak_diff = name(i) + ": " + to_string(a.leak[i]) + " vs " + to_string(b.leak[i]);
  report.add(prefix + "off-diagonal rates agree", rate_diff.empty(), rate_diff);
  report.add(prefix + "diagonal agrees", diag_diff.empty(), diag_diff);
  report.add(prefix + "leak rates agree", leak_diff.empty(), leak_diff);
  return report;
}

VerificationReport check_generator(const GeneratorSystem<Rational>& g, const std::string& label) {
  VerificationReport report;
  const std::string prefix = label.empty() ? "" : label + ": ";
  std::string negative, leak, balance;
  for (std::size_t i = 0; i < g.size(); ++i) {
    Rational sum = g.diagonal[i] + g.leak[i];
    for (const auto& [to, r] : g.rates[i]) {
      if (r < 0 && negative.empty())
        negative = to_string(g.states[i]) + " -> " + to_string(g.states[to]) + " = " + to_string(r);
      sum += r;
    }
    if (g.leak[i] < 0 && leak.empty()) leak = to_string(g.states[i]) + " leaks " + to_string(g.leak[i]);
    if (sum != 0 && balance.empty()) balance = to_string(g.states[i]) + " row sums to " + to_string(sum);
  }
  report.add(prefix + "off-diagonal rates nonnegative", negative.empty(), negative);
  report.add(prefix + "leak rates nonnegative", leak.empty(), leak);
  report.add(prefix + "rows conserve probability", balance.empty(), balance);
  return report;
}

double DistributionGrid::total() const {
  double s = leaked;
  for (double m : mass) s += m;
  return s;
}

DistributionGrid point_mass(const GeneratorSystem<double>& g, const Configuration& c) {
  auto i = g.find(c);
  if (!i) throw std::invalid_argument("configuration " + to_string(c) + " is not a state of the window");
  DistributionGrid d;
  d.mass.assign(g.size(), 0.0);
  d.mass[*i] = 1.0;
  return d;
}

DistributionGrid integrate(const GeneratorSystem<double>& g, const DistributionGrid& initial, double t, double dt) {
  if (initial.mass.size() != g.size()) throw std::invalid_argument("distribution does not match the generator");
  if (t < 0) throw std::invalid_argument("negative integration time");
  const double norm = g.norm_inf();
  const double max_dt = norm > 0 ? 0.01 / norm : t;
  if (dt <= 0) dt = max_dt;
  if (dt > max_dt * (1 + 1e-12))
    throw std::invalid_argument("dt = " + std::to_string(dt) + " exceeds 0.01/||Q|| = " + std::to_string(max_dt));
  const std::size_t steps = t > 0 ? static_cast<std::size_t>(std::ceil(t / dt)) : 0;
  const double h = steps ? t / static_cast<double>(steps) : 0.0;
  const std::size_t n = g.size();

  std::vector<std::vector<std::pair<std::size_t, double>>> out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [to, r] : g.rates[i]) out[i].emplace_back(to, r);

  // State derivative plus the leak derivative in the extra last slot.
  auto deriv = [&](const std::vector<double>& x, std::vector<double>& dx) {
    dx.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = x[i];
      if (xi == 0.0) continue;
      dx[i] += g.diagonal[i] * xi;
      for (const auto& [to, r] : out[i]) dx[to] += r * xi;
      dx[n] += g.leak[i] * xi;
    }
  };

  std::vector<double> x(initial.mass);
  x.push_back(initial.leaked);
  std::vector<double> k1, k2, k3, k4, tmp(n + 1);
  for (std::size_t s = 0; s < steps; ++s) {
    deriv(x, k1);
    for (std::size_t i = 0; i <= n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    deriv(tmp, k2);
    for (std::size_t i = 0; i <= n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    deriv(tmp, k3);
    for (std::size_t i = 0; i <= n; ++i) tmp[i] = x[i] + h * k3[i];
    deriv(tmp, k4);
    for (std::size_t i = 0; i <= n; ++i) x[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  DistributionGrid result;
  result.time = initial.time + t;
  result.leaked = x[n];
  x.pop_back();
  result.mass = std::move(x);
  const double drift = std::abs(result.total() - initial.total());
  if (drift > 1e-9) throw IntegrationFailure("probability not conserved: drift " + std::to_string(drift));
  return result;
}

DistributionGrid sample_distribution(const GeneratorSystem<double>& g, const Configuration& initial, double t,
                                     const ModelParams<double>& params, std::size_t samples, std::uint64_t seed,
                                     unsigned threads) {
  if (samples == 0) throw std::invalid_argument("sample count must be positive");
  threads = std::max(1u, threads);
  std::vector<std::vector<std::size_t>> counts(threads, std::vector<std::size_t>(g.size() + 1, 0));
  const std::size_t chunk = (samples + threads - 1) / threads;
  parallel_for(threads, threads, [&](std::size_t w) {
    const std::size_t end = std::min(samples, (w + 1) * chunk);
    for (std::size_t i = w * chunk; i < end; ++i) {
      Rng rng = trial_rng(seed, i);
      auto c = simulate_final(initial, t, params, rng);
      auto idx = g.find(c);
      ++counts[w][idx ? *idx : g.size()];
    }
  });
  DistributionGrid d;
  d.time = t;
  d.mass.assign(g.size(), 0.0);
  const double total = static_cast<double>(samples);
  for (const auto& c : counts) {
    for (std::size_t i = 0; i < g.size(); ++i) d.mass[i] += static_cast<double>(c[i]) / total;
    d.leaked += static_cast<double>(c[g.size()]) / total;
  }
  return d;
}

double total_variation(const DistributionGrid& a, const DistributionGrid& b) {
  if (a.mass.size() != b.mass.size()) throw std::invalid_argument("distributions live on different grids");
  double s = std::abs(a.leaked - b.leaked);
  for (std::size_t i = 0; i < a.mass.size(); ++i) s += std::abs(a.mass[i] - b.mass[i]);
  return 0.5 * s;
}

void write_distribution_csv(std::ostream& out, const GeneratorSystem<double>& g, const DistributionGrid& d) {
  out << "state,positions,word,mass\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& c = g.states[i];
    std::string pos;
    for (std::size_t k = 0; k < c.size(); ++k) pos += (k ? ";" : "") + std::to_string(c.positions[k]);
    std::ostringstream m;
    m.precision(17);
    m << d.mass[i];
    out << i << ',' << pos << ',' << to_string(c.word) << ',' << m.str() << '\n';
  }
  std::ostringstream m;
  m.precision(17);
  m << d.leaked;
  out << "leak,,," << m.str() << '\n';
}

}  // namespace lrswap
