#include "lrswap/scattering.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "lrswap/parallel.hpp"

namespace lrswap {

std::string to_string(const SpectralPoint& pt) {
  return "(" + to_string(pt.alpha) + ", " + to_string(pt.beta) + ", " + to_string(pt.gamma) + ")";
}

void check_pole_guard(const Rational& xi_a, const Rational& xi_b, const ModelParams<Rational>& params) {
  if (is_zero(xi_a) || is_zero(xi_b)) throw PoleError(0, Rational(0), "spectral parameter is zero");
  for (int i = 1; i <= params.species; ++i) {
    const Rational denominator = params.mu_of(i) + params.lambda_of(i) * xi_a * xi_b - xi_b;
    if (is_zero(denominator))
      throw PoleError(i, denominator,
                      "pole: mu_" + std::to_string(i) + " + lambda_" + std::to_string(i) + " xi_a xi_b - xi_b = 0 at (" +
                          to_string(xi_a) + ", " + to_string(xi_b) + ")");
  }
}

void validate_point(const SpectralPoint& pt, const ModelParams<Rational>& params) {
  const Rational* xs[] = {&pt.alpha, &pt.beta, &pt.gamma};
  for (auto* x : xs)
    if (is_zero(*x)) throw PoleError(0, Rational(0), "spectral parameter is zero");
  if (pt.alpha == pt.beta || pt.alpha == pt.gamma || pt.beta == pt.gamma)
    throw std::invalid_argument("spectral parameters must be distinct: " + to_string(pt));
  // the three ordered pairs (xi_a, xi_b) that enter R_ba, R_ga, R_gb
  check_pole_guard(pt.alpha, pt.beta, params);
  check_pole_guard(pt.alpha, pt.gamma, params);
  check_pole_guard(pt.beta, pt.gamma, params);
}

SpeciesOperator<Rational> build_R(int species, const Rational& xi_a, const Rational& xi_b,
                                  const ModelParams<Rational>& params) {
  params.validate();
  if (species != params.species) throw std::invalid_argument("species count does not match params");
  check_pole_guard(xi_a, xi_b, params);
  SpeciesOperator<Rational> r(species, 2);
  for (int i = 1; i <= species; ++i) {
    const Rational& mu = params.mu_of(i);
    const Rational lambda = params.lambda_of(i);
    r.at(Word{i, i}, Word{i, i}) = -(mu + lambda * xi_a * xi_b - xi_a) * xi_b / ((mu + lambda * xi_a * xi_b - xi_b) * xi_a);
    for (int j = i + 1; j <= species; ++j) {
      r.at(Word{i, j}, Word{j, i}) = xi_b;
      r.at(Word{j, i}, Word{i, j}) = 1 / xi_a;
    }
  }
  return r;
}

YbeSides ybe_sides(const ModelParams<Rational>& params, const SpectralPoint& pt) {
  validate_point(pt, params);
  const int n = params.species;
  const auto r_ba = build_R(n, pt.alpha, pt.beta, params);
  const auto r_ga = build_R(n, pt.alpha, pt.gamma, params);
  const auto r_gb = build_R(n, pt.beta, pt.gamma, params);
  const auto left = [](const auto& r) { return embed(r, 1, 3); };
  const auto right = [](const auto& r) { return embed(r, 2, 3); };
  return {left(r_gb) * right(r_ga) * left(r_ba), right(r_ba) * left(r_ga) * right(r_gb)};
}

YbeResult verify_ybe(const ModelParams<Rational>& params, const SpectralPoint& pt) {
  const auto sides = ybe_sides(params, pt);
  const int n = params.species;
  YbeResult out;
  out.max_deviation = max_abs_difference(sides.lhs.matrix(), sides.rhs.matrix());

  // Blockwise: the same products assembled from R restricted to each sector.
  const auto r_ba = build_R(n, pt.alpha, pt.beta, params);
  const auto r_ga = build_R(n, pt.alpha, pt.gamma, params);
  const auto r_gb = build_R(n, pt.beta, pt.gamma, params);
  const auto sectors = sector_blocks(3, n);
  std::vector<int> label(sides.lhs.dim());
  int id = 0;
  out.blocks_match_full = true;
  out.max_block_deviation = 0;
  for (const auto& [m, idx] : sectors.blocks) {
    for (auto i : idx) label[i] = id;
    ++id;
    const std::span<const std::size_t> basis(idx);
    auto on = [&](const SpeciesOperator<Rational>& r, int slot) { return embed_on_basis(r, slot, 3, basis); };
    const Matrix<Rational> lhs = on(r_gb, 1) * on(r_ga, 2) * on(r_ba, 1);
    const Matrix<Rational> rhs = on(r_ba, 2) * on(r_ga, 1) * on(r_gb, 2);
    Rational dev = max_abs_difference(lhs, rhs);
    if (dev > out.max_block_deviation) out.max_block_deviation = dev;
    out.block_deviation.emplace_back(m, dev);
    if (!(lhs == principal_submatrix(sides.lhs.matrix(), basis)) || !(rhs == principal_submatrix(sides.rhs.matrix(), basis)))
      out.blocks_match_full = false;
  }
  out.off_block_zero = true;
  for (std::size_t r = 0; r < sides.lhs.dim(); ++r)
    for (std::size_t c = 0; c < sides.lhs.dim(); ++c)
      if (label[r] != label[c] && (!is_zero(sides.lhs(r, c)) || !is_zero(sides.rhs(r, c)))) out.off_block_zero = false;
  return out;
}

SpectralSample sample_spectral_points(const ModelParams<Rational>& params, std::size_t count, std::uint64_t seed,
                                      int max_numerator, int max_denominator) {
  if (max_numerator < 2 || max_denominator < 1) throw std::invalid_argument("spectral sampling range too small");
  SpectralSample out;
  out.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-max_numerator, max_numerator - 1), den(1, max_denominator);
  auto draw = [&] {
    long a = num(rng);
    if (a >= 0) ++a;  // skip zero
    return make_rational(a, den(rng));
  };
  const std::size_t cap = 1000 * std::max<std::size_t>(count, 1);
  for (std::size_t attempt = 0; out.points.size() < count; ++attempt) {
    if (attempt >= cap) throw std::runtime_error("spectral sampling rejected too many candidates");
    SpectralPoint pt{draw(), draw(), draw()};
    try {
      validate_point(pt, params);
      out.points.push_back(std::move(pt));
    } catch (const std::exception& e) {
      out.rejections.push_back("rejected " + to_string(pt) + ": " + e.what());
    }
  }
  return out;
}

YbeSweep verify_ybe_sampled(const ModelParams<Rational>& params, std::size_t count, std::uint64_t seed,
                            unsigned threads) {
  YbeSweep sweep;
  sweep.sample = sample_spectral_points(params, count, seed);
  sweep.results.resize(sweep.sample.points.size());
  parallel_for(sweep.results.size(), threads,
               [&](std::size_t i) { sweep.results[i] = verify_ybe(params, sweep.sample.points[i]); });
  sweep.max_deviation = 0;
  for (std::size_t i = 0; i < sweep.results.size(); ++i) {
    const auto& r = sweep.results[i];
    if (r.max_deviation > sweep.max_deviation) sweep.max_deviation = r.max_deviation;
    if (!r.holds()) ++sweep.failures;
    std::string detail = "max deviation " + to_string(r.max_deviation);
    if (!r.blocks_match_full) detail += "; sector blocks disagree with the full products";
    if (!r.off_block_zero) detail += "; nonzero entries between sectors";
    sweep.report.add("YBE at xi = " + to_string(sweep.sample.points[i]), r.holds(), detail);
  }
  sweep.report.add("sample size >= 50 (seed " + std::to_string(seed) + ", " +
                       std::to_string(sweep.sample.rejections.size()) + " rejected)",
                   sweep.results.size() >= 50, "points: " + std::to_string(sweep.results.size()));
  return sweep;
}

VerificationReport check_relabeling_invariance(const ModelParams<Rational>& params, const Rational& xi_a,
                                               const Rational& xi_b) {
  const int n = params.species;
  VerificationReport report;
  const auto r = build_R(n, xi_a, xi_b, params);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (params.mu_of(i) == params.mu_of(j)) {
        const auto& a = r.at(Word{i, i}, Word{i, i});
        const auto& b = r.at(Word{j, j}, Word{j, j});
        report.add("equal mu: diagonal entries of species " + std::to_string(i) + " and " + std::to_string(j) + " agree",
                   a == b, to_string(a) + " vs " + to_string(b));
      }

  // Every subset of at least one species, relabeled 1..k in increasing order.
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> subset;
    for (int i = 1; i <= n; ++i)
      if (mask & (1u << (i - 1))) subset.push_back(i);
    const int k = static_cast<int>(subset.size());
    if (k == n) continue;
    ModelParams<Rational> sub;
    sub.species = k;
    sub.p = params.p;
    for (int s : subset) sub.mu.push_back(params.mu_of(s));
    const auto small = build_R(k, xi_a, xi_b, sub);
    bool same = true;
    for (int a = 1; a <= k && same; ++a)
      for (int b = 1; b <= k && same; ++b)
        for (int c = 1; c <= k && same; ++c)
          for (int d = 1; d <= k && same; ++d)
            same = small.at(Word{a, b}, Word{c, d}) ==
                   r.at(Word{subset[a - 1], subset[b - 1]}, Word{subset[c - 1], subset[d - 1]});
    std::ostringstream name;
    name << "restriction to species {";
    for (std::size_t t = 0; t < subset.size(); ++t) name << (t ? "," : "") << subset[t];
    name << "} reproduces R for " << k << " species";
    report.add(name.str(), same);
  }
  return report;
}

}  // namespace lrswap
