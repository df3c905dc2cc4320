#include "lrswap/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace lrswap {

namespace {

template <class S>
ReductionChain<S> chain_on_basis(int sites, int depth, const ModelParams<S>& params, int first_slot,
                                 std::vector<std::size_t> basis) {
  if (depth < 0) throw std::invalid_argument("chain depth must be >= 0");
  if (first_slot < 1 || first_slot + depth > sites - 1)
    throw std::invalid_argument("chain depth " + std::to_string(depth) + " at slot " + std::to_string(first_slot) +
                                " needs slots up to " + std::to_string(first_slot + depth) + " on " +
                                std::to_string(sites) + " sites");
  const auto pair = build_local_pair(params);
  ReductionChain<S> c;
  c.sites = sites;
  c.first_slot = first_slot;
  c.params = params;
  c.basis = std::move(basis);
  const std::span<const std::size_t> span(c.basis);
  for (int j = 1; j <= depth + 1; ++j) {
    c.B.push_back(embed_on_basis(pair.B, first_slot + j - 1, sites, span));
    c.Bprime.push_back(embed_on_basis(pair.Bprime, first_slot + j - 1, sites, span));
  }
  const auto identity = Matrix<S>::identity(c.basis.size());
  c.A.push_back(identity);
  c.A_inv.push_back(identity);
  c.X.push_back(Matrix<S>(c.basis.size(), c.basis.size()));
  c.spectral_radius.push_back(0.0);
  for (int k = 1; k <= depth; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    Matrix<S> x = c.B[ku] * c.A_inv[ku - 1] * c.Bprime[ku - 1];
    c.spectral_radius.push_back(lrswap::spectral_radius(to_double(x)));
    c.A.push_back(identity - x);
    c.X.push_back(std::move(x));
    auto inv = try_inverse(c.A.back());
    if (!inv) {
      c.failed_at = k;
      break;
    }
    c.A_inv.push_back(std::move(*inv.inverse));
  }
  return c;
}

template <class S>
Matrix<S> full_embed(const SpeciesOperator<S>& local, int slot, int sites) {
  return embed(local, slot, sites).matrix();
}

}  // namespace

template <class S>
ReductionChain<S> chain(int sites, int depth, const ModelParams<S>& params, int first_slot) {
  std::vector<std::size_t> basis(basis_dimension(params.species, sites));
  std::iota(basis.begin(), basis.end(), std::size_t{0});
  return chain_on_basis(sites, depth, params, first_slot, std::move(basis));
}

template <class S>
ReductionChain<S> sector_chain(const Multiset& m, int depth, const ModelParams<S>& params) {
  return chain_on_basis(static_cast<int>(m.size()), depth, params, 1, sector_indices(m, params.species));
}

template ReductionChain<Rational> chain(int, int, const ModelParams<Rational>&, int);
template ReductionChain<double> chain(int, int, const ModelParams<double>&, int);
template ReductionChain<Rational> sector_chain(const Multiset&, int, const ModelParams<Rational>&);
template ReductionChain<double> sector_chain(const Multiset&, int, const ModelParams<double>&);

VerificationReport binary_chain_inverse(const ReductionChain<Rational>& c) {
  for (int i = 1; i <= c.params.species; ++i)
    if (c.params.mu_of(i) != 0 && c.params.mu_of(i) != 1)
      throw std::invalid_argument("binary_chain_inverse needs every mu_i in {0, 1}");
  VerificationReport report;
  const auto identity = Matrix<Rational>::identity(c.basis.size());
  for (int k = 1; k <= c.depth(); ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const std::string tag = "k=" + std::to_string(k) + ": ";
    const Matrix<Rational> sq = c.X[ku] * c.X[ku];
    report.add(tag + "X_k^2 = 0", sq.is_zero());
    if (c.failed_at && *c.failed_at == k) {
      report.add(tag + "A_k invertible", false, "A_k singular");
      break;
    }
    const Matrix<Rational> expected = identity + c.X[ku];
    std::string detail;
    for (std::size_t r = 0; r < expected.rows() && detail.empty(); ++r)
      for (std::size_t col = 0; col < expected.cols(); ++col)
        if (expected(r, col) != c.A_inv[ku](r, col)) {
          detail = "entry (" + std::to_string(c.basis[r]) + ", " + std::to_string(c.basis[col]) +
                   "): I + X_k gives " + to_string(expected(r, col)) + ", exact inverse gives " +
                   to_string(c.A_inv[ku](r, col));
          break;
        }
    report.add(tag + "A_k^{-1} = I + X_k", detail.empty(), detail);
  }
  return report;
}

Rational shift_normalizer(const Rational& mu, int k) {
  const Rational lambda = 1 - mu;
  Rational sum = 0;
  for (int r = 0; r <= k; ++r) {
    Rational term = 1;
    for (int t = 0; t < k - r; ++t) term *= mu;
    for (int t = 0; t < r; ++t) term *= lambda;
    sum += term;
  }
  return sum;
}

ScalarSector scalar_sector(int species_label, int depth, const ModelParams<Rational>& params) {
  params.validate();
  if (depth < 0) throw std::invalid_argument("scalar_sector depth must be >= 0");
  ScalarSector s;
  s.species = species_label;
  const Rational& mu = params.mu_of(species_label);
  s.alpha = mu * params.lambda_of(species_label);
  s.fixed_point = (1.0 + std::sqrt(1.0 - 4.0 * s.alpha.get_d())) / 2.0;
  s.a.push_back(1);
  for (int k = 1; k <= depth; ++k) s.a.push_back(1 - s.alpha / s.a.back());
  for (int k = 0; k <= depth + 1; ++k) s.S.push_back(shift_normalizer(mu, k));
  for (int k = 0; k <= depth; ++k) s.a_ratio.push_back(s.S[k + 1] / s.S[k]);
  s.c.push_back(0);
  for (int k = 1; k <= depth; ++k) s.c.push_back(s.alpha / s.a[k - 1]);
  s.recursion_matches_ratio = s.a == s.a_ratio;
  // a >= (1 + sqrt(1 - 4 alpha))/2  <=>  2a - 1 >= 0 and (2a - 1)^2 >= 1 - 4 alpha.
  const Rational disc = 1 - 4 * s.alpha;
  s.bounded_by_fixed_point = std::all_of(s.a.begin(), s.a.end(), [&](const Rational& a) {
    const Rational t = 2 * a - 1;
    return sgn(t) >= 0 && t * t >= disc;
  });
  return s;
}

template <class S>
EliminationResult<S> eliminate_block(int length, int position, int sites, const ModelParams<S>& params,
                                     EliminationOrder order) {
  params.validate();
  if (length < 1 || position < 1 || position + length > sites)
    throw std::invalid_argument("block of length " + std::to_string(length) + " at position " +
                                std::to_string(position) + " does not fit " + std::to_string(sites) + " sites");
  const int n = params.species;
  const auto m = static_cast<std::size_t>(length);
  const auto pair = build_local_pair(params);
  std::vector<Matrix<S>> b, bp;  // b[i-1] = B_i
  for (int i = 1; i <= length; ++i) {
    b.push_back(full_embed(pair.B, position + i - 1, sites));
    bp.push_back(full_embed(pair.Bprime, position + i - 1, sites));
  }
  const auto identity = Matrix<S>::identity(basis_dimension(n, sites));
  std::vector<Matrix<S>> L(m), Lp(m);

  auto invert = [&](const Matrix<S>& a, int k) {
    auto inv = try_inverse(a);
    if (!inv)
      throw EliminationUndefined(k, "elimination undefined: operator " + std::to_string(k) +
                                        " of the reduction chain is singular");
    return std::move(*inv.inverse);
  };

  if (order == EliminationOrder::Forward) {
    // W_i = P_i W_0 + Q_i W_{i+1}
    std::vector<Matrix<S>> P(m), Q(m);
    P[0] = b[0];
    Q[0] = bp[0];
    for (std::size_t i = 1; i < m; ++i) {
      const auto inv = invert(identity - b[i] * Q[i - 1], static_cast<int>(i));
      P[i] = inv * b[i] * P[i - 1];
      Q[i] = inv * bp[i];
    }
    L[m - 1] = P[m - 1];
    Lp[m - 1] = Q[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) {
      L[i] = P[i] + Q[i] * L[i + 1];
      Lp[i] = Q[i] * Lp[i + 1];
    }
  } else {
    // W_i = Q_i W_{i-1} + P_i W_{m+1}
    std::vector<Matrix<S>> P(m), Q(m);
    P[m - 1] = bp[m - 1];
    Q[m - 1] = b[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) {
      const auto inv = invert(identity - bp[i] * Q[i + 1], static_cast<int>(m - 1 - i));
      P[i] = inv * bp[i] * P[i + 1];
      Q[i] = inv * b[i];
    }
    L[0] = Q[0];
    Lp[0] = P[0];
    for (std::size_t i = 1; i < m; ++i) {
      L[i] = Q[i] * L[i - 1];
      Lp[i] = P[i] + Q[i] * Lp[i - 1];
    }
  }

  EliminationResult<S> out;
  out.length = length;
  out.position = position;
  out.sites = sites;
  for (std::size_t i = 0; i < m; ++i) {
    out.L.emplace_back(n, sites, std::move(L[i]));
    out.Lprime.emplace_back(n, sites, std::move(Lp[i]));
  }
  return out;
}

template EliminationResult<Rational> eliminate_block(int, int, int, const ModelParams<Rational>&, EliminationOrder);
template EliminationResult<double> eliminate_block(int, int, int, const ModelParams<double>&, EliminationOrder);

template <class S>
Matrix<S> lemma_product(const ReductionChain<S>& c, int length) {
  if (length < 1 || static_cast<int>(c.B.size()) < length)
    throw std::invalid_argument("chain too short for the requested block length");
  if (static_cast<int>(c.A_inv.size()) < length)
    throw EliminationUndefined(static_cast<int>(c.A_inv.size()), "chain not invertible far enough");
  Matrix<S> product = c.B[0];
  for (int i = 2; i <= length; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    product = c.A_inv[iu - 1] * (c.B[iu - 1] * product);
  }
  return product;
}

template Matrix<Rational> lemma_product(const ReductionChain<Rational>&, int);
template Matrix<double> lemma_product(const ReductionChain<double>&, int);

Rational transition_coefficient(const Word& to, const Word& from, int sites, const ModelParams<Rational>& params) {
  if (sites < 2) throw std::invalid_argument("a block shift needs at least two particles");
  if (static_cast<int>(to.size()) != sites || static_cast<int>(from.size()) != sites)
    throw std::invalid_argument("word length does not match the particle count");
  Multiset m = from.letters(), m_to = to.letters();
  std::sort(m.begin(), m.end());
  std::sort(m_to.begin(), m_to.end());
  if (m != m_to) return 0;
  // L_{n-1} preserves sectors, so the product is evaluated on the sector of `from` only.
  const auto c = sector_chain(m, sites - 2, params);
  const auto product = lemma_product(c, sites - 1);
  const auto pos = [&](const Word& w) {
    return static_cast<std::size_t>(
        std::lower_bound(c.basis.begin(), c.basis.end(), word_index(w, params.species)) - c.basis.begin());
  };
  return params.p * product(pos(to), pos(from));
}

Rational effective_shift_rate(int sites, int species_label, const ModelParams<Rational>& params) {
  params.validate();
  if (sites < 1) throw std::invalid_argument("effective_shift_rate needs at least one particle");
  const Rational& mu = params.mu_of(species_label);
  Rational numerator = 1;
  for (int t = 0; t < sites - 1; ++t) numerator *= mu;
  return params.p * numerator / shift_normalizer(mu, sites - 1);
}

std::string to_string(SectorCase c) {
  switch (c) {
    case SectorCase::SingleSpecies: return "single-species";
    case SectorCase::SingleImpurity: return "single-impurity";
    case SectorCase::AllDistinct: return "all-distinct";
    case SectorCase::General: return "unproven-general";
  }
  return "unknown";
}

SectorCase classify_sector(const Multiset& m) {
  std::map<int, int> counts;
  for (int c : m) ++counts[c];
  if (counts.size() <= 1) return SectorCase::SingleSpecies;
  if (counts.size() == m.size()) return SectorCase::AllDistinct;
  if (counts.size() == 2) {
    for (const auto& [label, count] : counts)
      if (count == 1) return SectorCase::SingleImpurity;
  }
  return SectorCase::General;
}

bool SectorScan::all_invertible() const {
  return std::all_of(rows.begin(), rows.end(), [](const SectorScanRow& r) { return r.invertible; });
}

template <class S>
SectorScan sector_invertibility_scan(const Multiset& m, const ModelParams<S>& params) {
  params.validate();
  Multiset sorted = m;
  std::sort(sorted.begin(), sorted.end());
  SectorScan scan;
  scan.multiset = sorted;
  scan.classification = classify_sector(sorted);
  const int sites = static_cast<int>(sorted.size());
  if (sites < 3) return scan;
  const auto c = sector_chain(sorted, sites - 2, params);
  for (int k = 1; k <= c.depth(); ++k) {
    const bool invertible = !(c.failed_at && *c.failed_at == k);
    scan.rows.push_back({k, invertible, c.spectral_radius[static_cast<std::size_t>(k)]});
  }
  return scan;
}

template SectorScan sector_invertibility_scan(const Multiset&, const ModelParams<Rational>&);
template SectorScan sector_invertibility_scan(const Multiset&, const ModelParams<double>&);

BlockFormCheck check_block_form(int k, int sites, const ModelParams<Rational>& params) {
  params.validate();
  if (params.species < 2) throw std::invalid_argument("block form check needs at least two species");
  if (k < 1 || k > sites - 2) throw std::invalid_argument("block form check needs 1 <= k <= n-2");
  const int depth = std::min(k + 1, sites - 2);
  const auto c = chain_on_basis(sites, depth, params, 1, single_impurity_basis(sites, params.species, 1, 2));
  BlockFormCheck out;
  const std::string tag = "k=" + std::to_string(k) + ": ";
  if (c.failed_at && *c.failed_at <= k) {
    out.report.add(tag + "chain invertible", false, "A_" + std::to_string(*c.failed_at) + " singular");
    return out;
  }
  const auto ku = static_cast<std::size_t>(k);
  const auto n = static_cast<std::size_t>(sites);
  out.x_k = c.X[ku];
  const auto& x = out.x_k;
  auto block_of = [&](std::size_t r) { return r < ku ? 0 : (r <= ku + 1 ? 1 : 2); };
  auto describe = [&](std::size_t r, std::size_t col) {
    return "entry (e_" + std::to_string(r) + ", e_" + std::to_string(col) + ") = " + to_string(x(r, col));
  };

  std::string off_block, left, right;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t col = 0; col < n; ++col) {
      if (is_zero(x(r, col))) continue;
      if (block_of(r) != block_of(col)) {
        if (off_block.empty()) off_block = describe(r, col);
      } else if (r != col && block_of(r) == 0) {
        if (left.empty()) left = describe(r, col);
      } else if (r != col && block_of(r) == 2) {
        if (right.empty()) right = describe(r, col);
      }
    }
  out.report.add(tag + "X_k block diagonal", off_block.empty(), off_block);
  out.report.add(tag + "left block diagonal", left.empty(), left);
  out.report.add(tag + "right block diagonal", right.empty(), right);

  out.middle_entry = x(ku, ku + 1);
  const bool nilpotent = is_zero(x(ku, ku)) && is_zero(x(ku + 1, ku + 1)) && is_zero(x(ku + 1, ku));
  out.report.add(tag + "middle 2x2 block strictly upper triangular", nilpotent,
                 nilpotent ? "starred entry " + to_string(out.middle_entry) : describe(ku + 1, ku));

  const auto sector = scalar_sector(1, sites, params);
  {
    // Right-block eigenvalues are single-species scalars alpha / a_m.
    std::string detail;
    for (std::size_t r = ku + 2; r < n && detail.empty(); ++r) {
      bool found = false;
      for (const auto& a : sector.a)
        if (x(r, r) == sector.alpha / a) found = true;
      if (!found) detail = describe(r, r) + " is not alpha / a_m for any m";
    }
    out.report.add(tag + "right block entries are single-species scalars", detail.empty(), detail);
  }

  if (k + 1 <= sites - 2) {
    out.c_k = sector.c[ku];
    const auto& next = c.X[ku + 1];
    std::string detail;
    for (std::size_t col = 0; col <= ku && detail.empty(); ++col)
      for (std::size_t r = 0; r < n; ++r) {
        const Rational expected = r == col ? *out.c_k : Rational(0);
        if (next(r, col) != expected) {
          detail = "X_{k+1} entry (e_" + std::to_string(r) + ", e_" + std::to_string(col) + ") = " +
                   to_string(next(r, col)) + ", expected " + to_string(expected);
          break;
        }
      }
    out.report.add(tag + "X_{k+1} = c_k I on span(e_0..e_k), c_k = " + to_string(*out.c_k), detail.empty(), detail);
  }
  return out;
}

}  // namespace lrswap
