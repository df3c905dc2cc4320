#pragma once

#include <random>
#include <string>
#include <vector>

#include "lrswap/algebra.hpp"
#include "lrswap/rational.hpp"
#include "lrswap/report.hpp"

namespace lrswap {

// Species count, per-species interpolation parameters mu_i (probability
// that a rightward same-species encounter resolves as a jump-over), and the
// rightward clock rate p. lambda_i = 1 - mu_i, q = 1 - p.
template <class S>
struct ModelParams {
  int species = 1;
  std::vector<S> mu;
  S p = S(1);

  const S& mu_of(int i) const { return mu.at(static_cast<std::size_t>(i - 1)); }
  S lambda_of(int i) const { return S(S(1) - mu_of(i)); }
  S q() const { return S(S(1) - p); }

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

template <class S>
ModelParams<S> make_params(int species, std::vector<S> mu, S p = S(1)) {
  ModelParams<S> params{species, std::move(mu), std::move(p)};
  params.validate();
  return params;
}

ModelParams<double> to_double(const ModelParams<Rational>& params);

// mu_i = a/b with b uniform in [1, max_denominator] and a uniform in [0, b].
// With interior = true the draw is restricted to (0,1).
ModelParams<Rational> random_rational_params(int species, std::mt19937_64& rng, int max_denominator = 12,
                                             bool interior = false, Rational p = Rational(1));

// B (jump-over) and B' (swap) on two sites.
template <class S>
struct LocalPair {
  SpeciesOperator<S> B;
  SpeciesOperator<S> Bprime;
};

template <class S>
LocalPair<S> build_local_pair(const ModelParams<S>& params);

// X = (I⊗B)(B'⊗I), Y = (B'⊗I)(I⊗B), X0 = (I⊗B)(B⊗I) on three sites.
template <class S>
struct ThreeSiteOps {
  SpeciesOperator<S> X;
  SpeciesOperator<S> Y;
  SpeciesOperator<S> X0;
};

template <class S>
ThreeSiteOps<S> build_three_site(const LocalPair<S>& pair);

template <class S>
ThreeSiteOps<S> build_three_site(const ModelParams<S>& params) {
  return build_three_site(build_local_pair(params));
}

// E_i = |iii><iii| weighted: sum_i w(i) E_i on three sites.
template <class S, class Weight>
SpeciesOperator<S> diagonal_three_site(int species, Weight&& weight) {
  SpeciesOperator<S> out(species, 3);
  for (int i = 1; i <= species; ++i) out.at(Word{i, i, i}, Word{i, i, i}) = weight(i);
  return out;
}

// I + X + sum_i (mu_i lambda_i)^2 / (1 - mu_i lambda_i) E_i, the closed form of
// (I - X)^{-1}; the Y version has the same shape.
template <class S>
SpeciesOperator<S> closed_inverse_I_minus_X(const ModelParams<S>& params);
template <class S>
SpeciesOperator<S> closed_inverse_I_minus_Y(const ModelParams<S>& params);

// Expected images of |v1 v2 v3> under X and Y, read off the case tables of
// the structure lemmas. Independent of the matrix products above.
SpeciesOperator<Rational> x_case_table(const ModelParams<Rational>& params);
SpeciesOperator<Rational> y_case_table(const ModelParams<Rational>& params);

// Exact checks of the three-site structure: case tables, powers of X and Y,
// X X0, the closed inverses, nilpotency off the single-species sector, and
// column-stochasticity of B + B'.
VerificationReport verify_structure_lemmas(const ModelParams<Rational>& params);

// Same checks, run against a caller-supplied (possibly corrupted) pair.
VerificationReport verify_structure_lemmas(const ModelParams<Rational>& params, const LocalPair<Rational>& pair);

}  // namespace lrswap
