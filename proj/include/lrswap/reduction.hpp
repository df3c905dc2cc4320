#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lrswap/algebra.hpp"
#include "lrswap/local_ops.hpp"
#include "lrswap/report.hpp"

namespace lrswap {

// The recursion A_0 = I, A_k = I - B_{k+1} A_{k-1}^{-1} B'_k for a block of
// consecutive particles starting at tensor slot first_slot, with
// B_j = I^{⊗(first_slot+j-2)} ⊗ B ⊗ I^{...}. Operators are stored on the span
// of `basis` (global word indices): either the whole space or one sector.
template <class S>
struct ReductionChain {
  int sites = 0;
  int first_slot = 1;
  ModelParams<S> params;
  std::vector<std::size_t> basis;

  std::vector<Matrix<S>> B;       // B[j-1] = B_j, j = 1..depth+1
  std::vector<Matrix<S>> Bprime;  // Bprime[j-1] = B'_j
  std::vector<Matrix<S>> A;       // A[k], k = 0..last computed
  std::vector<Matrix<S>> A_inv;   // A_inv[k] for every invertible A[k]
  std::vector<Matrix<S>> X;       // X[k] = B_{k+1} A_{k-1}^{-1} B'_k; X[0] is zero
  std::vector<double> spectral_radius;  // rho(X[k]); entry 0 is 0
  std::optional<int> failed_at;   // first k with A_k singular

  int depth() const { return static_cast<int>(A.size()) - 1; }
  bool fully_invertible() const { return !failed_at.has_value(); }
};

// Full-space chain for the block starting at slot 1 (or first_slot).
// Requires first_slot + depth <= sites - 1. A singular A_k ends the chain
// and is recorded in failed_at; it is not an error.
template <class S>
ReductionChain<S> chain(int sites, int depth, const ModelParams<S>& params, int first_slot = 1);

// Same recursion restricted to the sector V_M (M has `sites` labels).
template <class S>
ReductionChain<S> sector_chain(const Multiset& m, int depth, const ModelParams<S>& params);

// For mu_i in {0,1}: per k, X_k^2 = 0 and A_k^{-1} = I + X_k, with A_k^{-1}
// taken from the exact inverse. Throws std::invalid_argument otherwise.
VerificationReport binary_chain_inverse(const ReductionChain<Rational>& chain);

// Single-species quantities for species i: alpha = mu lambda, a_k by
// recursion and by S_{k+1}/S_k, S_k = sum_r mu^{k-r} lambda^r, the fixed
// point r = (1 + sqrt(1 - 4 alpha))/2 and c_k = alpha / a_{k-1}.
struct ScalarSector {
  int species = 0;
  Rational alpha;
  std::vector<Rational> a;        // a[k], k = 0..depth, by recursion
  std::vector<Rational> a_ratio;  // S[k+1] / S[k]
  std::vector<Rational> S;        // S[k], k = 0..depth+1
  std::vector<Rational> c;        // c[k], k = 1..depth; c[0] unused (zero)
  double fixed_point = 1.0;
  bool recursion_matches_ratio = false;
  bool bounded_by_fixed_point = false;  // a_k >= r for every k, decided exactly
};

ScalarSector scalar_sector(int species_label, int depth, const ModelParams<Rational>& params);

// sum_{r=0}^{k} mu^{k-r} lambda^r; never the closed ratio, which degenerates
// at mu = lambda.
Rational shift_normalizer(const Rational& mu, int k);

enum class EliminationOrder {
  Forward,   // eliminate from the left end: A-chain, the X route at n = 3
  Backward,  // eliminate from the right end: mirrored chain, the Y route
};

class EliminationUndefined : public std::runtime_error {
 public:
  EliminationUndefined(int k, const std::string& what) : std::runtime_error(what), k_(k) {}
  int k() const { return k_; }

 private:
  int k_;
};

// Solution of W_i = B_i W_{i-1} + B'_i W_{i+1} (i = 1..m) for a block of m+1
// particles whose repeated pair sits at slots (j+i-1, j+i): W_i = L_i W_0 + L'_i W_{m+1}.
template <class S>
struct EliminationResult {
  int length = 0;    // m
  int position = 1;  // j
  int sites = 0;
  std::vector<SpeciesOperator<S>> L;       // L[i-1] = L_i
  std::vector<SpeciesOperator<S>> Lprime;  // Lprime[i-1] = L'_i
};

// Throws EliminationUndefined when an intermediate operator is singular.
template <class S>
EliminationResult<S> eliminate_block(int length, int position, int sites, const ModelParams<S>& params,
                                     EliminationOrder order = EliminationOrder::Forward);

// A_{m-1}^{-1} B_m A_{m-2}^{-1} B_{m-1} ... A_1^{-1} B_2 B_1, read from a
// chain of depth >= m-1, on the chain's basis.
template <class S>
Matrix<S> lemma_product(const ReductionChain<S>& chain, int length);

// p <pi| L_{n-1} |nu>: rate of the full-block shift
// (x-1, ..., x+n-2; nu) -> (x, ..., x+n-1; pi). Evaluated as the product
// formula on the sector of nu; zero when pi is not a permutation of nu.
Rational transition_coefficient(const Word& to, const Word& from, int sites, const ModelParams<Rational>& params);

// p mu^{n-1} / S_{n-1}.
Rational effective_shift_rate(int sites, int species_label, const ModelParams<Rational>& params);

enum class SectorCase { SingleSpecies, SingleImpurity, AllDistinct, General };
std::string to_string(SectorCase c);
SectorCase classify_sector(const Multiset& m);

struct SectorScanRow {
  int k = 0;
  bool invertible = false;
  double spectral_radius = 0.0;
};

struct SectorScan {
  Multiset multiset;
  SectorCase classification = SectorCase::General;
  std::vector<SectorScanRow> rows;  // k = 1..n-2, stopping at the first singular A_k
  bool all_invertible() const;
};

template <class S>
SectorScan sector_invertibility_scan(const Multiset& m, const ModelParams<S>& params);

// Block structure of X_k on V_[2,1,...,1] in the basis e_r = |1^r 2 1^{n-r-1}>:
// diagonal left block (e_0..e_{k-1}), strictly upper 2x2 middle block
// (e_k, e_{k+1}), diagonal right block, zero elsewhere; and
// X_{k+1} = c_k I on span(e_0..e_k) when k+1 <= n-2.
struct BlockFormCheck {
  VerificationReport report;
  Matrix<Rational> x_k;          // X_k in the e_r basis
  Rational middle_entry;         // the (e_k, e_{k+1}) entry
  std::optional<Rational> c_k;   // alpha / a_{k-1,1}
};

BlockFormCheck check_block_form(int k, int sites, const ModelParams<Rational>& params);

}  // namespace lrswap
