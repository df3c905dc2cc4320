#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lrswap/matrix.hpp"
#include "lrswap/rational.hpp"
#include "lrswap/word.hpp"

namespace lrswap {

// Square operator on the tensor space (C^N)^{⊗n}, basis ordered
// lexicographically by word.
template <class S>
class SpeciesOperator {
 public:
  SpeciesOperator(int species, int sites)
      : species_(species), sites_(sites), m_(basis_dimension(species, sites), basis_dimension(species, sites)) {}

  SpeciesOperator(int species, int sites, Matrix<S> m) : species_(species), sites_(sites), m_(std::move(m)) {
    std::size_t dim = basis_dimension(species, sites);
    if (m_.rows() != dim || m_.cols() != dim)
      throw std::invalid_argument("operator matrix is not " + std::to_string(dim) + "x" + std::to_string(dim));
  }

  static SpeciesOperator identity(int species, int sites) {
    return SpeciesOperator(species, sites, Matrix<S>::identity(basis_dimension(species, sites)));
  }

  int species() const { return species_; }
  int sites() const { return sites_; }
  std::size_t dim() const { return m_.rows(); }
  const Matrix<S>& matrix() const { return m_; }

  S& operator()(std::size_t r, std::size_t c) { return m_(r, c); }
  const S& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  // <row| A |col>
  const S& at(const Word& row, const Word& col) const {
    check_word(row);
    check_word(col);
    return m_(word_index(row, species_), word_index(col, species_));
  }
  S& at(const Word& row, const Word& col) {
    check_word(row);
    check_word(col);
    return m_(word_index(row, species_), word_index(col, species_));
  }

  friend bool operator==(const SpeciesOperator& a, const SpeciesOperator& b) {
    return a.species_ == b.species_ && a.sites_ == b.sites_ && a.m_ == b.m_;
  }
  friend SpeciesOperator operator*(const SpeciesOperator& a, const SpeciesOperator& b) {
    a.require_compatible(b);
    return SpeciesOperator(a.species_, a.sites_, a.m_ * b.m_);
  }
  friend SpeciesOperator operator+(const SpeciesOperator& a, const SpeciesOperator& b) {
    a.require_compatible(b);
    return SpeciesOperator(a.species_, a.sites_, a.m_ + b.m_);
  }
  friend SpeciesOperator operator-(const SpeciesOperator& a, const SpeciesOperator& b) {
    a.require_compatible(b);
    return SpeciesOperator(a.species_, a.sites_, a.m_ - b.m_);
  }
  friend SpeciesOperator operator*(const S& s, const SpeciesOperator& a) {
    return SpeciesOperator(a.species_, a.sites_, s * a.m_);
  }

 private:
  void check_word(const Word& w) const {
    if (static_cast<int>(w.size()) != sites_) throw std::invalid_argument("word length does not match operator sites");
  }
  void require_compatible(const SpeciesOperator& b) const {
    if (species_ != b.species_ || sites_ != b.sites_) throw std::invalid_argument("operators act on different spaces");
  }

  int species_;
  int sites_;
  Matrix<S> m_;
};

template <class S>
SpeciesOperator<S> kron(const SpeciesOperator<S>& a, const SpeciesOperator<S>& b) {
  if (a.species() != b.species()) throw std::invalid_argument("kron of operators over different species counts");
  return SpeciesOperator<S>(a.species(), a.sites() + b.sites(), kron(a.matrix(), b.matrix()));
}

// I^{⊗(j-1)} ⊗ op ⊗ I^{⊗(n-j-1)}: op acts on tensor slots (j, j+1), 1-based.
template <class S>
SpeciesOperator<S> embed(const SpeciesOperator<S>& op, int j, int sites) {
  if (op.sites() != 2) throw std::invalid_argument("embed expects a two-site operator");
  if (j < 1 || j > sites - 1)
    throw std::out_of_range("embedding slot " + std::to_string(j) + " outside [1, " + std::to_string(sites - 1) + "]");
  const int n = op.species();
  SpeciesOperator<S> left = SpeciesOperator<S>::identity(n, j - 1);
  SpeciesOperator<S> right = SpeciesOperator<S>::identity(n, sites - j - 1);
  return kron(kron(left, op), right);
}

// Two-site op embedded at slot j, acting on the span of the given basis words
// (global lexicographic indices). The span must be invariant under the
// embedded operator; a nonzero image outside it throws std::domain_error.
template <class S>
Matrix<S> embed_on_basis(const SpeciesOperator<S>& op, int j, int sites, std::span<const std::size_t> basis);

// ---- sectors -------------------------------------------------------------

using Multiset = std::vector<int>;  // sorted species labels

struct SectorDecomposition {
  int species = 0;
  int sites = 0;
  std::map<Multiset, std::vector<std::size_t>> blocks;

  const std::vector<std::size_t>& block(const Multiset& m) const;
};

SectorDecomposition sector_blocks(int sites, int species);

// Lexicographically ordered indices of all words that permute m.
std::vector<std::size_t> sector_indices(Multiset m, int species);

// e_r = |b^r o b^{n-r-1}>, r = 0..n-1, for background species b and odd species o.
std::vector<std::size_t> single_impurity_basis(int sites, int species, int background, int odd);

// ---- inverses and spectra --------------------------------------------------

class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(std::size_t pivot_row, const std::string& what)
      : std::runtime_error(what), pivot_row_(pivot_row) {}
  std::size_t pivot_row() const { return pivot_row_; }

 private:
  std::size_t pivot_row_;
};

class EstimationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class S>
struct InverseResult {
  std::optional<Matrix<S>> inverse;
  std::size_t singular_row = 0;  // meaningful only when inverse is empty
  explicit operator bool() const { return inverse.has_value(); }
};

// Index groups such that m is block diagonal after a simultaneous
// permutation of rows and columns. Groups are sorted by smallest index.
template <class S>
std::vector<std::vector<std::size_t>> coupled_components(const Matrix<S>& m);

// Exact inverse by fraction-free (Bareiss) elimination, run separately on
// each coupled component. On rank deficiency, singular_row is the original
// row index at which no pivot could be found.
InverseResult<Rational> try_inverse(const Matrix<Rational>& a);

// Floating inverse by full-pivot LU on each coupled component.
InverseResult<double> try_inverse(const Matrix<double>& a);

// Throws SingularMatrixError.
Matrix<Rational> exact_inverse(const Matrix<Rational>& a);
SpeciesOperator<Rational> exact_inverse(const SpeciesOperator<Rational>& a);

// Largest eigenvalue modulus, from a full eigensolve of each coupled
// component. Throws EstimationError if the eigensolver does not converge.
double spectral_radius(const Matrix<double>& a);
double spectral_radius(const SpeciesOperator<double>& a);

}  // namespace lrswap
