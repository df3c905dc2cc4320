#include "lrswap/algebra.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace lrswap {

template <class S>
Matrix<S> embed_on_basis(const SpeciesOperator<S>& op, int j, int sites, std::span<const std::size_t> basis) {
  if (op.sites() != 2) throw std::invalid_argument("embed expects a two-site operator");
  if (j < 1 || j > sites - 1) throw std::out_of_range("embedding slot outside [1, sites-1]");
  const int n = op.species();
  std::unordered_map<std::size_t, std::size_t> position;
  position.reserve(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) position.emplace(basis[i], i);

  Matrix<S> out(basis.size(), basis.size());
  const std::size_t slot = static_cast<std::size_t>(j - 1);
  for (std::size_t col = 0; col < basis.size(); ++col) {
    Word w = index_word(basis[col], sites, n);
    const std::size_t local_col = word_index(Word{w[slot], w[slot + 1]}, n);
    for (std::size_t local_row = 0; local_row < op.dim(); ++local_row) {
      const S& v = op(local_row, local_col);
      if (is_zero(v)) continue;
      Word image = w;
      image[slot] = static_cast<int>(local_row / static_cast<std::size_t>(n)) + 1;
      image[slot + 1] = static_cast<int>(local_row % static_cast<std::size_t>(n)) + 1;
      auto it = position.find(word_index(image, n));
      if (it == position.end()) throw std::domain_error("basis is not invariant under the embedded operator");
      out(it->second, col) += v;
    }
  }
  return out;
}

template Matrix<Rational> embed_on_basis(const SpeciesOperator<Rational>&, int, int, std::span<const std::size_t>);
template Matrix<double> embed_on_basis(const SpeciesOperator<double>&, int, int, std::span<const std::size_t>);

// ---- sectors -------------------------------------------------------------

const std::vector<std::size_t>& SectorDecomposition::block(const Multiset& m) const {
  Multiset key = m;
  std::sort(key.begin(), key.end());
  auto it = blocks.find(key);
  if (it == blocks.end()) throw std::out_of_range("no sector for the given multiset");
  return it->second;
}

SectorDecomposition sector_blocks(int sites, int species) {
  if (sites < 1 || species < 1) throw std::invalid_argument("sector_blocks needs sites, species >= 1");
  SectorDecomposition d;
  d.species = species;
  d.sites = sites;
  const std::size_t dim = basis_dimension(species, sites);
  for (std::size_t i = 0; i < dim; ++i) {
    Multiset key = index_word(i, sites, species).letters();
    std::sort(key.begin(), key.end());
    d.blocks[key].push_back(i);
  }
  return d;
}

std::vector<std::size_t> sector_indices(Multiset m, int species) {
  std::sort(m.begin(), m.end());
  for (int c : m)
    if (c < 1 || c > species) throw std::out_of_range("multiset label outside [1, species]");
  std::vector<std::size_t> out;
  do {
    out.push_back(word_index(Word(m), species));
  } while (std::next_permutation(m.begin(), m.end()));
  return out;
}

std::vector<std::size_t> single_impurity_basis(int sites, int species, int background, int odd) {
  if (background == odd) throw std::invalid_argument("impurity species must differ from the background");
  std::vector<std::size_t> out;
  for (int r = 0; r < sites; ++r) {
    std::vector<int> letters(static_cast<std::size_t>(sites), background);
    letters[static_cast<std::size_t>(r)] = odd;
    out.push_back(word_index(Word(std::move(letters)), species));
  }
  return out;
}

// ---- components ----------------------------------------------------------

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

template <class S>
std::vector<std::vector<std::size_t>> coupled_components(const Matrix<S>& m) {
  if (!m.is_square()) throw std::invalid_argument("components of a non-square matrix");
  DisjointSets sets(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j && !is_zero(m(i, j))) sets.unite(i, j);
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < m.rows(); ++i) groups[sets.find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  out.reserve(groups.size());
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

template std::vector<std::vector<std::size_t>> coupled_components(const Matrix<Rational>&);
template std::vector<std::vector<std::size_t>> coupled_components(const Matrix<double>&);

// ---- exact inverse -------------------------------------------------------

namespace {

// Inverse of one dense block. Rows are first scaled to integers (D A), the
// augmented system [D A | I] is reduced to upper-triangular form with
// Bareiss updates (every division exact), and the triangular system is then
// solved over the rationals. inv(A) = inv(D A) D.
std::optional<Matrix<Rational>> bareiss_block_inverse(const Matrix<Rational>& a, std::size_t& failed_row) {
  const std::size_t n = a.rows();
  std::vector<mpz_class> row_scale(n);
  std::vector<std::vector<mpz_class>> w(n, std::vector<mpz_class>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    mpz_class l = 1;
    for (std::size_t j = 0; j < n; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).get_den_mpz_t());
    row_scale[i] = l;
    for (std::size_t j = 0; j < n; ++j) w[i][j] = a(i, j).get_num() * (l / a(i, j).get_den());
    w[i][n + i] = 1;
  }

  std::vector<std::size_t> row_of(n);  // original row now stored at position i
  std::iota(row_of.begin(), row_of.end(), 0);
  mpz_class previous = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    while (pivot < n && w[pivot][k] == 0) ++pivot;
    if (pivot == n) {
      failed_row = row_of[k];
      return std::nullopt;
    }
    if (pivot != k) {
      std::swap(w[pivot], w[k]);
      std::swap(row_of[pivot], row_of[k]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < 2 * n; ++j) {
        mpz_class t = w[k][k] * w[i][j] - w[i][k] * w[k][j];
        mpz_divexact(w[i][j].get_mpz_t(), t.get_mpz_t(), previous.get_mpz_t());
      }
      w[i][k] = 0;
    }
    previous = w[k][k];
  }

  Matrix<Rational> x(n, n);
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t c = 0; c < n; ++c) {
      Rational acc(w[ii][n + c]);
      for (std::size_t j = ii + 1; j < n; ++j)
        if (w[ii][j] != 0 && !is_zero(x(j, c))) acc -= Rational(w[ii][j]) * x(j, c);
      acc /= Rational(w[ii][ii]);
      x(ii, c) = acc;
    }
  }
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (!is_zero(x(r, c))) x(r, c) *= Rational(row_scale[c]);
  return x;
}

}  // namespace

InverseResult<Rational> try_inverse(const Matrix<Rational>& a) {
  if (!a.is_square()) throw std::invalid_argument("inverse of a non-square matrix");
  InverseResult<Rational> result;
  Matrix<Rational> inv(a.rows(), a.cols());
  for (const auto& comp : coupled_components(a)) {
    Matrix<Rational> block = principal_submatrix(a, std::span<const std::size_t>(comp));
    std::size_t failed = 0;
    auto block_inv = bareiss_block_inverse(block, failed);
    if (!block_inv) {
      result.singular_row = comp[failed];
      return result;
    }
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (std::size_t j = 0; j < comp.size(); ++j) inv(comp[i], comp[j]) = (*block_inv)(i, j);
  }
  result.inverse = std::move(inv);
  return result;
}

InverseResult<double> try_inverse(const Matrix<double>& a) {
  if (!a.is_square()) throw std::invalid_argument("inverse of a non-square matrix");
  InverseResult<double> result;
  Matrix<double> inv(a.rows(), a.cols());
  for (const auto& comp : coupled_components(a)) {
    const auto n = static_cast<Eigen::Index>(comp.size());
    Eigen::MatrixXd block(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        block(i, j) = a(comp[static_cast<std::size_t>(i)], comp[static_cast<std::size_t>(j)]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(block);
    if (!lu.isInvertible()) {
      // Report the first original row of the block whose pivot vanished.
      const auto rank = static_cast<std::size_t>(lu.rank());
      result.singular_row = comp[std::min(rank, comp.size() - 1)];
      return result;
    }
    Eigen::MatrixXd block_inv = lu.inverse();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        inv(comp[static_cast<std::size_t>(i)], comp[static_cast<std::size_t>(j)]) = block_inv(i, j);
  }
  result.inverse = std::move(inv);
  return result;
}

Matrix<Rational> exact_inverse(const Matrix<Rational>& a) {
  auto r = try_inverse(a);
  if (!r)
    throw SingularMatrixError(r.singular_row,
                              "singular matrix: rank deficiency at row " + std::to_string(r.singular_row));
  return std::move(*r.inverse);
}

SpeciesOperator<Rational> exact_inverse(const SpeciesOperator<Rational>& a) {
  return SpeciesOperator<Rational>(a.species(), a.sites(), exact_inverse(a.matrix()));
}

// ---- spectral radius -----------------------------------------------------

double spectral_radius(const Matrix<double>& a) {
  if (!a.is_square()) throw std::invalid_argument("spectral radius of a non-square matrix");
  double rho = 0.0;
  for (const auto& comp : coupled_components(a)) {
    if (comp.size() == 1) {
      rho = std::max(rho, std::abs(a(comp[0], comp[0])));
      continue;
    }
    const auto n = static_cast<Eigen::Index>(comp.size());
    Eigen::MatrixXd block(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        block(i, j) = a(comp[static_cast<std::size_t>(i)], comp[static_cast<std::size_t>(j)]);
    if (!block.allFinite()) throw EstimationError("spectral radius of a matrix with non-finite entries");
    Eigen::EigenSolver<Eigen::MatrixXd> solver(block, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw EstimationError("eigensolver did not converge");
    rho = std::max(rho, solver.eigenvalues().cwiseAbs().maxCoeff());
  }
  return rho;
}

double spectral_radius(const SpeciesOperator<double>& a) { return spectral_radius(a.matrix()); }

}  // namespace lrswap
