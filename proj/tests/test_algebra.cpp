#include "doctest.h"

#include <random>
#include <set>

#include "lrswap/algebra.hpp"
#include "lrswap/local_ops.hpp"
#include "test_support.hpp"

using namespace lrswap;
using lrswap::test::R;

TEST_CASE("rationals stay canonical") {
  CHECK(make_rational(2, 4) == R("1/2"));
  CHECK(make_rational(3, -6).get_den() == 2);
  CHECK(parse_rational("0.3") == make_rational(3, 10));
  CHECK(parse_rational("-1.25e-2") == make_rational(-1, 80));
  CHECK(rational_from_double(0.7) == make_rational(7, 10));
  CHECK(to_string(R("6/4")) == "3/2");
  CHECK(to_string(R("4/2")) == "2");
  CHECK_THROWS_AS(make_rational(1, 0), std::invalid_argument);
  CHECK_THROWS(parse_rational("1/x"));
}

TEST_CASE("word_index is the lexicographic rank") {
  CHECK(word_index(Word{1, 1}, 2) == 0);
  CHECK(word_index(Word{1, 2}, 2) == 1);
  CHECK(word_index(Word{2, 2}, 2) == 3);
  CHECK_THROWS_AS(word_index(Word{1, 3}, 2), std::out_of_range);
  CHECK_THROWS_AS(word_index(Word{0, 1}, 2), std::out_of_range);
  for (int n : {1, 2, 3}) {
    const int sites = 3;
    for (std::size_t i = 0; i < basis_dimension(n, sites); ++i) CHECK(word_index(index_word(i, sites, n), n) == i);
  }
  CHECK(Word::parse("112") == Word{1, 1, 2});
  CHECK(Word::parse("10.2.1") == Word{10, 2, 1});
  CHECK(to_string(Word{10, 2}) == "10.2");
  CHECK_THROWS(basis_dimension(1000, 40));
}

TEST_CASE("kron") {
  using Op = SpeciesOperator<Rational>;
  CHECK(kron(Op::identity(2, 1), Op::identity(2, 1)) == Op::identity(2, 2));
  CHECK(kron(Op::identity(2, 2), Op::identity(2, 1)).dim() == 8);

  Op e(2, 1);
  e(0, 0) = 1;
  const auto ee = kron(e, e);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) CHECK(ee(r, c) == ((r == 0 && c == 0) ? 1 : 0));

  std::mt19937_64 rng(11);
  const auto a = test::random_operator<Rational>(2, 1, rng);
  const auto b = test::random_operator<Rational>(2, 2, rng);
  const auto c = test::random_operator<Rational>(2, 1, rng);
  CHECK(kron(kron(a, b), c) == kron(a, kron(b, c)));

  // concatenated-word indexing
  const auto ab = kron(a, b);
  for (std::size_t r = 0; r < ab.dim(); ++r)
    for (std::size_t col = 0; col < ab.dim(); ++col) {
      const Word rw = index_word(r, 3, 2), cw = index_word(col, 3, 2);
      CHECK(ab(r, col) == a.at(Word{rw[0]}, Word{cw[0]}) * b.at(Word{rw[1], rw[2]}, Word{cw[1], cw[2]}));
    }
}

TEST_CASE("embed") {
  const auto prm = test::params({"1/3", "2/5"});
  const auto pair = build_local_pair(prm);
  CHECK(embed(pair.B, 1, 2) == pair.B);
  const auto I2 = SpeciesOperator<Rational>::identity(2, 2);
  for (int j : {1, 2, 3}) CHECK(embed(I2, j, 4) == SpeciesOperator<Rational>::identity(2, 4));
  CHECK(embed(pair.B, 2, 3) == kron(SpeciesOperator<Rational>::identity(2, 1), pair.B));
  CHECK(embed(pair.B, 2, 3).at(Word{1, 2, 1}, Word{1, 1, 2}) == 1);
  CHECK_THROWS_AS(embed(pair.B, 0, 3), std::out_of_range);
  CHECK_THROWS_AS(embed(pair.B, 3, 3), std::out_of_range);

  for (int n : {2, 3}) {
    std::mt19937_64 rng(5 + n);
    const auto op = test::random_operator<Rational>(n, 2, rng);
    const auto op2 = test::random_operator<Rational>(n, 2, rng);
    const auto a = embed(op, 1, 4), b = embed(op2, 3, 4);
    CHECK(a * b == b * a);
  }
}

TEST_CASE("embed_on_basis agrees with the full embedding") {
  const auto prm = test::params({"1/3", "2/5", "3/4"});
  const auto pair = build_local_pair(prm);
  const auto basis = sector_indices({1, 2, 2, 3}, 3);
  for (int j = 1; j <= 3; ++j) {
    const auto full = embed(pair.Bprime, j, 4);
    const auto restricted = embed_on_basis(pair.Bprime, j, 4, std::span<const std::size_t>(basis));
    CHECK(restricted == principal_submatrix(full.matrix(), std::span<const std::size_t>(basis)));
  }
  const std::vector<std::size_t> not_invariant{word_index(Word{1, 2, 2}, 3)};
  CHECK_THROWS_AS(embed_on_basis(pair.B, 1, 3, std::span<const std::size_t>(not_invariant)), std::domain_error);
}

TEST_CASE("sector_blocks") {
  const auto d = sector_blocks(3, 2);
  REQUIRE(d.blocks.size() == 4);
  CHECK(d.block({1, 1, 1}).size() == 1);
  CHECK(d.block({1, 1, 2}).size() == 3);
  CHECK(d.block({2, 1, 2}).size() == 3);
  CHECK(d.block({2, 2, 2}).size() == 1);
  CHECK(d.block({1, 1, 2}) == std::vector<std::size_t>{1, 2, 4});

  const auto d2 = sector_blocks(2, 3);
  int singles = 0, pairs = 0;
  for (const auto& [m, idx] : d2.blocks) (idx.size() == 1 ? singles : pairs) += 1;
  CHECK(singles == 3);
  CHECK(pairs == 3);

  for (int n = 1; n <= 3; ++n)
    for (int sites = 1; sites <= 4; ++sites) {
      const auto dec = sector_blocks(sites, n);
      std::set<std::size_t> seen;
      std::size_t total = 0;
      for (const auto& [m, idx] : dec.blocks) {
        CHECK(std::is_sorted(idx.begin(), idx.end()));
        CHECK(sector_indices(m, n) == idx);
        total += idx.size();
        seen.insert(idx.begin(), idx.end());
      }
      CHECK(total == basis_dimension(n, sites));
      CHECK(seen.size() == total);
    }
}

TEST_CASE("sectors are invariant under every B, B' embedding") {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 3; ++n)
    for (int sites = 2; sites <= 4; ++sites) {
      const auto prm = random_rational_params(n, rng);
      const auto pair = build_local_pair(prm);
      const auto dec = sector_blocks(sites, n);
      std::vector<int> label(basis_dimension(n, sites));
      int id = 0;
      for (const auto& [m, idx] : dec.blocks) {
        for (auto i : idx) label[i] = id;
        ++id;
      }
      for (int j = 1; j < sites; ++j)
        for (const auto* op : {&pair.B, &pair.Bprime}) {
          const auto e = embed(*op, j, sites);
          for (std::size_t r = 0; r < e.dim(); ++r)
            for (std::size_t c = 0; c < e.dim(); ++c)
              if (!is_zero(e(r, c))) CHECK(label[r] == label[c]);
        }
    }
}

TEST_CASE("single impurity basis") {
  const auto e = single_impurity_basis(4, 2, 1, 2);
  REQUIRE(e.size() == 4);
  CHECK(index_word(e[0], 4, 2) == Word{2, 1, 1, 1});
  CHECK(index_word(e[2], 4, 2) == Word{1, 1, 2, 1});
  CHECK(index_word(e[3], 4, 2) == Word{1, 1, 1, 2});
}

TEST_CASE("exact_inverse") {
  using M = Matrix<Rational>;
  CHECK(exact_inverse(M::identity(5)) == M::identity(5));
  CHECK(exact_inverse(Rational(2) * M::identity(3)) == R("1/2") * M::identity(3));

  const auto ops = build_three_site(test::params({"1/2"}));
  const auto inv = exact_inverse(SpeciesOperator<Rational>::identity(1, 3) - ops.X);
  CHECK(inv(0, 0) == R("4/3"));

  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; ++t) {
    const auto a = test::random_operator<Rational>(2, 2, rng).matrix();
    auto res = try_inverse(a);
    if (!res) continue;
    CHECK(a * *res.inverse == M::identity(4));
    CHECK(*res.inverse * a == M::identity(4));
  }

  M singular(3, 3);
  singular(0, 0) = 1;
  singular(1, 2) = 1;
  singular(2, 2) = 2;
  try {
    exact_inverse(singular);
    FAIL("expected SingularMatrixError");
  } catch (const SingularMatrixError& e) {
    CHECK(e.pivot_row() < 3);
  }
  CHECK_FALSE(try_inverse(singular));
  CHECK_FALSE(try_inverse(to_double(singular)));
}

TEST_CASE("spectral_radius") {
  using M = Matrix<double>;
  CHECK(spectral_radius(M::identity(4)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spectral_radius(M(4, 4)) == doctest::Approx(0.0));
  const auto x = build_three_site(to_double(test::params({"1/2"}))).X;
  CHECK(spectral_radius(x) == doctest::Approx(0.25).epsilon(1e-12));

  M d(4, 4);
  const double values[] = {0.3, -0.9, 0.5, 0.1};
  for (std::size_t i = 0; i < 4; ++i) d(i, i) = values[i];
  CHECK(std::abs(spectral_radius(d) - 0.9) < 1e-10);

  M rot(2, 2);  // eigenvalues +-2i
  rot(0, 1) = 2;
  rot(1, 0) = -2;
  CHECK(std::abs(spectral_radius(rot) - 2.0) < 1e-10);
}
