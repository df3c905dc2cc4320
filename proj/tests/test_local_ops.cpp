#include "doctest.h"

#include <random>

#include "lrswap/local_ops.hpp"
#include "test_support.hpp"

using namespace lrswap;
using lrswap::test::R;

namespace {

void check_all_pass(const VerificationReport& report) {
  for (const auto& c : report.checks) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.passed);
  }
}

}  // namespace

TEST_CASE("params validation") {
  CHECK_THROWS_AS(test::params({"3/2"}), std::invalid_argument);
  CHECK_THROWS_AS(test::params({"1/2"}, "-1/3"), std::invalid_argument);
  CHECK_THROWS_AS(make_params<Rational>(2, {R("1/2")}), std::invalid_argument);
  const auto p = test::params({"1/3"}, "7/10");
  CHECK(p.lambda_of(1) == R("2/3"));
  CHECK(p.q() == R("3/10"));
}

TEST_CASE("local pair entries") {
  const auto prm = test::params({"1/3", "2/5"});
  const auto pair = build_local_pair(prm);
  const Word w11{1, 1}, w12{1, 2}, w21{2, 1}, w22{2, 2};
  CHECK(pair.B.at(w11, w11) == R("1/3"));
  CHECK(pair.B.at(w21, w12) == 1);
  CHECK(pair.B.at(w22, w22) == R("2/5"));
  CHECK(pair.B.at(w12, w21) == 0);
  CHECK(pair.Bprime.at(w11, w11) == R("2/3"));
  CHECK(pair.Bprime.at(w12, w21) == 1);
  CHECK(pair.Bprime.at(w22, w22) == R("3/5"));
  CHECK(pair.Bprime.at(w21, w12) == 0);
  int nonzero = 0;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) nonzero += !is_zero(pair.B(r, c)) + !is_zero(pair.Bprime(r, c));
  CHECK(nonzero == 6);

  const auto drop = build_local_pair(test::params({"1", "1", "1"}));
  for (int i = 1; i <= 3; ++i) CHECK(drop.Bprime.at(Word{i, i}, Word{i, i}) == 0);
}

TEST_CASE("B + B' is column stochastic with one unit entry off the diagonal words") {
  std::mt19937_64 rng(2);
  for (int n = 1; n <= 4; ++n) {
    const auto pair = build_local_pair(random_rational_params(n, rng));
    for (std::size_t c = 0; c < pair.B.dim(); ++c) {
      const Word w = index_word(c, 2, n);
      Rational sum = 0;
      int units = 0;
      for (std::size_t r = 0; r < pair.B.dim(); ++r) {
        sum += pair.B(r, c) + pair.Bprime(r, c);
        units += (pair.B(r, c) == 1) + (pair.Bprime(r, c) == 1);
      }
      CHECK(sum == 1);
      if (w[0] != w[1]) CHECK(units == 1);
    }
  }
}

TEST_CASE("three-site composition order") {
  const auto prm = test::params({"1/3", "2/5"});
  const auto ops = build_three_site(prm);
  CHECK(ops.X.at(Word{1, 2, 1}, Word{1, 1, 2}) == R("2/3"));
  CHECK(ops.X.at(Word{1, 2, 2}, Word{2, 1, 2}) == R("2/5"));
  for (std::size_t r = 0; r < ops.X.dim(); ++r) CHECK(ops.X(r, word_index(Word{2, 1, 1}, 2)) == 0);
  // The transposed composition breaks the case table.
  const auto pair = build_local_pair(prm);
  const auto swapped = embed(pair.Bprime, 1, 3) * embed(pair.B, 2, 3);
  CHECK(swapped == ops.Y);
  CHECK_FALSE(swapped == x_case_table(prm));
  CHECK(ops.X == x_case_table(prm));
  CHECK(ops.Y == y_case_table(prm));
}

TEST_CASE("closed inverse of I - X") {
  const auto half = test::params({"1/2"});
  CHECK(closed_inverse_I_minus_X(half).at(Word{1, 1, 1}, Word{1, 1, 1}) == R("4/3"));

  const auto drop = test::params({"1", "1"});
  const auto ops = build_three_site(drop);
  CHECK((ops.X * ops.X).matrix().is_zero());
  CHECK(closed_inverse_I_minus_X(drop) == SpeciesOperator<Rational>::identity(2, 3) + ops.X);

  const auto prm = test::params({"1/3", "2/5"});
  CHECK(closed_inverse_I_minus_X(prm).at(Word{1, 2, 1}, Word{1, 1, 2}) == prm.lambda_of(1));

  std::mt19937_64 rng(23);
  for (int t = 0; t < 24; ++t) {
    const int n = 1 + t % 3;
    const auto p = random_rational_params(n, rng);
    const auto I = SpeciesOperator<Rational>::identity(n, 3);
    const auto o = build_three_site(p);
    CHECK(closed_inverse_I_minus_X(p) * (I - o.X) == I);
    CHECK((I - o.Y) * closed_inverse_I_minus_Y(p) == I);
  }

  const auto fl = closed_inverse_I_minus_X(to_double(prm));
  const auto ex = closed_inverse_I_minus_X(prm);
  CHECK(max_abs_difference(fl.matrix(), to_double(ex.matrix())) < 1e-15);
}

TEST_CASE("structure lemmas") {
  check_all_pass(verify_structure_lemmas(test::params({"1/3", "2/5"})));
  check_all_pass(verify_structure_lemmas(test::params({"0", "1", "1/2"})));

  const auto one = test::params({"1"});
  check_all_pass(verify_structure_lemmas(one));
  const auto ops = build_three_site(one);
  CHECK(ops.X.matrix().is_zero());

  std::mt19937_64 rng(41);
  for (int t = 0; t < 10; ++t) check_all_pass(verify_structure_lemmas(random_rational_params(1 + t % 4, rng)));
}

TEST_CASE("a corrupted pair is caught and localized") {
  const auto prm = test::params({"1/3", "2/5"});
  auto pair = build_local_pair(prm);
  pair.B.at(Word{1, 1}, Word{1, 1}) = R("1/2");
  const auto report = verify_structure_lemmas(prm, pair);
  CHECK_FALSE(report.all_passed());
  bool localized = false;
  for (const auto& c : report.checks)
    if (c.name == "X case table") {
      CHECK_FALSE(c.passed);
      localized = c.detail.find("basis word |") != std::string::npos;
    }
  CHECK(localized);
}
