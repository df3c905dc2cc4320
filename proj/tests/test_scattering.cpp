#include "doctest.h"

#include "lrswap/scattering.hpp"
#include "test_support.hpp"

using namespace lrswap;
using lrswap::test::R;

TEST_CASE("R entries") {
  const auto prm = test::params({"1", "1/3"});
  const Rational a = R("2"), b = R("3");
  const auto r = build_R(2, a, b, prm);
  CHECK(r.at(Word{1, 1}, Word{1, 1}) == -(1 - a) * b / ((1 - b) * a));
  const Rational mu = R("1/3"), lambda = R("2/3");
  CHECK(r.at(Word{2, 2}, Word{2, 2}) == -(mu + lambda * a * b - a) * b / ((mu + lambda * a * b - b) * a));
  CHECK(r.at(Word{1, 2}, Word{2, 1}) == b);
  CHECK(r.at(Word{2, 1}, Word{1, 2}) == R("1/2"));
  int nonzero = 0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) nonzero += !is_zero(r(i, j));
  CHECK(nonzero == 4);

  const auto same = build_R(2, R("5/2"), R("5/2"), test::params({"1/3", "3/7"}));
  CHECK(same.at(Word{1, 1}, Word{1, 1}) == -1);
  CHECK(same.at(Word{2, 2}, Word{2, 2}) == -1);
}

TEST_CASE("pole guard") {
  const auto prm = test::params({"1/2"});
  CHECK_THROWS_AS(build_R(1, R("0"), R("2"), prm), PoleError);
  // mu + lambda a b - b = 1/2 + b(a/2 - 1) = 0 with a = 1, b = 1
  try {
    build_R(1, R("1"), R("1"), prm);
    FAIL("expected PoleError");
  } catch (const PoleError& e) {
    CHECK(e.species() == 1);
    CHECK(e.value() == 0);
  }
  CHECK_THROWS_AS(validate_point({R("2"), R("2"), R("3")}, prm), std::invalid_argument);
  CHECK_THROWS_AS(validate_point({R("2"), R("1"), R("1/2")}, test::params({"1"})), PoleError);
  CHECK_NOTHROW(validate_point({R("2"), R("3"), R("5")}, prm));
  // (xi_a, xi_b) = (3, 2) is a pole for mu = 4/5 but never enters the products
  CHECK_THROWS_AS(check_pole_guard(R("3"), R("2"), test::params({"4/5"})), PoleError);
  CHECK_NOTHROW(validate_point({R("2"), R("3"), R("5")}, test::params({"4/5"})));
}

TEST_CASE("YBE single species") {
  const auto res = verify_ybe(test::params({"1/3"}), {R("2"), R("3"), R("5")});
  CHECK(res.holds());
}

TEST_CASE("YBE at a fixed point, N = 3") {
  const auto res = verify_ybe(test::params({"1/3", "1/2", "4/5"}), {R("2"), R("3"), R("5")});
  CHECK(res.max_deviation == 0);
  CHECK(res.holds());
  CHECK(res.block_deviation.size() == 10);
}

TEST_CASE("YBE over sampled spectral points") {
  for (auto mu : std::vector<std::vector<std::string>>{{"0", "1", "1/2"}, {"1/3", "1/2", "4/5"}, {"2/9", "7/8"}}) {
    const auto prm = test::params(mu);
    const auto sweep = verify_ybe_sampled(prm, 50, 2024, 2);
    CHECK(sweep.results.size() == 50);
    CHECK(sweep.failures == 0);
    CHECK(sweep.max_deviation == 0);
    CHECK(sweep.report.all_passed());
  }
  // reproducible sample
  const auto prm = test::params({"0", "1", "1/2"});
  const auto s1 = sample_spectral_points(prm, 20, 7), s2 = sample_spectral_points(prm, 20, 7);
  REQUIRE(s1.points.size() == s2.points.size());
  for (std::size_t i = 0; i < s1.points.size(); ++i) CHECK(to_string(s1.points[i]) == to_string(s2.points[i]));
  CHECK(s1.rejections == s2.rejections);
}

TEST_CASE("rejections are logged") {
  // mu = 0: pole whenever xi_a xi_b = xi_b, i.e. xi_a = 1; a tiny range forces rejections.
  const auto s = sample_spectral_points(test::params({"0"}), 30, 1, 2, 1);
  CHECK(s.points.size() == 30);
  CHECK_FALSE(s.rejections.empty());
  for (const auto& pt : s.points) CHECK_NOTHROW(validate_point(pt, test::params({"0"})));
}

TEST_CASE("a corrupted R violates YBE") {
  const auto prm = test::params({"1/3", "1/2", "4/5"});
  const SpectralPoint pt{R("2"), R("3"), R("5")};
  auto tweak = [&](const Rational& a, const Rational& b) {
    auto r = build_R(3, a, b, prm);
    // move the 12 -> 21 transmission onto the reflection entry
    r.at(Word{1, 2}, Word{2, 1}) = 0;
    r.at(Word{1, 2}, Word{1, 2}) = b;
    return r;
  };
  const auto ba = tweak(pt.alpha, pt.beta), ga = tweak(pt.alpha, pt.gamma), gb = tweak(pt.beta, pt.gamma);
  const auto lhs = embed(gb, 1, 3) * embed(ga, 2, 3) * embed(ba, 1, 3);
  const auto rhs = embed(ba, 2, 3) * embed(ga, 1, 3) * embed(gb, 2, 3);
  CHECK(max_abs_difference(lhs.matrix(), rhs.matrix()) > 0);
}

TEST_CASE("relabeling invariance") {
  const auto rep = check_relabeling_invariance(test::params({"1/3", "1/3", "4/5"}), R("2"), R("7/3"));
  CHECK(rep.all_passed());
  CHECK(rep.checks.size() == 1 + 6);
  const auto rep4 = check_relabeling_invariance(test::params({"1/2", "0", "1/2", "1"}), R("-3"), R("5/4"));
  CHECK(rep4.all_passed());
}
