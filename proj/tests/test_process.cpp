#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "lrswap/process.hpp"
#include "lrswap/reduction.hpp"
#include "test_support.hpp"

using namespace lrswap;
using lrswap::test::R;

namespace {

Configuration cfg(std::vector<Site> positions, Word w) { return Configuration{std::move(positions), std::move(w)}; }

Word same(int n, int label) { return Word(std::vector<int>(static_cast<std::size_t>(n), label)); }

Configuration shifted(Configuration c, Site by = 1) {
  for (auto& x : c.positions) x += by;
  return c;
}

Rational prob(const OutcomeDistribution& d, const Configuration& c) {
  auto it = d.find(c);
  return it == d.end() ? Rational(0) : it->second;
}

std::vector<int> sorted_letters(const Word& w) {
  auto v = w.letters();
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("configuration basics") {
  CHECK(cfg({0, 1, 5}, Word{1, 2, 1}).admissible());
  CHECK_FALSE(cfg({0, 0}, Word{1, 2}).admissible());
  CHECK_THROWS_AS(cfg({1, 0}, Word{1, 2}).validate(2), std::invalid_argument);
  CHECK_THROWS_AS(cfg({0, 1}, Word{1, 3}).validate(2), std::invalid_argument);
  CHECK(to_string(cfg({-1, 2}, Word{2, 1})) == "-1,2|21");
}

TEST_CASE("single resolutions") {
  const auto prm = to_double(test::params({"1/2", "1/2"}));
  Rng rng(1);
  CHECK(resolve_collision(cfg({0, 1}, Word{1, 2}), 0, Direction::Right, prm, rng) == cfg({1, 2}, Word{2, 1}));
  CHECK(resolve_collision(cfg({0, 1}, Word{2, 1}), 0, Direction::Right, prm, rng) == cfg({0, 1}, Word{1, 2}));
  // leftward, distinct species: same ordering rule
  CHECK(resolve_collision(cfg({0, 1}, Word{2, 1}), 1, Direction::Left, prm, rng) == cfg({-1, 0}, Word{1, 2}));
  CHECK(resolve_collision(cfg({0, 1}, Word{1, 2}), 1, Direction::Left, prm, rng) == cfg({0, 1}, Word{2, 1}));
  CHECK(resolve_collision(cfg({0, 4}, Word{1, 2}), 1, Direction::Left, prm, rng) == cfg({0, 3}, Word{1, 2}));

  const auto drop = to_double(test::params({"1"}));
  CHECK(resolve_collision(block_configuration(same(3, 1)), 0, Direction::Right, drop, rng) ==
        cfg({1, 2, 3}, same(3, 1)));
  CHECK_THROWS_AS(resolve_collision(cfg({0}, Word{1}), 1, Direction::Right, drop, rng), std::out_of_range);
}

TEST_CASE("exact resolution oracle") {
  const auto half = test::params({"1/2"});
  const auto block = block_configuration(same(3, 1));
  const auto d = exact_resolution_distribution(block, 0, Direction::Right, half);
  CHECK(d.size() == 2);
  CHECK(prob(d, shifted(block)) == R("1/3"));
  CHECK(prob(d, block) == R("2/3"));

  const auto prm = test::params({"2/7", "3/5"});
  const auto iij = block_configuration(Word{1, 1, 2});
  const auto d2 = exact_resolution_distribution(iij, 0, Direction::Right, prm);
  CHECK(prob(d2, cfg({1, 2, 3}, Word{1, 2, 1})) == R("2/7"));
  CHECK(prob(d2, iij) == R("5/7"));

  const auto single = exact_resolution_distribution(cfg({3}, Word{2}), 0, Direction::Left, prm);
  CHECK(single.size() == 1);
  CHECK(prob(single, cfg({2}, Word{2})) == 1);

  CHECK_THROWS_AS(exact_resolution_distribution(block, 0, Direction::Right, half, 1), OracleCapacityError);
}

TEST_CASE("oracle reproduces the closed block-shift rate") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 6; ++t) {
    const auto prm = random_rational_params(1, rng, 11);
    for (int n = 1; n <= 6; ++n) {
      const auto block = block_configuration(same(n, 1));
      const auto d = exact_resolution_distribution(block, 0, Direction::Right, prm);
      const Rational mu = prm.mu_of(1);
      Rational expected = 1;
      for (int k = 0; k < n - 1; ++k) expected *= mu;
      expected /= shift_normalizer(mu, n - 1);
      CHECK(prob(d, shifted(block)) == expected);
      CHECK(prob(d, shifted(block)) == effective_shift_rate(n, 1, prm) / prm.p);
      // leftward: mu and lambda trade places
      const auto left = exact_resolution_distribution(block, static_cast<std::size_t>(n - 1), Direction::Left, prm);
      Rational mirrored = 1;
      for (int k = 0; k < n - 1; ++k) mirrored *= prm.lambda_of(1);
      mirrored /= shift_normalizer(prm.lambda_of(1), n - 1);
      CHECK(prob(left, shifted(block, -1)) == mirrored);
    }
  }
}

TEST_CASE("full-shift probability depends only on same-species encounters") {
  const auto prm = test::params({"1/5", "1/3", "2/7", "5/6"});
  const Rational mu = prm.mu_of(2);
  const Rational expected = mu * mu * mu / shift_normalizer(mu, 3);

  const auto a = cfg({1, 2, 3, 4, 5, 6}, Word{2, 2, 4, 3, 2, 2});
  CHECK(prob(exact_resolution_distribution(a, 0, Direction::Right, prm), cfg({2, 3, 4, 5, 6, 7}, Word{2, 4, 3, 2, 2, 2})) ==
        expected);
  const auto b = cfg({1, 2, 3, 4}, Word{2, 2, 2, 2});
  CHECK(prob(exact_resolution_distribution(b, 0, Direction::Right, prm), cfg({2, 3, 4, 5}, Word{2, 2, 2, 2})) ==
        expected);
  // the stronger particle at the end is pushed back across the block into the vacated site
  const auto c = cfg({1, 2, 3, 4, 5, 6, 7}, Word{2, 2, 4, 3, 2, 2, 1});
  CHECK(prob(exact_resolution_distribution(c, 0, Direction::Right, prm), cfg({1, 2, 3, 4, 5, 6, 7}, Word{1, 2, 4, 3, 2, 2, 2})) ==
        expected);
}

TEST_CASE("resolution invariants over random configurations") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 60; ++t) {
    const int species = 1 + t % 3;
    const auto prm = random_rational_params(species, rng, 8);
    std::uniform_int_distribution<int> label(1, species), count(1, 4), gap(1, 2);
    const int n = count(rng);
    Configuration c;
    Site x = 0;
    std::vector<int> letters;
    for (int i = 0; i < n; ++i) {
      x += gap(rng) - (i == 0 ? 1 : 0);
      c.positions.push_back(x);
      letters.push_back(label(rng));
    }
    c.word = Word(letters);
    for (std::size_t k = 0; k < c.size(); ++k)
      for (auto dir : {Direction::Left, Direction::Right}) {
        const auto d = exact_resolution_distribution(c, k, dir, prm);
        Rational total = 0;
        for (const auto& [out, p] : d) {
          CHECK(out.admissible());
          CHECK(sorted_letters(out.word) == sorted_letters(c.word));
          CHECK(p > 0);
          total += p;
        }
        CHECK(total == 1);
      }
  }
}

TEST_CASE("binary regime resolves deterministically") {
  for (auto mu : std::vector<std::vector<std::string>>{{"0", "1"}, {"1", "0", "1"}}) {
    const auto prm = test::params(mu);
    const auto c = cfg({0, 1, 2, 3}, Word{1, 1, 2, 1});
    for (std::size_t k = 0; k < 4; ++k)
      for (auto dir : {Direction::Left, Direction::Right}) {
        const auto d = exact_resolution_distribution(c, k, dir, prm);
        CHECK(d.size() == 1);
        Rng r1(1), r2(987654321);
        const auto o1 = resolve_collision(c, k, dir, to_double(prm), r1);
        const auto o2 = resolve_collision(c, k, dir, to_double(prm), r2);
        CHECK(o1 == o2);
        CHECK(o1 == d.begin()->first);
      }
  }
}

TEST_CASE("empirical resolution frequencies match the oracle within 4 sigma") {
  const auto prm = test::params({"3/10", "1/2", "4/5"});
  const auto prm_d = to_double(prm);
  struct Start { Configuration c; std::size_t k; Direction d; };
  const std::vector<Start> battery{
      {block_configuration(Word{1, 1, 1, 1}), 0, Direction::Right},
      {block_configuration(Word{2, 1, 2, 2}), 0, Direction::Right},
      {block_configuration(Word{3, 3, 1, 3}), 3, Direction::Left},
      {cfg({0, 1, 2, 4}, Word{2, 3, 2, 1}), 1, Direction::Right},
  };
  const std::size_t draws = 1'000'000;
  for (std::size_t b = 0; b < battery.size(); ++b) {
    const auto& s = battery[b];
    const auto exact = exact_resolution_distribution(s.c, s.k, s.d, prm);
    const auto counts = empirical_resolution(s.c, s.k, s.d, prm_d, draws, 500 + b, 2);
    for (const auto& [out, n] : counts) CHECK(exact.count(out) == 1);
    for (const auto& [out, p] : exact) {
      const double pe = p.get_d();
      const auto it = counts.find(out);
      const double freq = it == counts.end() ? 0.0 : static_cast<double>(it->second) / draws;
      const double sigma = std::sqrt(pe * (1 - pe) / draws);
      INFO(to_string(out) << " exact " << pe << " empirical " << freq);
      CHECK(std::abs(freq - pe) <= 4 * sigma);
    }
  }
}

TEST_CASE("parallel and sequential runs agree") {
  const auto prm = to_double(test::params({"1/2"}));
  const auto block = block_configuration(same(3, 1));
  CHECK(empirical_resolution(block, 0, Direction::Right, prm, 20'000, 9, 1) ==
        empirical_resolution(block, 0, Direction::Right, prm, 20'000, 9, 3));
  const auto e1 = estimate_shift_rate(3, 1, prm, 20'000, 4, 1);
  const auto e3 = estimate_shift_rate(3, 1, prm, 20'000, 4, 3);
  CHECK(e1.shifts == e3.shifts);
}

TEST_CASE("simulate") {
  const auto prm = to_double(test::params({"1/2", "1/3"}, "1"));
  const auto init = cfg({0, 1, 2, 5}, Word{1, 2, 1, 1});
  const auto t = simulate(init, 20.0, prm, 77);
  CHECK_FALSE(t.events.empty());
  double last = 0.0;
  for (const auto& e : t.events) {
    CHECK(e.direction == Direction::Right);
    CHECK(e.time > last);
    last = e.time;
    CHECK(e.post.admissible());
    CHECK(sorted_letters(e.post.word) == sorted_letters(init.word));
  }
  CHECK(t.events.back().post == t.final);
  const auto again = simulate(init, 20.0, prm, 77);
  CHECK(again.final == t.final);
  CHECK(again.events.size() == t.events.size());

  const auto both = to_double(test::params({"1/2", "1/3"}, "1/2"));
  const auto t2 = simulate(init, 20.0, both, 78);
  bool saw_left = false;
  for (const auto& e : t2.events) saw_left |= e.direction == Direction::Left;
  CHECK(saw_left);

  CHECK(simulate(init, 0.0, prm, 1).events.empty());

  std::ostringstream csv;
  write_trajectory_csv(csv, t);
  const std::string text = csv.str();
  CHECK(text.substr(0, text.find('\n')) == "time,particle,direction,positions,word");
}

TEST_CASE("single particle is a Poisson walker") {
  const auto prm = to_double(test::params({"1/2"}, "1"));
  const std::size_t runs = 100'000;
  const double t_max = 4.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < runs; ++i) {
    Rng rng = trial_rng(3, i);
    sum += static_cast<double>(simulate_final(cfg({0}, Word{1}), t_max, prm, rng).positions[0]);
  }
  const double mean = sum / runs;
  CHECK(std::abs(mean - t_max) <= 3 * std::sqrt(t_max / runs));
}

TEST_CASE("shift-rate estimates") {
  const auto half = to_double(test::params({"1/2"}));
  const auto e3 = estimate_shift_rate(3, 1, half, 1'000'000, 2026, 2);
  CHECK(e3.brackets(1.0 / 3.0));

  const auto e2 = estimate_shift_rate(2, 1, to_double(test::params({"3/10"})), 1'000'000, 7, 2);
  CHECK(e2.brackets(0.3));

  const auto e4 = estimate_shift_rate(4, 1, to_double(test::params({"1"})), 10'000, 1);
  CHECK(e4.rate == 1.0);
  CHECK(e4.ci_low == 1.0);
  CHECK(e4.ci_high == 1.0);

  const auto quarter = estimate_shift_rate(4, 1, half, 200'000, 5);
  CHECK(quarter.brackets(0.25));
  CHECK_THROWS_AS(estimate_shift_rate(3, 1, half, 9'999, 1), std::invalid_argument);
}
