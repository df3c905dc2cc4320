#include "lrswap/local_ops.hpp"

#include <sstream>

namespace lrswap {

template <class S>
void ModelParams<S>::validate() const {
  if (species < 1) throw std::invalid_argument("species count must be >= 1");
  if (mu.size() != static_cast<std::size_t>(species))
    throw std::invalid_argument("mu list has " + std::to_string(mu.size()) + " entries, expected " +
                                std::to_string(species));
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu[i] < S(0) || mu[i] > S(1))
      throw std::invalid_argument("mu_" + std::to_string(i + 1) + " outside [0, 1]");
  if (p < S(0) || p > S(1)) throw std::invalid_argument("p outside [0, 1]");
}

template struct ModelParams<Rational>;
template struct ModelParams<double>;

ModelParams<double> to_double(const ModelParams<Rational>& params) {
  ModelParams<double> out;
  out.species = params.species;
  for (const auto& m : params.mu) out.mu.push_back(m.get_d());
  out.p = params.p.get_d();
  return out;
}

ModelParams<Rational> random_rational_params(int species, std::mt19937_64& rng, int max_denominator, bool interior,
                                             Rational p) {
  if (max_denominator < (interior ? 2 : 1)) throw std::invalid_argument("max_denominator too small");
  ModelParams<Rational> out;
  out.species = species;
  out.p = std::move(p);
  for (int i = 0; i < species; ++i) {
    std::uniform_int_distribution<long> den_dist(interior ? 2 : 1, max_denominator);
    const long den = den_dist(rng);
    std::uniform_int_distribution<long> num_dist(interior ? 1 : 0, interior ? den - 1 : den);
    out.mu.push_back(make_rational(num_dist(rng), den));
  }
  out.validate();
  return out;
}

// b_{pi,nu}: mu_i on ii; 1 on (nu2 nu1, nu1 nu2) for nu1 < nu2.
// b'_{pi,nu}: lambda_i on ii; 1 on (nu2 nu1, nu1 nu2) for nu1 > nu2.
template <class S>
LocalPair<S> build_local_pair(const ModelParams<S>& params) {
  params.validate();
  const int n = params.species;
  LocalPair<S> pair{SpeciesOperator<S>(n, 2), SpeciesOperator<S>(n, 2)};
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b) {
      const Word col{a, b};
      if (a == b) {
        pair.B.at(col, col) = params.mu_of(a);
        pair.Bprime.at(col, col) = params.lambda_of(a);
      } else if (a < b) {
        pair.B.at(Word{b, a}, col) = S(1);
      } else {
        pair.Bprime.at(Word{b, a}, col) = S(1);
      }
    }
  return pair;
}

template LocalPair<Rational> build_local_pair(const ModelParams<Rational>&);
template LocalPair<double> build_local_pair(const ModelParams<double>&);

template <class S>
ThreeSiteOps<S> build_three_site(const LocalPair<S>& pair) {
  const auto I_B = embed(pair.B, 2, 3);
  const auto B_I = embed(pair.B, 1, 3);
  const auto Bp_I = embed(pair.Bprime, 1, 3);
  return ThreeSiteOps<S>{I_B * Bp_I, Bp_I * I_B, I_B * B_I};
}

template ThreeSiteOps<Rational> build_three_site(const LocalPair<Rational>&);
template ThreeSiteOps<double> build_three_site(const LocalPair<double>&);

namespace {

template <class S>
SpeciesOperator<S> closed_inverse_from(const SpeciesOperator<S>& x, const ModelParams<S>& params) {
  auto correction = diagonal_three_site<S>(params.species, [&](int i) {
    S alpha = params.mu_of(i) * params.lambda_of(i);
    return S(alpha * alpha / (S(1) - alpha));
  });
  return SpeciesOperator<S>::identity(params.species, 3) + x + correction;
}

}  // namespace

template <class S>
SpeciesOperator<S> closed_inverse_I_minus_X(const ModelParams<S>& params) {
  return closed_inverse_from(build_three_site(params).X, params);
}

template <class S>
SpeciesOperator<S> closed_inverse_I_minus_Y(const ModelParams<S>& params) {
  return closed_inverse_from(build_three_site(params).Y, params);
}

template SpeciesOperator<Rational> closed_inverse_I_minus_X(const ModelParams<Rational>&);
template SpeciesOperator<double> closed_inverse_I_minus_X(const ModelParams<double>&);
template SpeciesOperator<Rational> closed_inverse_I_minus_Y(const ModelParams<Rational>&);
template SpeciesOperator<double> closed_inverse_I_minus_Y(const ModelParams<double>&);

SpeciesOperator<Rational> x_case_table(const ModelParams<Rational>& params) {
  const int n = params.species;
  SpeciesOperator<Rational> x(n, 3);
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b)
      for (int c = 1; c <= n; ++c) {
        const Word col{a, b, c};
        if (a == b && b == c)
          x.at(col, col) = params.lambda_of(a) * params.mu_of(a);
        else if (a == b && a < c)
          x.at(Word{a, c, a}, col) = params.lambda_of(a);
        else if (a > b && a == c)
          x.at(Word{b, a, a}, col) = params.mu_of(a);
        else if (c > a && a > b)
          x.at(Word{b, c, a}, col) = 1;
      }
  return x;
}

SpeciesOperator<Rational> y_case_table(const ModelParams<Rational>& params) {
  const int n = params.species;
  SpeciesOperator<Rational> y(n, 3);
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b)
      for (int c = 1; c <= n; ++c) {
        const Word col{a, b, c};
        if (a == b && b == c)
          y.at(col, col) = params.lambda_of(a) * params.mu_of(a);
        else if (a > b && b == c)
          y.at(Word{b, a, b}, col) = params.mu_of(b);
        else if (a == c && a > b)
          y.at(Word{a, a, b}, col) = params.lambda_of(a);
        else if (a > c && c > b)
          y.at(Word{c, a, b}, col) = 1;
      }
  return y;
}

namespace {

// Empty string when equal, else the first differing column word and entry.
std::string first_difference(const SpeciesOperator<Rational>& expected, const SpeciesOperator<Rational>& actual) {
  for (std::size_t c = 0; c < expected.dim(); ++c)
    for (std::size_t r = 0; r < expected.dim(); ++r)
      if (expected(r, c) != actual(r, c)) {
        std::ostringstream os;
        os << "basis word |" << to_string(index_word(c, expected.sites(), expected.species())) << ">, row <"
           << to_string(index_word(r, expected.sites(), expected.species())) << "|: expected "
           << to_string(expected(r, c)) << ", got " << to_string(actual(r, c));
        return os.str();
      }
  return {};
}

void add_equality(VerificationReport& report, std::string name, const SpeciesOperator<Rational>& expected,
                  const SpeciesOperator<Rational>& actual) {
  std::string diff = first_difference(expected, actual);
  report.add(std::move(name), diff.empty(), diff);
}

}  // namespace

VerificationReport verify_structure_lemmas(const ModelParams<Rational>& params) {
  return verify_structure_lemmas(params, build_local_pair(params));
}

VerificationReport verify_structure_lemmas(const ModelParams<Rational>& params, const LocalPair<Rational>& pair) {
  params.validate();
  const int n = params.species;
  VerificationReport report;
  const auto ops = build_three_site(pair);
  const auto I3 = SpeciesOperator<Rational>::identity(n, 3);

  // Columns of B + B': unit mass on every basis word.
  {
    const auto sum = pair.B + pair.Bprime;
    std::string detail;
    for (std::size_t c = 0; c < sum.dim() && detail.empty(); ++c) {
      Rational total = 0;
      for (std::size_t r = 0; r < sum.dim(); ++r) total += sum(r, c);
      if (total != 1)
        detail = "column |" + to_string(index_word(c, 2, n)) + "> sums to " + to_string(total);
    }
    report.add("B+B' column sums equal 1", detail.empty(), detail);
  }

  add_equality(report, "X case table", x_case_table(params), ops.X);
  add_equality(report, "Y case table", y_case_table(params), ops.Y);

  for (int k : {2, 3}) {
    auto expected = diagonal_three_site<Rational>(n, [&](int i) {
      Rational alpha = params.mu_of(i) * params.lambda_of(i);
      Rational out = 1;
      for (int t = 0; t < k; ++t) out *= alpha;
      return out;
    });
    add_equality(report, "X^" + std::to_string(k) + " = sum (mu lambda)^" + std::to_string(k) + " E_i", expected,
                 SpeciesOperator<Rational>(n, 3, power(ops.X.matrix(), k)));
    add_equality(report, "Y^" + std::to_string(k) + " = sum (mu lambda)^" + std::to_string(k) + " E_i", expected,
                 SpeciesOperator<Rational>(n, 3, power(ops.Y.matrix(), k)));
  }

  {
    auto diag_part = diagonal_three_site<Rational>(n, [&](int i) { return Rational(params.mu_of(i) * params.lambda_of(i)); });
    auto off = ops.X - diag_part;
    add_equality(report, "X nilpotent off the single-species sector", SpeciesOperator<Rational>(n, 3), off * off);
    auto off_y = ops.Y - diag_part;
    add_equality(report, "Y nilpotent off the single-species sector", SpeciesOperator<Rational>(n, 3), off_y * off_y);
  }

  add_equality(report, "X X0 = sum mu^3 lambda E_i", diagonal_three_site<Rational>(n, [&](int i) {
                 return Rational(params.mu_of(i) * params.mu_of(i) * params.mu_of(i) * params.lambda_of(i));
               }),
               ops.X * ops.X0);

  for (bool use_x : {true, false}) {
    const auto& op = use_x ? ops.X : ops.Y;
    const std::string label = use_x ? "X" : "Y";
    auto closed = I3 + op + diagonal_three_site<Rational>(n, [&](int i) {
                    Rational alpha = params.mu_of(i) * params.lambda_of(i);
                    return Rational(alpha * alpha / (1 - alpha));
                  });
    add_equality(report, "(I-" + label + ") times closed inverse = I", I3, (I3 - op) * closed);
    auto inv = try_inverse((I3 - op).matrix());
    if (!inv) {
      report.add("closed inverse of I-" + label + " matches exact inverse", false,
                 "I-" + label + " singular at row " + std::to_string(inv.singular_row));
    } else {
      add_equality(report, "closed inverse of I-" + label + " matches exact inverse",
                   SpeciesOperator<Rational>(n, 3, std::move(*inv.inverse)), closed);
    }
  }
  return report;
}

}  // namespace lrswap
