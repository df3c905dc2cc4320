#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "lrswap/parallel.hpp"
#include "lrswap/reduction.hpp"
#include "lrswap/rng.hpp"
#include "lrswap/scattering.hpp"

namespace lrswap::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

Rational rational_field(const json& v, const std::string& key) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_number()) return rational_from_double(v.get<double>());
  throw ConfigError("field '" + key + "' must be a number or an \"a/b\" string");
}

template <class T>
T typed(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("field '" + key + "' has the wrong type");
  }
}

std::string rational_text(const Rational& r) { return r.get_num().get_str() + "/" + r.get_den().get_str(); }

std::string multiset_text(const Multiset& m) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) s += (i && m.size() > 9 ? "." : "") + std::to_string(m[i]);
  return s;
}

std::string number_text(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::vector<Rational> RunConfig::resolved_mu() const {
  if (mu) return *mu;
  if (species == 2) return {make_rational(1, 3), make_rational(2, 5)};
  return {};
}

ModelParams<Rational> RunConfig::params() const {
  if (!mu && species != 2) throw ConfigError("mu list required for N = " + std::to_string(species));
  try {
    return make_params<Rational>(species, resolved_mu(), p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

Window RunConfig::resolved_window() const {
  if (window) return *window;
  return particles <= 2 ? Window{-20, 20} : Window{-12, 14};
}

Configuration RunConfig::resolved_initial() const {
  if (initial) return *initial;
  Configuration c;
  std::vector<int> letters;
  for (int i = 0; i < particles; ++i) {
    c.positions.push_back(i);
    letters.push_back(1 + i % species);
  }
  c.word = Word(std::move(letters));
  return c;
}

void RunConfig::validate() const {
  if (species < 1) throw ConfigError("N must be >= 1");
  if (mu || draws == 0) params();
  if (p < 0 || p > 1) throw ConfigError("p outside [0, 1]");
  if (particles < 1) throw ConfigError("n must be >= 1");
  if (!(t_max >= 0)) throw ConfigError("t_max must be >= 0");
  if (tolerance && !(*tolerance > 0)) throw ConfigError("tolerance must be positive");
  if (order != "forward" && order != "backward" && order != "both")
    throw ConfigError("order must be forward, backward or both");
  const auto w = resolved_window();
  if (w.hi < w.lo) throw ConfigError("window is empty");
  const auto init = resolved_initial();
  try {
    init.validate(species);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("initial configuration: ") + e.what());
  }
  if (static_cast<int>(init.size()) != particles)
    throw ConfigError("initial configuration has " + std::to_string(init.size()) + " particles, n = " +
                      std::to_string(particles));
}

ordered_json RunConfig::to_json() const {
  ordered_json j;
  j["N"] = species;
  if (const auto m = resolved_mu(); !m.empty()) {
    j["mu"] = ordered_json::array();
    for (const auto& v : m) j["mu"].push_back(rational_text(v));
  }
  j["p"] = rational_text(p);
  j["n"] = particles;
  j["seed"] = seed;
  j["trials"] = trials;
  j["t_max"] = t_max;
  const auto w = resolved_window();
  j["window"] = {w.lo, w.hi};
  j["out"] = out;
  j["mode"] = mode == Mode::Exact ? "exact" : "float";
  if (tolerance) j["tolerance"] = *tolerance;
  j["points"] = points;
  j["draws"] = draws;
  const auto init = resolved_initial();
  j["initial"] = {{"positions", init.positions}, {"word", to_string(init.word)}};
  j["order"] = order;
  if (!spectral_points.empty()) {
    j["spectral_points"] = ordered_json::array();
    for (const auto& pt : spectral_points)
      j["spectral_points"].push_back({rational_text(pt[0]), rational_text(pt[1]), rational_text(pt[2])});
  }
  if (!distribution_csv.empty()) j["distribution_csv"] = distribution_csv;
  j["tamper"] = tamper;
  return j;
}

RunConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  for (const auto& [key, v] : doc.items()) {
    if (key == "N") {
      c.species = typed<int>(v, key);
    } else if (key == "mu") {
      if (!v.is_array()) throw ConfigError("field 'mu' must be an array");
      c.mu.emplace();
      for (const auto& m : v) c.mu->push_back(rational_field(m, key));
    } else if (key == "p") {
      c.p = rational_field(v, key);
    } else if (key == "n") {
      c.particles = typed<int>(v, key);
    } else if (key == "seed") {
      c.seed = typed<std::uint64_t>(v, key);
    } else if (key == "trials") {
      c.trials = typed<std::size_t>(v, key);
    } else if (key == "t_max") {
      c.t_max = typed<double>(v, key);
    } else if (key == "window") {
      auto w = typed<std::vector<Site>>(v, key);
      if (w.size() != 2) throw ConfigError("field 'window' must be [lo, hi]");
      c.window = Window{w[0], w[1]};
    } else if (key == "out") {
      c.out = typed<std::string>(v, key);
    } else if (key == "mode") {
      auto m = typed<std::string>(v, key);
      if (m != "exact" && m != "float") throw ConfigError("mode must be exact or float");
      c.mode = m == "exact" ? Mode::Exact : Mode::Float;
    } else if (key == "tolerance") {
      c.tolerance = typed<double>(v, key);
    } else if (key == "points") {
      c.points = typed<std::size_t>(v, key);
    } else if (key == "draws") {
      c.draws = typed<std::size_t>(v, key);
    } else if (key == "initial") {
      if (!v.is_object() || !v.contains("positions") || !v.contains("word"))
        throw ConfigError("field 'initial' needs positions and word");
      Configuration init;
      init.positions = typed<std::vector<Site>>(v["positions"], "initial.positions");
      try {
        init.word = Word::parse(typed<std::string>(v["word"], "initial.word"));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("initial.word: ") + e.what());
      }
      c.initial = std::move(init);
    } else if (key == "order") {
      c.order = typed<std::string>(v, key);
    } else if (key == "spectral_points") {
      if (!v.is_array()) throw ConfigError("field 'spectral_points' must be an array of triples");
      for (const auto& pt : v) {
        if (!pt.is_array() || pt.size() != 3) throw ConfigError("spectral points are [alpha, beta, gamma]");
        c.spectral_points.push_back({rational_field(pt[0], key), rational_field(pt[1], key), rational_field(pt[2], key)});
      }
    } else if (key == "distribution_csv") {
      c.distribution_csv = typed<std::string>(v, key);
    } else if (key == "tamper") {
      c.tamper = typed<bool>(v, key);
    } else {
      throw ConfigError("unknown config field '" + key + "'");
    }
  }
  return c;
}

namespace {

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  body(f);
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

// JSON report to --out when given, stdout otherwise.
void emit_report(const RunConfig& cfg, const ordered_json& report, Streams s) {
  if (cfg.out.empty()) {
    s.out << report.dump(2) << '\n';
  } else {
    write_file(cfg.out, [&](std::ostream& f) { f << report.dump(2) << '\n'; });
  }
}

// CSV to --out with the JSON summary on stdout; without --out the CSV goes
// to stdout and the summary to stderr.
void emit_csv(const RunConfig& cfg, const std::string& csv, const ordered_json& summary, Streams s) {
  if (cfg.out.empty()) {
    s.out << csv;
    s.err << summary.dump(2) << '\n';
  } else {
    write_file(cfg.out, [&](std::ostream& f) { f << csv; });
    s.out << summary.dump(2) << '\n';
  }
}

ordered_json envelope(const std::string& command, const RunConfig& cfg) {
  ordered_json j;
  j["command"] = command;
  j["config"] = cfg.to_json();
  return j;
}

void add_close(VerificationReport& r, const std::string& name, const Matrix<double>& expected,
               const Matrix<double>& actual, double tol) {
  const double d = max_abs_difference(expected, actual);
  r.add(name, d <= tol, "max deviation " + number_text(d));
}

VerificationReport float_operator_checks(const ModelParams<double>& params, const LocalPair<double>& pair, double tol) {
  VerificationReport r;
  const int n = params.species;
  const auto ops = build_three_site(pair);
  const auto I3 = Matrix<double>::identity(basis_dimension(n, 3));
  {
    const auto sum = (pair.B + pair.Bprime).matrix();
    double worst = 0;
    for (std::size_t c = 0; c < sum.cols(); ++c) {
      double total = 0;
      for (std::size_t row = 0; row < sum.rows(); ++row) total += sum(row, c);
      worst = std::max(worst, std::abs(total - 1));
    }
    r.add("B+B' column sums equal 1", worst <= tol, "max deviation " + number_text(worst));
  }
  for (int k : {2, 3}) {
    auto expected = diagonal_three_site<double>(n, [&](int i) { return std::pow(params.mu_of(i) * params.lambda_of(i), k); });
    add_close(r, "X^" + std::to_string(k) + " = sum (mu lambda)^" + std::to_string(k) + " E_i", expected.matrix(),
              power(ops.X.matrix(), k), tol);
    add_close(r, "Y^" + std::to_string(k) + " = sum (mu lambda)^" + std::to_string(k) + " E_i", expected.matrix(),
              power(ops.Y.matrix(), k), tol);
  }
  add_close(r, "X X0 = sum mu^3 lambda E_i",
            diagonal_three_site<double>(n, [&](int i) { return std::pow(params.mu_of(i), 3) * params.lambda_of(i); }).matrix(),
            (ops.X * ops.X0).matrix(), tol);
  add_close(r, "(I-X) times closed inverse = I", I3,
            (SpeciesOperator<double>(n, 3, I3) - ops.X).matrix() * closed_inverse_I_minus_X(params).matrix(), tol);
  add_close(r, "(I-Y) times closed inverse = I", I3,
            (SpeciesOperator<double>(n, 3, I3) - ops.Y).matrix() * closed_inverse_I_minus_Y(params).matrix(), tol);
  return r;
}

int cmd_verify_operators(const RunConfig& cfg, Streams s) {
  const auto params = cfg.params();
  auto pair = build_local_pair(params);
  if (cfg.tamper) pair.B.at(Word{1, 1}, Word{1, 1}) += make_rational(1, 7);
  VerificationReport report;
  if (cfg.mode == Mode::Exact) {
    report = verify_structure_lemmas(params, pair);
  } else {
    const auto fp = to_double(params);
    LocalPair<double> fpair{SpeciesOperator<double>(params.species, 2, to_double(pair.B.matrix())),
                            SpeciesOperator<double>(params.species, 2, to_double(pair.Bprime.matrix()))};
    report = float_operator_checks(fp, fpair, cfg.tolerance.value_or(1e-12));
  }
  auto j = envelope("verify-operators", cfg);
  j["report"] = report.to_json();
  emit_report(cfg, j, s);
  return report.all_passed() ? 0 : 1;
}

// R with the 12 -> 21 transmission moved onto the reflection entry.
Rational tampered_deviation(const ModelParams<Rational>& params, const SpectralPoint& pt) {
  auto tweak = [&](const Rational& a, const Rational& b) {
    auto r = build_R(params.species, a, b, params);
    r.at(Word{1, 2}, Word{2, 1}) = 0;
    r.at(Word{1, 2}, Word{1, 2}) = b;
    return r;
  };
  const auto ba = tweak(pt.alpha, pt.beta), ga = tweak(pt.alpha, pt.gamma), gb = tweak(pt.beta, pt.gamma);
  const auto lhs = embed(gb, 1, 3) * embed(ga, 2, 3) * embed(ba, 1, 3);
  const auto rhs = embed(ba, 2, 3) * embed(ga, 1, 3) * embed(gb, 2, 3);
  return max_abs_difference(lhs.matrix(), rhs.matrix());
}

int cmd_verify_ybe(const RunConfig& cfg, Streams s) {
  const auto params = cfg.params();
  if (cfg.tamper && params.species < 2) throw ConfigError("tampered R needs N >= 2");
  if (cfg.mode == Mode::Float) s.err << "verify-ybe runs in exact arithmetic; mode float ignored\n";
  std::vector<SpectralPoint> points;
  std::vector<std::string> rejections;
  for (const auto& pt : cfg.spectral_points) {
    SpectralPoint sp{pt[0], pt[1], pt[2]};
    try {
      validate_point(sp, params);
      points.push_back(sp);
    } catch (const std::exception& e) {
      rejections.push_back("configured point " + to_string(sp) + " rejected: " + e.what());
    }
  }
  std::size_t need = cfg.points > points.size() ? cfg.points - points.size() : 0;
  if (need > 0) {
    auto sample = sample_spectral_points(params, need, cfg.seed);
    points.insert(points.end(), sample.points.begin(), sample.points.end());
    rejections.insert(rejections.end(), sample.rejections.begin(), sample.rejections.end());
  }
  std::vector<YbeResult> results(points.size());
  parallel_for(points.size(), default_threads(), [&](std::size_t i) {
    results[i] = verify_ybe(params, points[i]);
    if (cfg.tamper) results[i].max_deviation = tampered_deviation(params, points[i]);
  });

  auto j = envelope("verify-ybe", cfg);
  j["points"] = ordered_json::array();
  std::size_t failures = 0;
  Rational worst = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& r = results[i];
    if (!r.holds()) ++failures;
    worst = std::max(worst, r.max_deviation);
    j["points"].push_back({{"alpha", rational_text(points[i].alpha)},
                           {"beta", rational_text(points[i].beta)},
                           {"gamma", rational_text(points[i].gamma)},
                           {"deviation", rational_text(r.max_deviation)},
                           {"block_deviation", rational_text(r.max_block_deviation)},
                           {"holds", r.holds()}});
  }
  j["rejections"] = rejections;
  for (const auto& line : rejections) s.err << line << '\n';
  VerificationReport report;
  report.add("Yang-Baxter deviation zero at every point", failures == 0,
             std::to_string(failures) + " failing of " + std::to_string(points.size()) + ", max deviation " +
                 rational_text(worst));
  report.add("requested point count reached", points.size() >= cfg.points,
             std::to_string(points.size()) + " of " + std::to_string(cfg.points));
  j["report"] = report.to_json();
  emit_report(cfg, j, s);
  return report.all_passed() ? 0 : 1;
}

std::vector<ModelParams<Rational>> parameter_draws(const RunConfig& cfg) {
  if (cfg.draws == 0) return {cfg.params()};
  std::vector<ModelParams<Rational>> out;
  for (std::size_t d = 0; d < cfg.draws; ++d) {
    std::mt19937_64 rng(trial_seed(cfg.seed, d));
    out.push_back(random_rational_params(cfg.species, rng, 12, true, cfg.p));
  }
  return out;
}

int cmd_scan_invertibility(const RunConfig& cfg, Streams s) {
  if (cfg.mode == Mode::Exact && (cfg.species > 4 || cfg.particles > 4))
    throw ConfigError("exact scan-invertibility needs N, n <= 4 (use mode float)");
  const auto draws = parameter_draws(cfg);
  const auto multisets = sector_blocks(cfg.particles, cfg.species).blocks;
  std::vector<Multiset> keys;
  for (const auto& [m, idx] : multisets) keys.push_back(m);

  std::vector<std::vector<SectorScan>> scans(draws.size(), std::vector<SectorScan>(keys.size()));
  parallel_for(draws.size() * keys.size(), default_threads(), [&](std::size_t job) {
    const auto d = job / keys.size(), k = job % keys.size();
    scans[d][k] = cfg.mode == Mode::Exact ? sector_invertibility_scan(keys[k], draws[d])
                                          : sector_invertibility_scan(keys[k], to_double(draws[d]));
  });

  std::ostringstream csv;
  csv << "draw,mu,multiset,case,k,invertible,spectral_radius\n";
  std::size_t rows = 0, singular = 0;
  double worst_rho = 0;
  for (std::size_t d = 0; d < draws.size(); ++d) {
    std::string mu;
    for (std::size_t i = 0; i < draws[d].mu.size(); ++i)
      mu += (i ? ";" : "") + (cfg.mode == Mode::Exact ? rational_text(draws[d].mu[i]) : number_text(draws[d].mu[i].get_d()));
    for (const auto& scan : scans[d])
      for (const auto& row : scan.rows) {
        ++rows;
        if (!row.invertible) ++singular;
        worst_rho = std::max(worst_rho, row.spectral_radius);
        csv << d << ',' << mu << ',' << multiset_text(scan.multiset) << ',' << to_string(scan.classification) << ','
            << row.k << ',' << (row.invertible ? "true" : "false") << ',' << number_text(row.spectral_radius) << '\n';
      }
  }
  auto j = envelope("scan-invertibility", cfg);
  j["rows"] = rows;
  j["singular"] = singular;
  j["max_spectral_radius"] = worst_rho;
  VerificationReport report;
  report.add("every scanned A_k invertible", singular == 0, std::to_string(singular) + " singular of " + std::to_string(rows));
  j["report"] = report.to_json();
  emit_csv(cfg, csv.str(), j, s);
  return report.all_passed() ? 0 : 1;
}

int cmd_rates(const RunConfig& cfg, Streams s) {
  const auto params = cfg.params();
  if (cfg.particles < 2) throw ConfigError("rates needs n >= 2");
  if (cfg.trials < 10'000) throw ConfigError("rates needs trials >= 10000");
  const auto fp = to_double(params);
  std::ostringstream csv;
  csv << "n,i,formula_rate,oracle_rate,mc_estimate,ci_low,ci_high\n";
  VerificationReport report;
  auto render = [&](const Rational& r) { return cfg.mode == Mode::Exact ? rational_text(r) : number_text(r.get_d()); };
  std::size_t row = 0;
  for (int n = 2; n <= cfg.particles; ++n)
    for (int i = 1; i <= cfg.species; ++i, ++row) {
      const Rational formula = effective_shift_rate(n, i, params);
      const Rational element = transition_coefficient(Word(std::vector<int>(static_cast<std::size_t>(n), i)),
                                                      Word(std::vector<int>(static_cast<std::size_t>(n), i)), n, params);
      const auto block = block_configuration(Word(std::vector<int>(static_cast<std::size_t>(n), i)));
      Configuration shifted = block;
      for (auto& x : shifted.positions) ++x;
      const auto dist = exact_resolution_distribution(block, 0, Direction::Right, params);
      const auto it = dist.find(shifted);
      const Rational oracle = params.p * (it == dist.end() ? Rational(0) : it->second);
      const auto mc = estimate_shift_rate(n, i, fp, cfg.trials, trial_seed(cfg.seed, row), default_threads());
      const std::string tag = "n=" + std::to_string(n) + ", i=" + std::to_string(i) + ": ";
      report.add(tag + "formula equals oracle", formula == oracle, render(formula) + " vs " + render(oracle));
      report.add(tag + "formula equals the block matrix element", formula == element, render(element));
      report.add(tag + "Monte Carlo interval brackets the rate", mc.brackets(formula.get_d()),
                 "[" + number_text(mc.ci_low) + ", " + number_text(mc.ci_high) + "]");
      csv << n << ',' << i << ',' << render(formula) << ',' << render(oracle) << ',' << number_text(mc.rate) << ','
          << number_text(mc.ci_low) << ',' << number_text(mc.ci_high) << '\n';
    }
  auto j = envelope("rates", cfg);
  j["report"] = report.to_json();
  emit_csv(cfg, csv.str(), j, s);
  return report.all_passed() ? 0 : 1;
}

int cmd_simulate(const RunConfig& cfg, Streams s) {
  const auto params = to_double(cfg.params());
  const auto init = cfg.resolved_initial();
  const auto traj = simulate(init, cfg.t_max, params, cfg.seed);
  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  auto j = envelope("simulate", cfg);
  j["events"] = traj.events.size();
  j["final"] = to_string(traj.final);
  emit_csv(cfg, csv.str(), j, s);
  return 0;
}

int cmd_master_compare(const RunConfig& cfg, Streams s) {
  const auto params = cfg.params();
  if (cfg.particles > 3) throw ConfigError("master-compare needs n <= 3");
  const auto window = cfg.resolved_window();
  const auto init = cfg.resolved_initial();
  if (!window.contains(init)) throw ConfigError("initial configuration lies outside the window");
  std::vector<EliminationOrder> orders;
  if (cfg.order != "backward") orders.push_back(EliminationOrder::Forward);
  if (cfg.order != "forward") orders.push_back(EliminationOrder::Backward);
  auto name = [](EliminationOrder o) { return o == EliminationOrder::Forward ? "forward" : "backward"; };

  VerificationReport report;
  const auto rules = build_generator_from_rules(cfg.particles, window, params);
  report.append(check_generator(rules), "rules: ");
  report.append(pair_boundary_identity(params), "pair boundary: ");
  if (cfg.mode == Mode::Exact) {
    std::vector<GeneratorSystem<Rational>> bethe;
    for (auto o : orders) {
      bethe.push_back(build_generator_bethe(cfg.particles, window, params, o));
      report.append(compare_generators(rules, bethe.back()), std::string("rules vs ") + name(o) + ": ");
    }
    if (bethe.size() == 2) report.append(compare_generators(bethe[0], bethe[1]), "forward vs backward: ");
    if (cfg.particles == 2)
      report.append(compare_generators(rules, build_generator_pair_equation(window, params)), "rules vs pair equation: ");
  } else {
    const auto exact = to_double(rules);
    for (auto o : orders) {
      const auto fl = build_generator_bethe(cfg.particles, window, to_double(params), o);
      double worst = 0;
      for (std::size_t i = 0; i < exact.size(); ++i) {
        worst = std::max(worst, std::abs(exact.diagonal[i] - fl.diagonal[i]));
        worst = std::max(worst, std::abs(exact.leak[i] - fl.leak[i]));
        std::map<std::size_t, double> diff = exact.rates[i];
        for (const auto& [to, r] : fl.rates[i]) diff[to] -= r;
        for (const auto& [to, r] : diff) worst = std::max(worst, std::abs(r));
      }
      report.add(std::string("rules vs ") + name(o) + " (float): entries within 1e-12", worst <= 1e-12,
                 "max deviation " + number_text(worst));
    }
  }

  const auto g = to_double(rules);
  const auto rk = integrate(g, point_mass(g, init), cfg.t_max);
  const auto mc = sample_distribution(g, init, cfg.t_max, to_double(params), cfg.trials, cfg.seed, default_threads());
  const double tv = total_variation(rk, mc);
  const double tol = cfg.tolerance.value_or(0.005);
  report.add("total variation RK4 vs Monte Carlo below tolerance", tv < tol, number_text(tv) + " vs " + number_text(tol));
  report.add("window leak below 1e-8", rk.leaked < 1e-8, number_text(rk.leaked));
  if (!cfg.distribution_csv.empty())
    write_file(cfg.distribution_csv, [&](std::ostream& f) { write_distribution_csv(f, g, rk); });

  auto j = envelope("master-compare", cfg);
  j["states"] = rules.size();
  j["total_variation"] = tv;
  j["rk4_leaked"] = rk.leaked;
  j["mc_leaked"] = mc.leaked;
  j["report"] = report.to_json();
  emit_report(cfg, j, s);
  return report.all_passed() ? 0 : 1;
}

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::string> out;
  std::optional<std::size_t> trials;
  std::optional<double> tolerance;
  std::optional<std::string> order;
  bool tamper = false;
};

RunConfig resolve(const Flags& f) {
  RunConfig cfg;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw ConfigError("cannot read config '" + f.config + "'");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("config '" + f.config + "': " + e.what());
    }
    cfg = config_from_json(doc);
  }
  if (f.seed) cfg.seed = *f.seed;
  if (f.mode) cfg.mode = *f.mode == "exact" ? Mode::Exact : Mode::Float;
  if (f.out) cfg.out = *f.out;
  if (f.trials) cfg.trials = *f.trials;
  if (f.tolerance) cfg.tolerance = *f.tolerance;
  if (f.order) cfg.order = *f.order;
  if (f.tamper) cfg.tamper = true;
  cfg.validate();
  return cfg;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verification toolkit and simulator for the multispecies long-range swap model", "lrswap"};
  app.require_subcommand(1);
  Flags flags;
  using Command = int (*)(const RunConfig&, Streams);
  const std::vector<std::tuple<std::string, std::string, Command>> commands{
      {"verify-operators", "exact checks of the local operator identities", cmd_verify_operators},
      {"verify-ybe", "Yang-Baxter equation at sampled spectral points", cmd_verify_ybe},
      {"scan-invertibility", "invertibility of the reduction chain per sector (CSV)", cmd_scan_invertibility},
      {"rates", "block shift rates: formula, oracle, Monte Carlo (CSV)", cmd_rates},
      {"simulate", "Gillespie trajectory (CSV)", cmd_simulate},
      {"master-compare", "rule-built vs elimination-built generators and RK4 vs Monte Carlo", cmd_master_compare},
  };
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& [cmd, help, fn] : commands) {
    auto* sub = app.add_subcommand(cmd, help);
    sub->add_option("--config", flags.config, "JSON config file");
    sub->add_option("--seed", flags.seed, "master seed");
    sub->add_option("--mode", flags.mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));
    sub->add_option("--out", flags.out, "output path");
    sub->add_option("--trials", flags.trials, "Monte Carlo trials");
    sub->add_option("--tolerance", flags.tolerance, "pass threshold");
    if (cmd == "verify-operators") sub->add_flag("--tamper", flags.tamper, "corrupt B before checking");
    if (cmd == "verify-ybe") sub->add_flag("--tamper", flags.tamper, "corrupt R before checking");
    if (cmd == "master-compare")
      sub->add_option("--order", flags.order, "elimination order")->check(CLI::IsMember({"forward", "backward", "both"}));
    subs.emplace_back(sub, fn);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg = resolve(flags);
    for (const auto& [sub, fn] : subs)
      if (sub->parsed()) return fn(cfg, Streams{out, err});
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace lrswap::cli
