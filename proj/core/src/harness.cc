#include "altkit/harness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "altkit/alternant.h"
#include "altkit/errors.h"

namespace altkit {

namespace {

struct TrialOutcome {
  bool ran = false;
  std::optional<unsigned> observed;
  std::optional<double> abs_det;
  std::optional<double> rel_det;
  std::optional<nlohmann::json> violation;
};

// Runs fn(trial) for every trial index and returns outcomes in index order.
template <class Fn>
std::vector<TrialOutcome> run_trials(unsigned trials, unsigned threads, Fn fn) {
  std::vector<TrialOutcome> out(trials);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max(1u, trials));
  std::atomic<unsigned> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (unsigned t = next++; t < trials; t = next++) {
      try {
        out[t] = fn(t);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return out;
}

void aggregate(CampaignReport& report, const std::vector<TrialOutcome>& outcomes) {
  for (unsigned t = 0; t < outcomes.size(); ++t) {
    const auto& o = outcomes[t];
    if (!o.ran) continue;
    ++report.trials_run;
    if (o.observed) {
      report.max_observed_roots = std::max(report.max_observed_roots, *o.observed);
      ++report.histogram[*o.observed];
    }
    if (o.abs_det) {
      report.min_abs_determinant =
          report.min_abs_determinant ? std::min(*report.min_abs_determinant, *o.abs_det) : *o.abs_det;
    }
    if (o.rel_det) {
      report.min_relative_determinant = report.min_relative_determinant
                                            ? std::min(*report.min_relative_determinant, *o.rel_det)
                                            : *o.rel_det;
    }
    if (o.violation) report.violations.push_back({t, *o.violation});
  }
}

nlohmann::json rationals_json(const std::vector<Rational>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<Rational> random_nodes(std::mt19937_64& rng, unsigned count, const Interval& range,
                                   const Interval& domain, double min_gap) {
  const double lo = range.lo()->get_d();
  const double hi = range.hi()->get_d();
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> xs(count);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    for (auto& x : xs) x = dist(rng);
    std::sort(xs.begin(), xs.end());
    bool ok = true;
    for (unsigned i = 0; i < count && ok; ++i) {
      if (!(xs[i] > lo) || !domain.contains(xs[i])) ok = false;
      if (i > 0 && xs[i] - xs[i - 1] < min_gap) ok = false;
    }
    if (ok) {
      std::vector<Rational> nodes;
      for (double x : xs) nodes.push_back(rational_from_double(x));
      return nodes;
    }
  }
  throw InvalidArgument("could not place " + std::to_string(count) + " nodes with gap " +
                        std::to_string(min_gap) + " in " + to_string(range));
}

}  // namespace

std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

Rational random_rational(std::mt19937_64& rng, long bound) {
  std::uniform_int_distribution<long> num(-bound, bound);
  std::uniform_int_distribution<long> den(1, bound);
  long p = num(rng);
  long q = den(rng);
  Rational r(p, static_cast<unsigned long>(q));
  r.canonicalize();
  return r;
}

std::vector<Rational> random_coefficients(std::mt19937_64& rng, std::size_t count, long bound) {
  std::vector<Rational> c(count);
  do {
    for (auto& x : c) x = random_rational(rng, bound);
  } while (count > 0 && std::all_of(c.begin(), c.end(), [](const Rational& x) { return x == 0; }));
  return c;
}

Interval default_node_range(const FunctionSystemSpec& spec) {
  const Interval& iv = spec.interval();
  Rational lo = iv.lo() ? *iv.lo() : Rational(0);
  bool log_family = !std::holds_alternative<PowerSystem>(spec.kind()) &&
                    !std::holds_alternative<CustomSystem>(spec.kind());
  Rational hi = lo + (log_family ? 49 : 10);
  if (iv.hi() && *iv.hi() < hi) hi = *iv.hi();
  return Interval(lo, hi);
}

CampaignReport run_root_bound_campaign(const CampaignConfig& cfg) {
  const auto start = Clock::now();
  std::optional<unsigned> bound = cfg.bound ? cfg.bound : root_bound(cfg.spec);
  if (!bound) {
    throw InvalidArgument("no root bound known for this " + cfg.spec.kind_name() +
                          " system; supply one in the config");
  }
  std::optional<LogPowExpr> witness;
  if (cfg.witness_roots) witness = sharpness_witness(cfg.spec, *cfg.witness_roots);
  const std::size_t dim = cfg.spec.dimension();

  auto outcomes = run_trials(cfg.trials, cfg.threads, [&](unsigned t) {
    TrialOutcome o;
    auto rng = trial_engine(cfg.seed, t);
    LogPowExpr f;
    std::vector<Rational> coeffs;
    if (witness) {
      Rational s;
      do s = random_rational(rng, cfg.coeff_bound); while (s == 0);
      coeffs = {s};
      f = scale(*witness, s);
    } else {
      coeffs = random_coefficients(rng, dim, cfg.coeff_bound);
      f = member(cfg.spec, coeffs);
    }
    if (f.is_zero()) return o;  // dependent custom basis
    o.ran = true;
    NumericRoots roots = numeric_count_roots(f, cfg.spec.interval(), cfg.oracle);
    o.observed = roots.count;
    if (roots.count > *bound) {
      nlohmann::json brackets = nlohmann::json::array();
      for (const auto& b : roots.brackets) brackets.push_back({b.lo, b.hi});
      o.violation = nlohmann::json{{"coeffs", rationals_json(coeffs)},
                                   {"expr", to_string(f)},
                                   {"observed", roots.count},
                                   {"bound", *bound},
                                   {"brackets", brackets}};
    }
    return o;
  });

  CampaignReport report;
  report.name = "root_bound:" + cfg.spec.kind_name();
  report.config = to_json(cfg);
  report.config["bound"] = *bound;
  aggregate(report, outcomes);
  report.wall_seconds = seconds_since(start);
  return report;
}

CampaignReport run_invertibility_campaign(const CampaignConfig& cfg) {
  const auto start = Clock::now();
  const auto dim = static_cast<unsigned>(cfg.spec.dimension());
  if (cfg.node_count && *cfg.node_count != dim) {
    throw InvalidArgument("node_count " + std::to_string(*cfg.node_count) +
                          " differs from the system dimension " + std::to_string(dim));
  }
  Interval range = cfg.node_range ? *cfg.node_range : default_node_range(cfg.spec);
  if (!range.lo() || !range.hi()) throw InvalidArgument("node_range must be finite");
  if (!range.is_subset_of(cfg.spec.interval())) {
    throw InvalidArgument("node_range " + to_string(range) + " is not inside " +
                          to_string(cfg.spec.interval()));
  }

  auto outcomes = run_trials(cfg.trials, cfg.threads, [&](unsigned t) {
    TrialOutcome o;
    o.ran = true;
    auto rng = trial_engine(cfg.seed, t);
    std::vector<Rational> nodes = random_nodes(rng, dim, range, cfg.spec.interval(), cfg.min_gap);
    AlternantMatrix a = build_matrix(cfg.spec, nodes);
    InvertibilityVerdict v = is_invertible(a, cfg.rel_threshold);
    o.abs_det = std::fabs(v.determinant.value);
    if (v.method != "exact") o.rel_det = std::fabs(v.determinant.value) / v.row_scale;
    if (!v.invertible) {
      nlohmann::json nodes_json = nlohmann::json::array();
      for (const auto& x : nodes) nodes_json.push_back(x.get_d());
      o.violation = nlohmann::json{{"nodes", nodes_json}, {"verdict", to_json(v)}};
    }
    return o;
  });

  CampaignReport report;
  report.name = "invertibility:" + cfg.spec.kind_name();
  report.config = to_json(cfg);
  report.config["node_range"] = to_json(range);
  aggregate(report, outcomes);
  report.wall_seconds = seconds_since(start);
  return report;
}

LemmaId parse_lemma_id(const std::string& name) {
  if (name == "log_derivative_1") return LemmaId::kLogDerivative1;
  if (name == "log_derivative_2") return LemmaId::kLogDerivative2;
  if (name == "log_derivative_3") return LemmaId::kLogDerivative3;
  if (name == "derivative_roots") return LemmaId::kDerivativeRoots;
  if (name == "alternating_signs") return LemmaId::kAlternatingSigns;
  throw InvalidArgument("unknown lemma '" + name + "'");
}

std::string lemma_name(LemmaId id) {
  switch (id) {
    case LemmaId::kLogDerivative1: return "log_derivative_1";
    case LemmaId::kLogDerivative2: return "log_derivative_2";
    case LemmaId::kLogDerivative3: return "log_derivative_3";
    case LemmaId::kDerivativeRoots: return "derivative_roots";
    case LemmaId::kAlternatingSigns: return "alternating_signs";
  }
  return "unknown";
}

std::vector<Rational> log_derivative_constants(unsigned kmax) {
  std::vector<Rational> c;
  if (kmax == 0) return c;
  c.push_back(1);
  for (unsigned k = 1; k < kmax; ++k) {
    c.push_back(Rational(k + 1) * c.back() + Rational(factorial(k)));
  }
  return c;
}

namespace {

void check_log_derivative_1(const LemmaParams& p, CampaignReport& r) {
  for (unsigned k = 0; k <= p.kmax; ++k) {
    LogPowExpr got = differentiate_n(LogPowExpr::monomial(Rational(k), 1), k + 1);
    LogPowExpr want = LogPowExpr::monomial(-1, 0, Rational(factorial(k)));
    ++r.trials_run;
    if (!equal(got, want)) {
      r.violations.push_back({k, {{"k", k}, {"got", to_string(got)}, {"want", to_string(want)}}});
    }
  }
}

void check_log_derivative_3(const LemmaParams& p, CampaignReport& r) {
  std::vector<Rational> recurrence = log_derivative_constants(p.kmax);
  nlohmann::json constants = nlohmann::json::array();
  for (unsigned k = 1; k <= p.kmax; ++k) {
    LogPowExpr got = differentiate_n(LogPowExpr::monomial(Rational(k), 1), k);
    ++r.trials_run;
    // Expect exactly k! ln x + C with C > 0.
    std::optional<Rational> c;
    bool shape = true;
    for (const auto& t : got.terms()) {
      if (t.alpha == 0 && t.logpow == 1 && t.coeff == Rational(factorial(k))) continue;
      if (t.alpha == 0 && t.logpow == 0) {
        c = t.coeff;
        continue;
      }
      shape = false;
    }
    if (got.size() != 2) shape = false;
    if (!shape || !c || *c <= 0 || *c != recurrence[k - 1]) {
      r.violations.push_back({k,
                              {{"k", k},
                               {"got", to_string(got)},
                               {"expected_constant", to_string(recurrence[k - 1])}}});
    }
    constants.push_back(c ? to_string(*c) : std::string("?"));
  }
  r.details["C_k"] = constants;
}

void check_log_derivative_2(const LemmaParams& p, CampaignReport& r) {
  nlohmann::json tables = nlohmann::json::object();
  unsigned trial = 0;
  for (unsigned N = std::max(2u, p.nmin); N <= p.nmax; ++N) {
    std::optional<std::vector<Rational>> reference;
    for (unsigned s = 0; s < p.samples; ++s, ++trial) {
      auto rng = trial_engine(p.seed, trial);
      std::vector<Rational> poly = random_coefficients(rng, N, 1000);
      ++r.trials_run;
      try {
        AlternatingForm form = extract_alternating_form(poly, N);
        std::vector<Rational> c;
        for (const auto& e : form.coeffs) c.push_back(e.c);
        if (!reference) {
          reference = c;
        } else if (c != *reference) {
          r.violations.push_back({trial,
                                  {{"N", N}, {"p", rationals_json(poly)},
                                   {"c", rationals_json(c)},
                                   {"reference_c", rationals_json(*reference)}}});
        }
      } catch (const VerificationError& e) {
        r.violations.push_back({trial, {{"N", N}, {"p", rationals_json(poly)}, {"error", e.what()}}});
      }
    }
    if (reference) tables[std::to_string(N)] = rationals_json(*reference);
  }
  r.details["c_j"] = tables;
}

void check_alternating_signs(const LemmaParams& p, CampaignReport& r) {
  unsigned trial = 0;
  for (unsigned N = std::max(1u, p.nmin); N <= p.nmax; ++N) {
    for (unsigned j = 0; j < N; ++j, ++trial) {
      ++r.trials_run;
      LogPowExpr h = differentiate_n(LogPowExpr::monomial(Rational(j), 1), N);
      int want = ((N - 1 + j) % 2 == 0) ? 1 : -1;
      bool ok = h.size() == 1 && h.terms()[0].logpow == 0 &&
                h.terms()[0].alpha == Rational(static_cast<long>(j) - static_cast<long>(N)) &&
                sign(h.terms()[0].coeff) == want;
      if (!ok) {
        r.violations.push_back({trial, {{"N", N}, {"j", j}, {"got", to_string(h)}, {"sign", want}}});
      }
    }
  }
}

void check_derivative_roots(const LemmaParams& p, CampaignReport& r) {
  // Random members of the ln families on (1, horizon).
  const std::vector<FunctionSystemSpec> families = {
      FunctionSystemSpec::log_poly(1), FunctionSystemSpec::log_poly(2),
      FunctionSystemSpec::log_poly(3), FunctionSystemSpec::mixed(1, 1, 1),
      FunctionSystemSpec::mixed(1, 2, 2), FunctionSystemSpec::general_ln(3, 1)};
  OracleOptions fine = p.oracle;
  fine.grid_points *= 4;
  for (unsigned s = 0; s < p.samples; ++s) {
    auto rng = trial_engine(p.seed, s);
    const auto& spec = families[s % families.size()];
    std::vector<Rational> coeffs = random_coefficients(rng, spec.dimension(), 1000);
    LogPowExpr f = member(spec, coeffs);
    LogPowExpr df = differentiate(f);
    if (f.is_zero() || df.is_zero()) continue;
    ++r.trials_run;
    unsigned roots_f = numeric_count_roots(f, spec.interval(), p.oracle).count;
    unsigned roots_df = numeric_count_roots(df, spec.interval(), fine).count;
    ++r.histogram[roots_f];
    r.max_observed_roots = std::max(r.max_observed_roots, roots_f);
    if (roots_f > roots_df + 1) {
      r.violations.push_back({s,
                              {{"f", to_string(f)}, {"roots_f", roots_f},
                               {"roots_df", roots_df}}});
    }
  }
}

}  // namespace

CampaignReport verify_lemma(LemmaId id, const LemmaParams& params) {
  const auto start = Clock::now();
  CampaignReport r;
  r.name = "lemma:" + lemma_name(id);
  r.config = {{"lemma", lemma_name(id)}, {"kmax", params.kmax}, {"nmin", params.nmin},
              {"nmax", params.nmax}, {"samples", params.samples}, {"seed", params.seed}};
  switch (id) {
    case LemmaId::kLogDerivative1: check_log_derivative_1(params, r); break;
    case LemmaId::kLogDerivative2: check_log_derivative_2(params, r); break;
    case LemmaId::kLogDerivative3: check_log_derivative_3(params, r); break;
    case LemmaId::kDerivativeRoots: check_derivative_roots(params, r); break;
    case LemmaId::kAlternatingSigns: check_alternating_signs(params, r); break;
  }
  r.wall_seconds = seconds_since(start);
  return r;
}

nlohmann::json to_json(const CampaignConfig& cfg) {
  nlohmann::json j = {{"spec", to_json(cfg.spec)},
                      {"trials", cfg.trials},
                      {"seed", cfg.seed},
                      {"coeff_bound", cfg.coeff_bound},
                      {"min_gap", cfg.min_gap},
                      {"threshold", cfg.rel_threshold},
                      {"grid_points", cfg.oracle.grid_points},
                      {"tol", cfg.oracle.tol},
                      {"horizon", cfg.oracle.horizon}};
  if (cfg.bound) j["bound"] = *cfg.bound;
  if (cfg.witness_roots) j["witness_roots"] = rationals_json(*cfg.witness_roots);
  if (cfg.node_range) j["node_range"] = to_json(*cfg.node_range);
  if (cfg.node_count) j["node_count"] = *cfg.node_count;
  return j;
}

CampaignConfig campaign_config_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("spec")) {
    throw InvalidArgument("campaign config must be an object with a 'spec'");
  }
  try {
    CampaignConfig cfg;
    cfg.spec = spec_from_json(j.at("spec"));
    if (j.contains("trials")) cfg.trials = j.at("trials").get<unsigned>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("coeff_bound")) cfg.coeff_bound = j.at("coeff_bound").get<long>();
    if (j.contains("bound")) cfg.bound = j.at("bound").get<unsigned>();
    if (j.contains("witness_roots")) {
      std::vector<Rational> roots;
      for (const auto& r : j.at("witness_roots")) {
        roots.push_back(parse_rational(r.is_string() ? r.get<std::string>() : r.dump()));
      }
      cfg.witness_roots = std::move(roots);
    }
    if (j.contains("node_range")) cfg.node_range = interval_from_json(j.at("node_range"));
    if (j.contains("node_count")) cfg.node_count = j.at("node_count").get<unsigned>();
    if (j.contains("min_gap")) cfg.min_gap = j.at("min_gap").get<double>();
    if (j.contains("threshold")) cfg.rel_threshold = j.at("threshold").get<double>();
    if (j.contains("grid_points")) cfg.oracle.grid_points = j.at("grid_points").get<unsigned>();
    if (j.contains("tol")) cfg.oracle.tol = j.at("tol").get<double>();
    if (j.contains("horizon")) cfg.oracle.horizon = j.at("horizon").get<double>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<unsigned>();
    if (cfg.trials < 1) throw InvalidArgument("trials must be >= 1");
    if (cfg.coeff_bound < 1) throw InvalidArgument("coeff_bound must be >= 1");
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed campaign config: ") + e.what());
  }
}

nlohmann::json to_json(const CampaignReport& report, bool include_wall_time) {
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"trial", v.trial}, {"detail", v.detail}});
  }
  nlohmann::json histogram = nlohmann::json::object();
  for (const auto& [roots, count] : report.histogram) histogram[std::to_string(roots)] = count;
  nlohmann::json j = {{"name", report.name},
                      {"config", report.config},
                      {"pass", report.pass()},
                      {"trials_run", report.trials_run},
                      {"violations", violations},
                      {"max_observed_roots", report.max_observed_roots},
                      {"histogram", histogram},
                      {"details", report.details}};
  j["min_abs_determinant"] = report.min_abs_determinant
                                 ? nlohmann::json(*report.min_abs_determinant)
                                 : nlohmann::json(nullptr);
  j["min_relative_determinant"] = report.min_relative_determinant
                                      ? nlohmann::json(*report.min_relative_determinant)
                                      : nlohmann::json(nullptr);
  if (include_wall_time) j["wall_seconds"] = report.wall_seconds;
  return j;
}

std::string summary(const CampaignReport& report) {
  std::ostringstream os;
  os << report.name << ": " << (report.pass() ? "PASS" : "FAIL") << "\n";
  os << "  trials run:         " << report.trials_run << "\n";
  os << "  violations:         " << report.violations.size() << "\n";
  if (!report.histogram.empty()) {
    os << "  max observed roots: " << report.max_observed_roots << "\n";
    os << "  root histogram:    ";
    for (const auto& [roots, count] : report.histogram) os << " " << roots << ":" << count;
    os << "\n";
  }
  if (report.min_abs_determinant) os << "  min |det|:          " << *report.min_abs_determinant << "\n";
  if (report.min_relative_determinant) {
    os << "  min |det|/scale:    " << *report.min_relative_determinant << "\n";
  }
  os << "  wall time:          " << report.wall_seconds << " s\n";
  return os.str();
}

}  // namespace altkit
