#pragma once

// Randomized, seed-reproducible verification campaigns that pit the
// theoretical bounds against the numeric oracles.
//
// Each trial draws from its own engine seeded by (seed, trial index), so a
// report depends only on the config, never on thread count or scheduling.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "altkit/rootcount.h"
#include "altkit/systems.h"

namespace altkit {

struct CampaignConfig {
  FunctionSystemSpec spec = FunctionSystemSpec::power(0, 1);
  unsigned trials = 1000;
  std::uint64_t seed = 0;
  // Random coefficients p/q with p uniform in [-coeff_bound, coeff_bound] and
  // q uniform in [1, coeff_bound]; all-zero vectors are redrawn.
  long coeff_bound = 1000;
  // Used when the spec has no family bound.
  std::optional<unsigned> bound;
  // Power systems only: evaluate random multiples of sharpness_witness.
  std::optional<std::vector<Rational>> witness_roots;
  // Invertibility campaigns: nodes are drawn from this finite interval, which
  // must lie inside the spec interval. Defaults to default_node_range(spec).
  std::optional<Interval> node_range;
  std::optional<unsigned> node_count;
  double min_gap = 0.05;
  double rel_threshold = 1e-10;
  OracleOptions oracle;
  // 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;
};

// (lo, lo + 10) for power and custom systems, (lo, lo + 49) for the ln
// families, clipped to a finite spec upper end.
Interval default_node_range(const FunctionSystemSpec& spec);

struct Violation {
  unsigned trial = 0;
  nlohmann::json detail;
};

struct CampaignReport {
  std::string name;
  nlohmann::json config;
  std::vector<Violation> violations;  // ordered by trial
  unsigned trials_run = 0;
  unsigned max_observed_roots = 0;
  std::optional<double> min_abs_determinant;
  // min |det| / product of row max-norms over float-path trials.
  std::optional<double> min_relative_determinant;
  std::map<unsigned, unsigned> histogram;  // observed root count -> trials
  nlohmann::json details = nlohmann::json::object();
  double wall_seconds = 0;

  bool pass() const { return violations.empty(); }
};

CampaignReport run_root_bound_campaign(const CampaignConfig& cfg);
CampaignReport run_invertibility_campaign(const CampaignConfig& cfg);

enum class LemmaId {
  kLogDerivative1,   // D^(k+1)(x^k ln x) = k! / x
  kLogDerivative2,   // D^N(p ln x) = x^-N sum (-1)^(N-1+j) c_j a_j x^j, c_j > 0
  kLogDerivative3,   // D^k(x^k ln x) = k! ln x + C_k, C_k > 0
  kDerivativeRoots,  // roots(f) <= roots(f') + 1
  kAlternatingSigns, // sign of D^N(x^j ln x) is (-1)^(N-1+j)
};

LemmaId parse_lemma_id(const std::string& name);
std::string lemma_name(LemmaId id);

struct LemmaParams {
  unsigned kmax = 10;
  unsigned nmin = 2;
  unsigned nmax = 8;
  unsigned samples = 100;
  std::uint64_t seed = 0;
  OracleOptions oracle;
};

CampaignReport verify_lemma(LemmaId id, const LemmaParams& params = {});

// C_k for k = 1..kmax from C_1 = 1, C_(k+1) = (k+1) C_k + k!.
std::vector<Rational> log_derivative_constants(unsigned kmax);

// Engine for one trial of a campaign seeded with `seed`.
std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial);
Rational random_rational(std::mt19937_64& rng, long bound);
// Nonzero vector of random rationals.
std::vector<Rational> random_coefficients(std::mt19937_64& rng, std::size_t count, long bound);

nlohmann::json to_json(const CampaignConfig& cfg);
CampaignConfig campaign_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CampaignReport& report, bool include_wall_time = true);
// Multi-line plain-text summary.
std::string summary(const CampaignReport& report);

}  // namespace altkit
