// altkit command-line front end.
//
// Exit status: 0 success, 1 a violation or failed verification, 2 malformed
// input. Everything is written to a buffer first so a failing command leaves
// nothing half-printed on stdout.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "altkit/altkit.h"

using namespace altkit;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kBadInput = 2;

// Inline JSON if it looks like JSON, otherwise a path to a JSON file.
nlohmann::json load_json(const std::string& arg, const char* what) {
  std::string text = arg;
  auto first = arg.find_first_not_of(" \t\n");
  if (first == std::string::npos || (arg[first] != '{' && arg[first] != '[')) {
    std::ifstream in(arg);
    if (!in) throw InvalidArgument(std::string("cannot read ") + what + " file '" + arg + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

std::vector<Rational> parse_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  if (out.empty()) throw InvalidArgument("expected a comma-separated list of numbers");
  return out;
}

struct Oracle {
  unsigned grid_points = OracleOptions{}.grid_points;
  double tol = OracleOptions{}.tol;
  std::optional<double> horizon;

  OracleOptions options() const {
    OracleOptions o;
    o.grid_points = grid_points;
    o.tol = tol;
    if (horizon) {
      o.horizon = *horizon;
    } else if (const char* env = std::getenv("ALTKIT_HORIZON")) {
      try {
        o.horizon = std::stod(env);
      } catch (const std::exception&) {
        throw InvalidArgument(std::string("ALTKIT_HORIZON='") + env + "' is not a number");
      }
    }
    return o;
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--grid-points", grid_points, "Oracle grid size")->capture_default_str();
    cmd->add_option("--tol", tol, "Oracle bisection tolerance")->capture_default_str();
    cmd->add_option("--horizon", horizon, "Oracle stand-in for +inf (env ALTKIT_HORIZON)");
  }
};

std::string matrix_text(const AlternantMatrix& a) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (j) os << '\t';
      if (a.exact()) {
        os << to_string(a.exact_entry(i, j));
      } else {
        os << a.entry(i, j);
      }
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"altkit: log-power function systems, root bounds and alternant matrices"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "Emit JSON instead of text");
  app.fallthrough();

  std::string spec_arg, nodes_arg, values_arg, coeffs_arg;
  double threshold = 1e-10;
  Oracle oracle;

  auto* basis_cmd = app.add_subcommand("basis", "List the basis functions of a system");
  basis_cmd->add_option("--spec", spec_arg, "System spec (inline JSON or file)")->required();

  auto* bound_cmd = app.add_subcommand("bound", "Theoretical root bound of a system");
  bound_cmd->add_option("--spec", spec_arg, "System spec (inline JSON or file)")->required();

  auto* roots_cmd = app.add_subcommand("member-roots", "Bound and count the roots of one member");
  roots_cmd->add_option("--spec", spec_arg, "System spec (inline JSON or file)")->required();
  roots_cmd->add_option("--coeffs", coeffs_arg, "Coefficients, comma separated")->required();
  unsigned max_depth = ChainOptions{}.max_depth;
  bool use_descartes = false;
  roots_cmd->add_option("--max-depth", max_depth, "Derivative chain depth")->capture_default_str();
  roots_cmd->add_flag("--descartes", use_descartes, "Sign variations at the chain's end");
  oracle.attach(roots_cmd);

  bool csv = false;
  auto* matrix_cmd = app.add_subcommand("matrix", "Build the alternant matrix");
  matrix_cmd->add_option("--spec", spec_arg, "System spec (inline JSON or file)")->required();
  matrix_cmd->add_option("--nodes", nodes_arg, "Nodes, comma separated")->required();
  matrix_cmd->add_flag("--csv", csv, "CSV output");

  auto* invert_cmd = app.add_subcommand("invert", "Invertibility verdict for an alternant matrix");
  invert_cmd->add_option("--spec", spec_arg, "System spec (inline JSON or file)")->required();
  invert_cmd->add_option("--nodes", nodes_arg, "Nodes, comma separated")->required();
  invert_cmd->add_option("--threshold", threshold, "Relative threshold")->capture_default_str();

  auto* interp_cmd = app.add_subcommand("interpolate", "Solve the interpolation problem");
  interp_cmd->add_option("--spec", spec_arg, "System spec (inline JSON or file)")->required();
  interp_cmd->add_option("--nodes", nodes_arg, "Nodes, comma separated")->required();
  interp_cmd->add_option("--values", values_arg, "Values, comma separated")->required();
  interp_cmd->add_option("--threshold", threshold, "Relative threshold")->capture_default_str();

  std::string f_arg, interval_arg;
  unsigned k = 0, n = 0, sweep_kmax = 0;
  std::optional<unsigned> m;
  bool same_sign = false;
  auto* certify_cmd = app.add_subcommand("certify", "Check k-compatibility of F with Pi_n");
  certify_cmd->add_option("--F", f_arg, "Expression F (inline JSON terms or file)")->required();
  auto* k_opt = certify_cmd->add_option("--k", k, "Derivative order");
  certify_cmd->add_option("--n", n, "Degree of q")->required();
  certify_cmd->add_option("--interval", interval_arg, "Interval as JSON, default [\"0\",\"inf\"]");
  certify_cmd->add_option("--m", m, "Polynomial degree m; also report the unisolvence bound");
  auto* sweep_opt = certify_cmd->add_option("--sweep-kmax", sweep_kmax, "Try k = 0..kmax");
  certify_cmd->add_flag("--descartes", same_sign, "Same-sign Descartes bound for l");
  k_opt->excludes(sweep_opt);

  std::string lemma;
  LemmaParams lemma_params;
  auto* verify_cmd = app.add_subcommand("verify", "Run a lemma suite");
  verify_cmd->add_option("--lemma", lemma, "log_derivative_1|log_derivative_2|log_derivative_3|"
                                           "derivative_roots|alternating_signs")
      ->required();
  verify_cmd->add_option("--kmax", lemma_params.kmax)->capture_default_str();
  verify_cmd->add_option("--nmin", lemma_params.nmin)->capture_default_str();
  verify_cmd->add_option("--nmax", lemma_params.nmax)->capture_default_str();
  verify_cmd->add_option("--samples", lemma_params.samples)->capture_default_str();
  verify_cmd->add_option("--seed", lemma_params.seed)->capture_default_str();
  oracle.attach(verify_cmd);

  std::string config_arg;
  std::optional<unsigned> threads;
  auto* campaign_cmd = app.add_subcommand("campaign", "Run a verification campaign");
  campaign_cmd->add_option("--config", config_arg, "Campaign config (inline JSON or file)")
      ->required();
  campaign_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  std::ostringstream out;
  int status = kOk;
  try {
    if (basis_cmd->parsed()) {
      auto spec = spec_from_json(load_json(spec_arg, "spec"));
      auto b = basis(spec);
      if (json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& f : b) arr.push_back({{"text", to_string(f)}, {"terms", to_json(f)}});
        out << nlohmann::json{{"spec", to_json(spec)}, {"basis", arr}}.dump(2) << '\n';
      } else {
        for (std::size_t j = 0; j < b.size(); ++j) out << "g" << j << " = " << to_string(b[j]) << '\n';
      }
    } else if (bound_cmd->parsed()) {
      auto spec = spec_from_json(load_json(spec_arg, "spec"));
      auto b = root_bound(spec);
      if (json) {
        out << nlohmann::json{{"spec", to_json(spec)},
                              {"bound", b ? nlohmann::json(*b) : nlohmann::json("unknown")},
                              {"reason", root_bound_reason(spec)}}
                   .dump(2)
            << '\n';
      } else {
        out << "bound: " << (b ? std::to_string(*b) : "unknown") << '\n'
            << "reason: " << root_bound_reason(spec) << '\n';
      }
    } else if (roots_cmd->parsed()) {
      auto spec = spec_from_json(load_json(spec_arg, "spec"));
      auto f = member(spec, parse_list(coeffs_arg));
      if (f.is_zero()) throw InvalidArgument("the zero member has infinitely many roots");
      ChainOptions chain;
      chain.max_depth = max_depth;
      chain.use_descartes = use_descartes;
      auto rep = count_roots(f, spec.interval(), chain, oracle.options());
      // The family bound caps whatever the chain found.
      if (auto fb = root_bound(spec); fb && (!rep.bound || *fb < *rep.bound)) rep.bound = fb;
      if (json) {
        out << to_json(rep).dump(2) << '\n';
      } else {
        out << "f = " << to_string(f) << '\n' << "interval: " << to_string(spec.interval()) << '\n'
            << "bound: " << (rep.bound ? std::to_string(*rep.bound) : "unknown") << '\n';
        for (const auto& s : rep.bound_chain) out << "  D^" << s.order << ": " << s.reason << '\n';
        out << "observed: " << rep.observed << '\n';
        out.precision(12);
        for (const auto& r : rep.observed_roots) out << "  root in [" << r.lo << ", " << r.hi << "]\n";
      }
      if (!rep.consistent()) status = kViolation;
    } else if (matrix_cmd->parsed()) {
      auto spec = spec_from_json(load_json(spec_arg, "spec"));
      auto a = build_matrix(spec, parse_list(nodes_arg));
      if (json) {
        out << to_json(a).dump(2) << '\n';
      } else if (csv) {
        out << to_csv(a);
      } else {
        out << matrix_text(a);
      }
    } else if (invert_cmd->parsed()) {
      auto spec = spec_from_json(load_json(spec_arg, "spec"));
      auto v = is_invertible(build_matrix(spec, parse_list(nodes_arg)), threshold);
      if (json) {
        out << to_json(v).dump(2) << '\n';
      } else {
        out.precision(17);
        out << "invertible: " << (v.invertible ? "true" : "false") << '\n' << "det: ";
        if (v.determinant.exact) {
          out << to_string(*v.determinant.exact);
        } else {
          out << v.determinant.value;
        }
        out << '\n' << "method: " << v.method << '\n';
        if (v.method != "exact") out << "threshold: " << v.threshold << '\n';
        if (v.condition_estimate) out << "condition: " << *v.condition_estimate << '\n';
      }
    } else if (interp_cmd->parsed()) {
      auto spec = spec_from_json(load_json(spec_arg, "spec"));
      auto p = solve_interpolation(spec, parse_list(nodes_arg), parse_list(values_arg), threshold);
      if (json) {
        out << to_json(p).dump(2) << '\n';
      } else {
        out.precision(17);
        out << "coefficients:";
        if (p.exact_coeffs) {
          for (const auto& c : *p.exact_coeffs) out << ' ' << to_string(c);
        } else {
          for (double c : p.coeffs) out << ' ' << c;
        }
        out << '\n' << "residual: " << p.residual << '\n';
        if (p.exact) out << "f = " << to_string(p.expr) << '\n';
      }
    } else if (certify_cmd->parsed()) {
      auto F = expr_from_json(load_json(f_arg, "F"));
      Interval iv = interval_arg.empty() ? Interval::positive_reals()
                                         : interval_from_json(load_json(interval_arg, "interval"));
      CompatibilityOptions opts;
      opts.same_sign_descartes = same_sign;
      std::vector<unsigned> ks;
      if (*sweep_opt) {
        for (unsigned kk = 0; kk <= sweep_kmax; ++kk) ks.push_back(kk);
      } else if (*k_opt) {
        ks.push_back(k);
      } else {
        throw InvalidArgument("certify needs --k or --sweep-kmax");
      }
      nlohmann::json results = nlohmann::json::array();
      bool any = false;
      for (unsigned kk : ks) {
        auto r = check_compatibility(F, kk, n, iv, opts);
        nlohmann::json entry{{"k", kk}, {"compatible", static_cast<bool>(r)}};
        if (r) {
          any = true;
          entry["certificate"] = to_json(*r.certificate);
          if (m && kk > *m) entry["unisolvence"] = to_json(unisolvence_bound(*m, n, kk, r.certificate->l));
        } else {
          entry["failure"] = r.failure;
        }
        if (!json) {
          out << "k=" << kk << ": ";
          if (r) {
            out << "compatible, F~ = " << to_string(r.certificate->tilde_F) << ", l = " << r.certificate->l;
            if (entry.contains("unisolvence")) {
              out << ", bound k+l = " << entry["unisolvence"]["bound"]
                  << (entry["unisolvence"]["unisolvent"].get<bool>() ? " (unisolvent)" : " (not unisolvent)");
            }
            out << '\n';
            for (const auto& p : r.certificate->probes) {
              out << "  t=" << p.t << ": D^" << kk << "(F x^" << p.t << ") = " << to_string(p.derivative)
                  << "  q~ = " << to_string(LogPowExpr::polynomial(p.quotient)) << '\n';
            }
          } else {
            out << "no: " << r.failure << '\n';
          }
        }
        results.push_back(std::move(entry));
      }
      if (json) {
        out << nlohmann::json{{"F", to_json(F)}, {"n", n}, {"interval", to_json(iv)}, {"results", results}}.dump(2)
            << '\n';
      }
      if (!any) status = kViolation;
    } else if (verify_cmd->parsed()) {
      lemma_params.oracle = oracle.options();
      auto report = verify_lemma(parse_lemma_id(lemma), lemma_params);
      out << (json ? to_json(report).dump(2) + "\n" : summary(report));
      if (!report.pass()) status = kViolation;
    } else if (campaign_cmd->parsed()) {
      auto j = load_json(config_arg, "config");
      auto cfg = campaign_config_from_json(j);
      if (threads) cfg.threads = *threads;
      if (!j.contains("horizon") && std::getenv("ALTKIT_HORIZON")) {
        cfg.oracle.horizon = Oracle{}.options().horizon;
      }
      std::string kind = j.value("campaign", std::string("roots"));
      CampaignReport report;
      if (kind == "roots") {
        report = run_root_bound_campaign(cfg);
      } else if (kind == "invertibility") {
        report = run_invertibility_campaign(cfg);
      } else {
        throw InvalidArgument("unknown campaign '" + kind + "' (roots or invertibility)");
      }
      out << (json ? to_json(report).dump(2) + "\n" : summary(report));
      if (!report.pass()) status = kViolation;
    }
  } catch (const VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kViolation;
  } catch (const SingularMatrix& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kViolation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  std::cout << out.str();
  return status;
}
