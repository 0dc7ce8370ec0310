// pml: command-line front end for the leakage assessment library.
//
// Exit codes: 0 success, 2 input error, 3 infeasible request, 4 numeric
// failure. Epsilon-valued flags accept raw nats ("0.693") or "logK"
// ("log2", "log5") to avoid transcribing logarithms by hand.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pml/additive.hpp"
#include "pml/design.hpp"
#include "pml/estimation.hpp"
#include "pml/experiments.hpp"
#include "pml/io.hpp"
#include "pml/leakage.hpp"
#include "pml/types.hpp"

namespace {

using nlohmann::json;

double parse_eps(const std::string& text) {
  if (text.rfind("log", 0) == 0) {
    const std::string arg = text.substr(3);
    std::size_t used = 0;
    const double k = std::stod(arg, &used);
    if (used != arg.size() || !(k > 0.0)) {
      throw std::invalid_argument("cannot parse epsilon literal '" + text + "'");
    }
    return std::log(k);
  }
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) {
    throw std::invalid_argument("cannot parse epsilon value '" + text + "'");
  }
  return v;
}

std::string join_path(const std::string& dir, const std::string& path) {
  if (dir.empty() || path.empty() || path.front() == '/') return path;
  return dir.back() == '/' ? dir + path : dir + "/" + path;
}

void emit(const std::string& out_path, const std::string& out_dir,
          const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    pml::write_file_atomic(join_path(out_dir, out_path), content);
  }
}

struct GlobalFlags {
  std::uint64_t seed = 0;
  int threads = 1;  // accepted for interface stability; compute is sequential
  std::string out_dir;
};

int cmd_estimate(const std::string& input, const std::string& column,
                 const std::string& positive_label, double delta,
                 const std::string& out, const GlobalFlags& g) {
  if (!(delta > 0.0) || delta > 1.0) {
    throw std::invalid_argument("--delta must lie in (0, 1]");
  }
  const pml::BinaryColumn col = pml::ingest_csv(input, column, positive_label);
  std::uint64_t minus = 0;
  for (int v : col.values) minus += (v < 0);
  const std::uint64_t m = col.values.size();
  const pml::SampleSet samples{{minus, m - minus}};
  const pml::Distribution dist = pml::estimate_distribution(samples);

  json j;
  j["distribution"] = {{"probs", dist.probs()}};
  j["labels"] = {"-1", "+1"};
  j["m"] = m;
  j["delta"] = delta;
  j["beta_star"] = pml::beta_star(delta, m, 2);
  emit(out, g.out_dir, j.dump(2) + "\n");
  return 0;
}

int cmd_assess(const std::string& mech_path, const std::string& dist_path,
               std::optional<double> beta, std::size_t samples,
               const GlobalFlags& g) {
  const pml::Mechanism mech = pml::mechanism_from_json(pml::read_file(mech_path));
  const pml::Distribution dist =
      pml::distribution_from_json(pml::read_file(dist_path));
  const pml::LeakageProfile profile = pml::pml_per_outcome(mech, dist);

  json j;
  j["eps_min"] = profile.eps_min;
  j["per_outcome"] = profile.per_outcome;
  j["output_indices"] = profile.output_indices;
  j["excluded_outcomes"] = profile.excluded_outcomes;
  j["eps_max"] = pml::eps_max(dist);
  if (beta) {
    const pml::UncertaintySet set(dist, *beta);
    const int region = pml::privacy_region(profile.eps_min, dist);
    j["beta"] = *beta;
    j["privacy_region"] = region;
    j["sensitivity_bound"] =
        pml::l1_sensitivity_bound(profile.eps_min, *beta, region, dist.min_mass());
    j["ball_bound"] = pml::leakage_bound_in_ball(profile.eps_min, *beta);
    j["capacity_lower_bound"] =
        pml::leakage_capacity(mech, set, samples, g.seed);
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_design(const std::string& dist_path, double beta, const std::string& eps_text,
               const std::string& mode, const std::string& out, const GlobalFlags& g) {
  const double eps = parse_eps(eps_text);
  const pml::Distribution est =
      pml::distribution_from_json(pml::read_file(dist_path));

  pml::DesignResult result{pml::Mechanism::identity(est.size()), eps, beta,
                           pml::eps_prime_transform(eps, beta), ""};
  if (mode == "closed_form") {
    if (est.size() != 2) {
      throw std::invalid_argument("closed_form mode requires a binary estimate");
    }
    result.mechanism = pml::optimal_binary_mechanism(est(0), beta, eps);
    result.path = "closed_form";
    // The ball of binary priors is an interval and per-outcome leakage is
    // monotone along it, so checking both endpoints certifies the whole ball.
    for (double s : {-1.0, 1.0}) {
      const double p = est(0) + s * beta / 2.0;
      const pml::Distribution endpoint({p, 1.0 - p});
      if (pml::eps_min(result.mechanism, endpoint) > eps + 1e-9) {
        throw std::domain_error("closed-form mechanism failed ball re-validation");
      }
    }
  } else if (mode == "vertex" || mode == "fixed_estimate") {
    const pml::DesignProblem problem(est, beta, eps);
    if (mode == "vertex") {
      const pml::ConstraintSet cs = pml::lccp_constraints(problem);
      result.mechanism = pml::vertex_search(cs, problem.utility_fn(), est);
      result.path = "vertex";
    } else {
      result = pml::design_via_fixed_estimate(problem);
      result.eps = eps;
      result.beta = beta;
      result.eps_prime = pml::eps_prime_transform(eps, beta);
    }
    // Certify before writing, independent of the construction path.
    const pml::MembershipResult check =
        pml::membership_check(result.mechanism, problem);
    if (!check.member) {
      throw std::domain_error("designed mechanism failed membership re-validation");
    }
  } else {
    throw std::invalid_argument("--mode must be closed_form, vertex or fixed_estimate");
  }
  emit(out, g.out_dir, pml::design_result_to_json(result));
  return 0;
}

int cmd_noise_laplace(const std::string& eps_text, double delta, std::uint64_t m,
                      double p_min_hat, std::optional<double> scale_b,
                      const std::string& out, const GlobalFlags& g) {
  const double eps = parse_eps(eps_text);
  json j;
  j["delta"] = delta;
  j["m"] = m;
  j["p_min_hat"] = p_min_hat;
  if (scale_b) {
    j["b"] = *scale_b;
    j["eps"] = pml::laplace_eps_with_uncertainty(*scale_b, p_min_hat, delta, m);
  } else {
    j["eps"] = eps;
    j["b"] = pml::laplace_scale_for_target(eps, delta, m, p_min_hat);
  }
  emit(out, g.out_dir, j.dump(2) + "\n");
  return 0;
}

int cmd_noise_gauss(double sigma, std::uint64_t m, double delta2, double p_hat,
                    const std::vector<std::string>& eps_texts, const std::string& out,
                    const GlobalFlags& g) {
  pml::GaussianCurveConfig cfg;
  cfg.sigmas = {sigma};
  cfg.m_grid = {m};
  cfg.delta2 = delta2;
  cfg.p_hat = p_hat;
  if (eps_texts.empty()) {
    for (int t = 1; t <= 20; ++t) cfg.eps_grid.push_back(0.05 * t);
  } else {
    for (const std::string& e : eps_texts) cfg.eps_grid.push_back(parse_eps(e));
  }
  const auto curves = pml::run_gaussian_curves(cfg);
  emit(out, g.out_dir, pml::format_curve_csv(curves.front().pml));
  if (!curves.front().infeasible_eps.empty()) {
    std::cerr << "warning: " << curves.front().infeasible_eps.size()
              << " grid points infeasible (beta* e^eps / 2 >= 1)\n";
  }
  return 0;
}

int cmd_tradeoff(const std::string& eps_text, std::size_t n,
                 const std::vector<std::uint64_t>& ms,
                 const std::vector<std::string>& eps_prime_texts,
                 std::optional<double> delta, const std::string& out,
                 const GlobalFlags& g) {
  const double eps = parse_eps(eps_text);
  if (delta) {
    json j;
    j["eps"] = eps;
    j["delta"] = *delta;
    j["results"] = json::array();
    for (std::uint64_t m : ms) {
      j["results"].push_back(
          {{"m", m}, {"eps_prime", pml::eps_prime_of_delta(eps, *delta, m, n)}});
    }
    emit(out, g.out_dir, j.dump(2) + "\n");
    return 0;
  }
  std::vector<double> eps_primes;
  if (eps_prime_texts.empty()) {
    for (int t = 1; t <= 100; ++t) eps_primes.push_back(eps + 0.005 * t);
  } else {
    for (const std::string& e : eps_prime_texts) eps_primes.push_back(parse_eps(e));
  }
  std::string csv = "m,eps_prime,delta_min\n";
  char buf[96];
  for (std::uint64_t m : ms) {
    for (double ep : eps_primes) {
      std::snprintf(buf, sizeof(buf), "%llu,%.17g,%.17g\n",
                    static_cast<unsigned long long>(m), ep,
                    pml::delta_min_of_eps_prime(eps, ep, m, n));
      csv += buf;
    }
  }
  emit(out, g.out_dir, csv);
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out,
                 const GlobalFlags& g) {
  const json cfg_json = json::parse(pml::read_file(config_path));
  pml::ExperimentConfig cfg;
  cfg.seed = cfg_json.value("seed", g.seed);
  cfg.delta = cfg_json.value("delta", 1e-9);
  cfg.iterations = cfg_json.value("iterations", std::size_t{100});
  for (const auto& m : cfg_json.at("m_grid")) cfg.m_grid.push_back(m.get<std::uint64_t>());
  for (const auto& e : cfg_json.at("eps_grid")) {
    cfg.eps_grid.push_back(e.is_string() ? parse_eps(e.get<std::string>())
                                         : e.get<double>());
  }

  pml::BinaryColumn data;
  const json& src = cfg_json.at("source");
  if (src.contains("csv")) {
    data = pml::ingest_csv(src.at("csv").get<std::string>(),
                           src.at("column").get<std::string>(),
                           src.at("positive_label").get<std::string>());
  } else {
    data = pml::synth_binary_source(src.at("p").get<double>(),
                                    src.at("rows").get<std::size_t>(),
                                    src.value("seed", cfg.seed));
  }
  const auto cells = pml::run_laplace_experiment(data, cfg);
  emit(out, g.out_dir, pml::format_result_csv(cells));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pointwise-maximal-leakage assessment and mechanism design"};
  app.require_subcommand(1);
  GlobalFlags g;
  app.add_option("--seed", g.seed, "Base RNG seed (default 0)");
  app.add_option("--threads", g.threads, "Worker threads (currently sequential)");
  app.add_option("--out-dir", g.out_dir, "Directory prefix for relative outputs");

  // estimate
  std::string est_input, est_column, est_positive, est_out;
  double est_delta = 1e-6;
  auto* est = app.add_subcommand("estimate", "Empirical pmf + l1 radius from CSV");
  est->add_option("--input", est_input, "CSV file with header row")->required();
  est->add_option("--column", est_column, "Column to read")->required();
  est->add_option("--positive-label", est_positive, "Value mapped to +1")->required();
  est->add_option("--delta", est_delta, "Confidence failure probability, (0,1]");
  est->add_option("--out", est_out, "Output JSON path (stdout if omitted)");

  // assess
  std::string as_mech, as_dist;
  double as_beta_val = -1.0;
  std::size_t as_samples = 1000;
  auto* assess = app.add_subcommand("assess", "Leakage profile and ball bounds");
  assess->add_option("--mechanism", as_mech, "Mechanism JSON")->required();
  assess->add_option("--dist", as_dist, "Prior distribution JSON")->required();
  auto* as_beta_opt = assess->add_option("--beta", as_beta_val, "l1 ball radius");
  assess->add_option("--samples", as_samples, "Sampled priors for capacity bound");

  // design
  std::string de_dist, de_eps, de_mode = "fixed_estimate", de_out;
  double de_beta = 0.0;
  auto* design = app.add_subcommand("design", "Mechanism design for an l1 ball");
  design->add_option("--dist", de_dist, "Estimate JSON")->required();
  design->add_option("--beta", de_beta, "l1 ball radius")->required();
  design->add_option("--eps", de_eps, "Target leakage (nats or logK)")->required();
  design->add_option("--mode", de_mode, "closed_form | vertex | fixed_estimate");
  design->add_option("--out", de_out, "Mechanism JSON path (stdout if omitted)");

  // noise laplace | gauss
  auto* noise = app.add_subcommand("noise", "Additive noise calibration");
  noise->require_subcommand(1);
  std::string nl_eps = "1", nl_out;
  double nl_delta = 0.0, nl_pmin = 0.5, nl_b_val = -1.0;
  std::uint64_t nl_m = 0;
  auto* nlap = noise->add_subcommand("laplace", "Binary Laplace mechanism");
  nlap->add_option("--eps", nl_eps, "Target leakage (nats or logK)");
  nlap->add_option("--delta", nl_delta, "Estimation failure probability (0 = LDP)");
  nlap->add_option("--m", nl_m, "Sample count behind the estimate");
  nlap->add_option("--p-min", nl_pmin, "Estimated smaller symbol mass");
  auto* nl_b_opt = nlap->add_option("--b", nl_b_val, "Report eps for this scale");
  nlap->add_option("--out", nl_out, "Output JSON path (stdout if omitted)");

  std::string ng_out;
  double ng_sigma = 1.0, ng_delta2 = 1e-6, ng_phat = 0.5;
  std::uint64_t ng_m = 1000;
  std::vector<std::string> ng_eps;
  auto* ngau = noise->add_subcommand("gauss", "Binary Gaussian tradeoff curve");
  ngau->add_option("--sigma", ng_sigma, "Noise standard deviation")->required();
  ngau->add_option("--m", ng_m, "Sample count behind the estimate");
  ngau->add_option("--delta2", ng_delta2, "Estimation failure probability");
  ngau->add_option("--p-hat", ng_phat, "Estimated mass of -1");
  ngau->add_option("--eps", ng_eps, "Design eps grid (repeatable; nats or logK)");
  ngau->add_option("--out", ng_out, "Curve CSV path (stdout if omitted)");

  // tradeoff
  std::string tr_eps, tr_out;
  std::size_t tr_n = 2;
  std::vector<std::uint64_t> tr_ms;
  std::vector<std::string> tr_eps_primes;
  double tr_delta_val = -1.0;
  auto* tradeoff = app.add_subcommand("tradeoff", "delta_min(eps') curves");
  tradeoff->add_option("--eps", tr_eps, "Base leakage (nats or logK)")->required();
  tradeoff->add_option("--n", tr_n, "Alphabet size")->required();
  tradeoff->add_option("--m", tr_ms, "Sample counts (repeatable)")->required();
  tradeoff->add_option("--eps-prime", tr_eps_primes, "eps' grid (repeatable)");
  auto* tr_delta_opt =
      tradeoff->add_option("--delta", tr_delta_val, "Solve eps'(delta) instead");
  tradeoff->add_option("--out", tr_out, "CSV/JSON path (stdout if omitted)");

  // simulate
  std::string si_config, si_out;
  auto* simulate = app.add_subcommand("simulate", "Shuffle/perturb/decode experiment");
  simulate->add_option("--config", si_config, "Experiment config JSON")->required();
  simulate->add_option("--out", si_out, "Result CSV path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (est->parsed()) {
      return cmd_estimate(est_input, est_column, est_positive, est_delta, est_out, g);
    }
    if (assess->parsed()) {
      std::optional<double> beta;
      if (as_beta_opt->count() > 0) beta = as_beta_val;
      return cmd_assess(as_mech, as_dist, beta, as_samples, g);
    }
    if (design->parsed()) {
      return cmd_design(de_dist, de_beta, de_eps, de_mode, de_out, g);
    }
    if (nlap->parsed()) {
      std::optional<double> b;
      if (nl_b_opt->count() > 0) b = nl_b_val;
      return cmd_noise_laplace(nl_eps, nl_delta, nl_m, nl_pmin, b, nl_out, g);
    }
    if (ngau->parsed()) {
      return cmd_noise_gauss(ng_sigma, ng_m, ng_delta2, ng_phat, ng_eps, ng_out, g);
    }
    if (tradeoff->parsed()) {
      std::optional<double> delta;
      if (tr_delta_opt->count() > 0) delta = tr_delta_val;
      return cmd_tradeoff(tr_eps, tr_n, tr_ms, tr_eps_primes, delta, tr_out, g);
    }
    if (simulate->parsed()) {
      return cmd_simulate(si_config, si_out, g);
    }
  } catch (const std::domain_error& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
