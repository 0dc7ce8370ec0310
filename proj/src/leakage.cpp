#include "pml/leakage.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pml/estimation.hpp"
#include "pml/rng.hpp"

namespace pml {

LeakageProfile pml_per_outcome(const Mechanism& mech, const Distribution& prior) {
  if (!prior.full_support()) {
    throw std::invalid_argument("pml_per_outcome: prior must have full support");
  }
  LeakageProfile profile;
  profile.output_dist = mech.output_dist(prior);
  for (std::size_t j = 0; j < mech.num_outputs(); ++j) {
    const double py = profile.output_dist[j];
    if (py < kMassFloor) {
      profile.excluded_outcomes.push_back(j);
      continue;
    }
    double col_max = 0.0;
    for (std::size_t i = 0; i < mech.num_inputs(); ++i) {
      col_max = std::max(col_max, mech(i, j));
    }
    profile.output_indices.push_back(j);
    profile.per_outcome.push_back(std::log(col_max / py));
  }
  if (profile.per_outcome.empty()) {
    throw std::invalid_argument("pml_per_outcome: output distribution has empty support");
  }
  profile.eps_min =
      *std::max_element(profile.per_outcome.begin(), profile.per_outcome.end());
  return profile;
}

double eps_min(const Mechanism& mech, const Distribution& prior) {
  return pml_per_outcome(mech, prior).eps_min;
}

double eps_max(const Distribution& prior) {
  const double pmin = prior.min_mass();
  if (pmin <= 0.0) {
    throw std::domain_error("eps_max: prior has a zero-mass symbol");
  }
  return -std::log(pmin);
}

int privacy_region(double eps, const Distribution& prior) {
  const double emax = eps_max(prior);
  if (eps < 0.0 || eps >= emax) {
    throw std::domain_error("privacy_region: eps must lie in [0, eps_max)");
  }
  std::vector<double> sorted = prior.probs();
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const std::size_t n = sorted.size();
  double head = std::accumulate(sorted.begin(), sorted.end(), 0.0);
  // eps_k = -log(sum of the N-k largest masses); eps_0 = 0.
  for (std::size_t k = 1; k + 1 <= n; ++k) {
    head -= sorted[n - k];
    const double eps_k = -std::log(head);
    if (eps < eps_k) return static_cast<int>(k);
  }
  // eps in [eps_{N-1}, eps_max): region N, up to N-1 zeros per column.
  return static_cast<int>(n);
}

Distribution worst_case_prior(const Mechanism& mech, const Distribution& center,
                              double beta, std::size_t outcome_j) {
  if (outcome_j >= mech.num_outputs()) {
    throw std::invalid_argument("worst_case_prior: outcome index out of range");
  }
  if (!(beta < 2.0 * center.min_mass())) {
    throw std::domain_error("worst_case_prior: infeasible beta (>= 2 p_min)");
  }
  std::size_t arg_max = 0, arg_min = 0;
  for (std::size_t i = 1; i < mech.num_inputs(); ++i) {
    if (mech(i, outcome_j) > mech(arg_max, outcome_j)) arg_max = i;
    if (mech(i, outcome_j) < mech(arg_min, outcome_j)) arg_min = i;
  }
  std::vector<double> q = center.probs();
  q[arg_max] -= beta / 2.0;
  q[arg_min] += beta / 2.0;
  return Distribution(std::move(q));
}

double leakage_capacity(const Mechanism& mech, const UncertaintySet& set,
                        std::size_t n_samples, std::uint64_t seed) {
  if (!set.feasible_for_bounds()) {
    throw std::domain_error("leakage_capacity: infeasible uncertainty set");
  }
  double best = eps_min(mech, set.center);
  if (set.radius_beta == 0.0) return best;
  for (std::size_t j = 0; j < mech.num_outputs(); ++j) {
    const Distribution q = worst_case_prior(mech, set.center, set.radius_beta, j);
    if (q.full_support()) best = std::max(best, eps_min(mech, q));
  }
  for (std::size_t s = 0; s < n_samples; ++s) {
    SplitMix64Rng sub = SplitMix64Rng::substream(seed, s);
    const Distribution q = sample_prior_in_ball(set, sub.next_u64());
    best = std::max(best, eps_min(mech, q));
  }
  return best;
}

double l1_sensitivity_bound(double eps, double beta, int region_k, double p_min) {
  if (!(beta >= 0.0) || !(beta < 2.0 * p_min)) {
    throw std::domain_error("l1_sensitivity_bound: require 0 <= beta < 2 p_min");
  }
  const double arg = region_k == 1
                         ? 1.0 - (beta / 2.0) * (std::exp(eps) - 1.0) / p_min
                         : 1.0 - beta * std::exp(eps) / 2.0;
  if (!(arg > 0.0)) {
    throw std::domain_error("l1_sensitivity_bound: vacuous bound (log argument <= 0)");
  }
  return -std::log(arg);
}

double leakage_bound_in_ball(double eps, double beta) {
  const double arg = 1.0 - std::exp(eps) * beta / 2.0;
  if (!(arg > 0.0)) {
    throw std::domain_error("leakage_bound_in_ball: require beta < 2 exp(-eps)");
  }
  return eps - std::log(arg);
}

double lipschitz_bound(const Mechanism& mech, const UncertaintySet& set,
                       const Distribution& p, const Distribution& q) {
  const double beta = set.radius_beta;
  if (l1_distance(p, set.center) > beta + kProbTol ||
      l1_distance(q, set.center) > beta + kProbTol) {
    throw std::invalid_argument("lipschitz_bound: distribution outside the set");
  }
  const double eps_center = eps_min(mech, set.center);
  double capacity_bound = eps_center;
  if (beta > 0.0) {
    const int k = privacy_region(std::min(eps_center, eps_max(set.center) * (1.0 - 1e-15)),
                                 set.center);
    capacity_bound += l1_sensitivity_bound(eps_center, beta, k, set.center.min_mass());
  }
  return std::exp(capacity_bound) * l1_distance(p, q);
}

double eps_prime_of_delta(double eps, double delta, std::uint64_t m, std::size_t n) {
  const double beta = beta_star(delta, m, n);
  const double arg = 1.0 - beta * std::exp(eps) / 2.0;
  if (!(arg > 0.0)) {
    throw std::domain_error(
        "eps_prime_of_delta: insufficient samples for this (eps, delta)");
  }
  return eps - std::log(arg);
}

double delta_min_of_eps_prime(double eps, double eps_prime, std::uint64_t m,
                              std::size_t n) {
  if (!(eps_prime > eps)) {
    throw std::domain_error("delta_min_of_eps_prime: require eps' > eps");
  }
  const double gap = std::exp(-eps) - std::exp(-eps_prime);
  const double log_delta =
      log_two_pow_n_minus_2(n) - 2.0 * static_cast<double>(m) * gap * gap;
  return log_delta >= 0.0 ? 1.0 : std::exp(log_delta);
}

ConvexityReport convexity_audit(const Mechanism& mech, const Distribution& p,
                                const Distribution& q,
                                const std::vector<double>& lambdas) {
  ConvexityReport report;
  const LeakageProfile prof_p = pml_per_outcome(mech, p);
  const LeakageProfile prof_q = pml_per_outcome(mech, q);
  for (double lambda : lambdas) {
    std::vector<double> mix(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      mix[i] = lambda * p(i) + (1.0 - lambda) * q(i);
    }
    const LeakageProfile prof_mix = pml_per_outcome(mech, Distribution(std::move(mix)));
    const double chord = lambda * prof_p.eps_min + (1.0 - lambda) * prof_q.eps_min;
    report.max_eps_min_violation =
        std::max(report.max_eps_min_violation, prof_mix.eps_min - chord);
    // Full-support endpoints share the mixture's output support, so the
    // per-outcome vectors are index-aligned.
    if (prof_mix.output_indices == prof_p.output_indices &&
        prof_mix.output_indices == prof_q.output_indices) {
      for (std::size_t t = 0; t < prof_mix.per_outcome.size(); ++t) {
        const double outcome_chord =
            lambda * prof_p.per_outcome[t] + (1.0 - lambda) * prof_q.per_outcome[t];
        report.max_per_outcome_violation = std::max(
            report.max_per_outcome_violation, prof_mix.per_outcome[t] - outcome_chord);
      }
    }
  }
  return report;
}

}  // namespace pml
