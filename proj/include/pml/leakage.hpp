#ifndef PML_LEAKAGE_HPP
#define PML_LEAKAGE_HPP

#include <cstdint>
#include <vector>

#include "pml/types.hpp"

namespace pml {

/// Pointwise leakage of every outcome with positive output mass, in nats.
struct LeakageProfile {
  /// l(X -> y_j) for outcomes in supp(P_Y), aligned with output_indices.
  std::vector<double> per_outcome;
  /// Output indices carrying positive mass, ascending.
  std::vector<std::size_t> output_indices;
  /// Outcomes with P_Y(y) = 0 under the given prior, excluded from eps_min.
  std::vector<std::size_t> excluded_outcomes;
  std::vector<double> output_dist;
  double eps_min = 0.0;
};

/// l(X -> y) = log(max_x p_xy / P_Y(y)) per outcome; eps_min is the max over
/// the support of P_Y.
LeakageProfile pml_per_outcome(const Mechanism& mech, const Distribution& prior);

double eps_min(const Mechanism& mech, const Distribution& prior);

/// -log min_x prior(x). Every mechanism satisfies eps_max-PML.
double eps_max(const Distribution& prior);

/// Index k of the privacy region containing eps, i.e. eps in
/// [eps_{k-1}, eps_k) with eps_k = -log(sum of the N-k largest masses).
int privacy_region(double eps, const Distribution& prior);

/// Sampling lower bound on the supremum of eps_min over the set. Pairs with
/// l1_sensitivity_bound for a certified upper bound.
double leakage_capacity(const Mechanism& mech, const UncertaintySet& set,
                        std::size_t n_samples, std::uint64_t seed);

/// Prior in the ball moving -beta/2 onto the largest entry of column j and
/// +beta/2 onto the smallest (ties to the lowest index).
Distribution worst_case_prior(const Mechanism& mech, const Distribution& center,
                              double beta, std::size_t outcome_j);

/// Upper bound on the leakage sensitivity over an l1-ball:
///   k  = 1: -log(1 - (beta/2)(e^eps - 1)/p_min)
///   k  > 1: -log(1 - beta e^eps / 2)
double l1_sensitivity_bound(double eps, double beta, int region_k, double p_min);

/// Certified bound eps + log(1/(1 - e^eps beta/2)) on eps_min over the ball,
/// valid for any mechanism satisfying eps-PML at the center.
double leakage_bound_in_ball(double eps, double beta);

/// exp(C) * ||p - q||_1 with C = eps_min(center) + sensitivity bound.
double lipschitz_bound(const Mechanism& mech, const UncertaintySet& set,
                       const Distribution& p, const Distribution& q);

/// eps + log(1/(1 - beta*(delta) e^eps / 2)): leakage level holding with
/// probability 1 - delta after estimating from m samples.
double eps_prime_of_delta(double eps, double delta, std::uint64_t m, std::size_t n);

/// min(1, (2^N - 2) exp(-2m (e^-eps - e^-eps')^2)) for eps' > eps.
double delta_min_of_eps_prime(double eps, double eps_prime, std::uint64_t m,
                              std::size_t n);

struct ConvexityReport {
  double max_eps_min_violation = 0.0;
  double max_per_outcome_violation = 0.0;
};

/// Checks eps_min(lambda p + (1-lambda) q) <= lambda eps_min(p) +
/// (1-lambda) eps_min(q) on the given lambda grid; returns max violations.
ConvexityReport convexity_audit(const Mechanism& mech, const Distribution& p,
                                const Distribution& q,
                                const std::vector<double>& lambdas);

}  // namespace pml

#endif  // PML_LEAKAGE_HPP
