#ifndef PML_ESTIMATION_HPP
#define PML_ESTIMATION_HPP

#include <cstdint>
#include <optional>

#include "pml/types.hpp"

namespace pml {

/// Empirical pmf count(x)/m.
Distribution estimate_distribution(const SampleSet& samples);

/// Sum_x |p(x) - q(x)|. Symmetric, in [0,2].
double l1_distance(const Distribution& p, const Distribution& q);

/// phi(p) = log((1-p)/p) / (1-2p) on (0, 0.5), extended by continuity to
/// phi(0.5) = 2. Decreasing; range (2, inf).
double phi(double p);

struct KappaResult {
  double value;
  bool exact;
};

/// kappa(P) = max_{A subset X} min{P(A), 1-P(A)}, in (0, 0.5].
/// Exhaustive over 2^(N-1) subsets for N <= 20; greedy largest-first
/// balancing partition above that (result flagged approximate).
KappaResult kappa(const Distribution& p);

/// As kappa() but throws if N > 20 instead of falling back to the heuristic.
double kappa_exact(const Distribution& p);

/// log(2^N - 2), computed without overflow for large N.
double log_two_pow_n_minus_2(std::size_t n);

/// Concentration bound on P{ ||P - Phat||_1 >= beta } after m samples:
/// (2^N - 2) exp(-m phi(kappa) beta^2 / 4), clamped to 1 from above.
/// Without kappa the distribution-independent relaxation phi >= 2 is used.
double weissman_bound(std::uint64_t m, std::size_t n, double beta,
                      std::optional<double> kappa_opt = std::nullopt);

/// Radius beta*(delta) = sqrt((2/m)(log(2^N - 2) - log delta)) such that the
/// true distribution lies within beta* of the estimate w.p. >= 1 - delta.
/// delta is clamped to (0, 1]; the radius is clamped to >= 0.
double beta_star(double delta, std::uint64_t m, std::size_t n);

/// Deterministic full-support sample from the l1-ball around the center.
Distribution sample_prior_in_ball(const UncertaintySet& set, std::uint64_t rng_seed);

}  // namespace pml

#endif  // PML_ESTIMATION_HPP
