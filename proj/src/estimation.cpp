#include "pml/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "pml/rng.hpp"

namespace pml {

Distribution estimate_distribution(const SampleSet& samples) {
  const std::uint64_t m = samples.total();
  if (m == 0) {
    throw std::invalid_argument("estimate_distribution: zero total count");
  }
  std::vector<double> probs(samples.counts.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    probs[i] = static_cast<double>(samples.counts[i]) / static_cast<double>(m);
  }
  return Distribution(std::move(probs));
}

double l1_distance(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("l1_distance: mismatched alphabets");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p(i) - q(i));
  return d;
}

double phi(double p) {
  if (!(p > 0.0) || p > 0.5) {
    throw std::domain_error("phi: argument must lie in (0, 0.5]");
  }
  if (p == 0.5) return 2.0;
  return std::log((1.0 - p) / p) / (1.0 - 2.0 * p);
}

namespace {

double balanced_partition_greedy(const Distribution& p) {
  std::vector<double> masses = p.probs();
  std::sort(masses.begin(), masses.end(), std::greater<>());
  double a = 0.0, b = 0.0;
  for (double m : masses) (a <= b ? a : b) += m;
  return std::min(a, 1.0 - a);
}

double balanced_partition_exact(const Distribution& p) {
  const std::size_t n = p.size();
  double best = 0.0;
  // Complement symmetry: restricting subsets to exclude the last symbol
  // covers every partition {A, A^c} exactly once.
  const std::uint32_t limit = 1u << (n - 1);
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    double sum = 0.0;
    for (std::uint32_t bits = mask; bits != 0; bits &= bits - 1) {
      sum += p(static_cast<std::size_t>(std::countr_zero(bits)));
    }
    best = std::max(best, std::min(sum, 1.0 - sum));
  }
  return best;
}

}  // namespace

KappaResult kappa(const Distribution& p) {
  if (p.size() <= 20) {
    return {balanced_partition_exact(p), true};
  }
  return {balanced_partition_greedy(p), false};
}

double kappa_exact(const Distribution& p) {
  if (p.size() > 20) {
    throw std::invalid_argument("kappa_exact: exact mode limited to N <= 20");
  }
  return balanced_partition_exact(p);
}

double log_two_pow_n_minus_2(std::size_t n) {
  if (n < 2) {
    throw std::invalid_argument("log_two_pow_n_minus_2: N must be >= 2");
  }
  const double nd = static_cast<double>(n);
  // log(2^N - 2) = N log 2 + log(1 - 2^(1-N)), stable for any N.
  return nd * std::log(2.0) + std::log1p(-std::exp2(1.0 - nd));
}

double weissman_bound(std::uint64_t m, std::size_t n, double beta,
                      std::optional<double> kappa_opt) {
  if (m == 0 || !(beta > 0.0)) {
    throw std::invalid_argument("weissman_bound: require m >= 1 and beta > 0");
  }
  const double rate = kappa_opt ? phi(*kappa_opt) : 2.0;
  const double log_bound = log_two_pow_n_minus_2(n) -
                           static_cast<double>(m) * rate * beta * beta / 4.0;
  return log_bound >= 0.0 ? 1.0 : std::exp(log_bound);
}

double beta_star(double delta, std::uint64_t m, std::size_t n) {
  if (!(delta > 0.0)) {
    throw std::domain_error("beta_star: delta must be positive");
  }
  if (m == 0 || n < 2) {
    throw std::invalid_argument("beta_star: require m >= 1 and N >= 2");
  }
  delta = std::min(delta, 1.0);
  const double gap = log_two_pow_n_minus_2(n) - std::log(delta);
  if (gap <= 0.0) return 0.0;
  return std::sqrt(2.0 * gap / static_cast<double>(m));
}

Distribution sample_prior_in_ball(const UncertaintySet& set, std::uint64_t rng_seed) {
  if (!set.center.full_support() || !set.feasible_for_bounds()) {
    throw std::domain_error("sample_prior_in_ball: infeasible set (beta >= 2 p_min)");
  }
  const std::size_t n = set.center.size();
  const double beta = set.radius_beta;
  if (beta == 0.0) return set.center;

  SplitMix64Rng rng(rng_seed);
  // Signed zero-sum perturbation with l1-norm uniform on [0, beta].
  std::vector<double> omega(n);
  double mean = 0.0;
  for (double& w : omega) {
    w = rng.gaussian();
    mean += w;
  }
  mean /= static_cast<double>(n);
  double norm = 0.0;
  for (double& w : omega) {
    w -= mean;
    norm += std::abs(w);
  }
  if (norm < 1e-30) return set.center;
  const double scale = beta * rng.uniform() / norm;

  std::vector<double> q(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    q[i] = std::max(set.center(i) + scale * omega[i], 1e-15);
    sum += q[i];
  }
  for (double& v : q) v /= sum;

  Distribution out(std::move(q));
  // Projection may have drifted outside the ball; contract toward the center.
  const double dist = l1_distance(out, set.center);
  if (dist > beta) {
    const double t = beta / dist;
    std::vector<double> mixed(n);
    for (std::size_t i = 0; i < n; ++i) {
      mixed[i] = (1.0 - t) * set.center(i) + t * out(i);
    }
    out = Distribution(std::move(mixed));
  }
  return out;
}

}  // namespace pml
