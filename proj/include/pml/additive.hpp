#ifndef PML_ADDITIVE_HPP
#define PML_ADDITIVE_HPP

#include <cstdint>
#include <vector>

#include "pml/types.hpp"

namespace pml {

/// Additive Laplace noise on data alphabet {-1, +1}.
struct LaplaceSpec {
  double scale_b;
};

/// Additive Gaussian noise on data alphabet {-1, +1}.
struct GaussianSpec {
  double sigma;
};

struct CurvePoint {
  double eps_star;
  double delta_star;
  double eps_design;
  double delta1;
  double delta2;
};

/// Ordered (eps, delta) tradeoff curve; delta nonincreasing in eps.
struct EpsDeltaCurve {
  std::vector<CurvePoint> points;
  std::uint64_t m = 0;
  double beta = 0.0;
  double sigma_or_b = 0.0;
  double delta2 = 0.0;
};

/// eps(b) = 2/b - log(e^{2/b} p_min + 1 - p_min); the exact PML level of the
/// binary Laplace mechanism under a known distribution.
double laplace_eps(double b, double p_min);

/// Leakage bound under an l1-ball from m samples at failure probability
/// delta: the worst-case p_min in the ball is max(0, p_hat_min - beta*/2).
double laplace_eps_with_uncertainty(double b, double p_min_hat, double delta,
                                    std::uint64_t m);

/// Solves laplace_eps_with_uncertainty(b, .) = eps_target by bisection on 1/b.
double laplace_scale_for_target(double eps_target, double delta, std::uint64_t m,
                                double p_min_hat);

/// Pointwise leakage of the binary Gaussian mechanism at outcome y;
/// prior_p = P_X(-1).
double gaussian_pml_at_y(double y, double sigma, double prior_p);

struct Interval {
  double lo;
  double hi;
};

/// Union of outcome intervals {y : l(X -> y) > eps}, truncated to
/// |y| <= 1 + 20 sigma, found by bracketing bisection refined to 1e-12.
std::vector<Interval> eps_violation_set(double eps, double sigma, double prior_p);

/// Worst-case output mass of the violation set over the ball of binary
/// priors; grid search (step 1e-3) plus golden-section refinement.
double gaussian_delta1(double eps, double sigma, const UncertaintySet& set);

/// Composed guarantee: eps* = eps - log(1 - beta*(delta2) e^eps / 2),
/// delta* = delta1 + delta2 - delta1 delta2.
PrivacyGuarantee gaussian_guarantee(double eps, double sigma, std::uint64_t m,
                                    double delta2, double p_hat);

/// Newton inversion of the complementary error function, to 1e-14.
double inverse_erfc(double delta);

/// Noise scale for the (eps, delta)-pLDP Gaussian baseline:
/// sqrt(2) (f + sqrt(f^2 + eps)) / eps with f = inverfc(delta).
double pldp_sigma(double eps, double delta);

std::vector<double> sample_noise(const LaplaceSpec& spec, std::uint64_t seed,
                                 std::size_t count);
std::vector<double> sample_noise(const GaussianSpec& spec, std::uint64_t seed,
                                 std::size_t count);

}  // namespace pml

#endif  // PML_ADDITIVE_HPP
