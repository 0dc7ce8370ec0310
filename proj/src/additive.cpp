#include "pml/additive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pml/estimation.hpp"
#include "pml/rng.hpp"

namespace pml {

namespace {

double log_sum_exp(double a, double b) {
  const double hi = std::max(a, b);
  if (hi == -std::numeric_limits<double>::infinity()) return hi;
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// Worst-case p_min over the l1-ball intersected with the simplex.
double effective_p_min(double p_min_hat, double delta, std::uint64_t m) {
  if (!(p_min_hat > 0.0) || p_min_hat > 0.5) {
    throw std::domain_error("effective p_min: require p_min_hat in (0, 0.5]");
  }
  if (delta <= 0.0) return 0.0;  // beta*(0) = inf: no distributional knowledge
  const double beta = beta_star(delta, m, 2);
  return std::max(0.0, p_min_hat - beta / 2.0);
}

}  // namespace

double laplace_eps(double b, double p_min) {
  if (!(b > 0.0)) throw std::domain_error("laplace_eps: require b > 0");
  if (!(p_min > 0.0) || p_min > 0.5) {
    throw std::domain_error("laplace_eps: require p_min in (0, 0.5]");
  }
  const double r = 2.0 / b;
  return r - std::log(std::exp(r) * p_min + 1.0 - p_min);
}

double laplace_eps_with_uncertainty(double b, double p_min_hat, double delta,
                                    std::uint64_t m) {
  if (!(b > 0.0)) throw std::domain_error("laplace_eps_with_uncertainty: require b > 0");
  const double p = effective_p_min(p_min_hat, delta, m);
  const double r = 2.0 / b;
  // p = 0 reduces to the eps-LDP guarantee 2/b.
  return r - std::log1p(p * std::expm1(r));
}

double laplace_scale_for_target(double eps_target, double delta, std::uint64_t m,
                                double p_min_hat) {
  if (!(eps_target > 0.0)) {
    throw std::domain_error("laplace_scale_for_target: require eps_target > 0");
  }
  const double p = effective_p_min(p_min_hat, delta, m);
  if (p == 0.0) return 2.0 / eps_target;  // LDP calibration
  if (eps_target >= -std::log(p)) {
    throw std::domain_error(
        "laplace_scale_for_target: target exceeds the achievable leakage -log(p_eff)");
  }
  // eps(u) = 2u - log(p expm1(2u) + 1) is increasing in u = 1/b.
  const auto eps_of_u = [p](double u) {
    return 2.0 * u - std::log1p(p * std::expm1(2.0 * u));
  };
  double lo = 0.0, hi = 1.0;
  while (eps_of_u(hi) < eps_target) hi *= 2.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (eps_of_u(mid) < eps_target ? lo : hi) = mid;
  }
  return 1.0 / (0.5 * (lo + hi));
}

double gaussian_pml_at_y(double y, double sigma, double prior_p) {
  if (!(sigma > 0.0)) throw std::domain_error("gaussian_pml_at_y: require sigma > 0");
  if (!(prior_p > 0.0) || !(prior_p < 1.0)) {
    throw std::domain_error("gaussian_pml_at_y: require prior_p in (0,1)");
  }
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  const double log_minus = -(y + 1.0) * (y + 1.0) * inv2s2;  // kernel at x = -1
  const double log_plus = -(y - 1.0) * (y - 1.0) * inv2s2;   // kernel at x = +1
  const double log_mix = log_sum_exp(std::log(prior_p) + log_minus,
                                     std::log1p(-prior_p) + log_plus);
  return std::max(log_minus, log_plus) - log_mix;
}

std::vector<Interval> eps_violation_set(double eps, double sigma, double prior_p) {
  if (eps < 0.0) throw std::domain_error("eps_violation_set: require eps >= 0");
  const double cap = 1.0 + 20.0 * sigma;
  const auto excess = [&](double y) {
    return gaussian_pml_at_y(y, sigma, prior_p) - eps;
  };

  constexpr int kGrid = 2048;
  std::vector<double> boundaries{-cap};
  double prev_y = -cap;
  double prev_g = excess(prev_y);
  for (int t = 1; t <= kGrid; ++t) {
    const double y = -cap + 2.0 * cap * static_cast<double>(t) / kGrid;
    const double g = excess(y);
    if ((prev_g > 0.0) != (g > 0.0)) {
      double lo = prev_y, hi = y;
      double g_lo = prev_g;
      while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double g_mid = excess(mid);
        if ((g_lo > 0.0) == (g_mid > 0.0)) {
          lo = mid;
          g_lo = g_mid;
        } else {
          hi = mid;
        }
      }
      boundaries.push_back(0.5 * (lo + hi));
    }
    prev_y = y;
    prev_g = g;
  }
  boundaries.push_back(cap);

  std::vector<Interval> out;
  for (std::size_t s = 0; s + 1 < boundaries.size(); ++s) {
    const double lo = boundaries[s], hi = boundaries[s + 1];
    if (hi - lo <= 0.0) continue;
    if (excess(0.5 * (lo + hi)) > 0.0) {
      // Touching intervals stay separate: at eps = 0 the violation set is
      // everything except the single zero-leakage point.
      out.push_back({lo, hi});
    }
  }
  return out;
}

namespace {

double violation_mass(double eps, double sigma, double p) {
  double mass = 0.0;
  for (const Interval& iv : eps_violation_set(eps, sigma, p)) {
    mass += p * (normal_cdf((iv.hi + 1.0) / sigma) - normal_cdf((iv.lo + 1.0) / sigma)) +
            (1.0 - p) *
                (normal_cdf((iv.hi - 1.0) / sigma) - normal_cdf((iv.lo - 1.0) / sigma));
  }
  return std::clamp(mass, 0.0, 1.0);
}

}  // namespace

double gaussian_delta1(double eps, double sigma, const UncertaintySet& set) {
  if (set.center.size() != 2) {
    throw std::invalid_argument("gaussian_delta1: requires a binary center");
  }
  const double p_hat = set.center(0);
  // Clip the ball to the open simplex; the violation probability is not
  // defined at the degenerate endpoints.
  const double lo = std::max(p_hat - set.radius_beta / 2.0, 1e-9);
  const double hi = std::min(p_hat + set.radius_beta / 2.0, 1.0 - 1e-9);
  if (!(lo <= hi)) {
    throw std::domain_error("gaussian_delta1: infeasible uncertainty set");
  }
  const auto mass = [&](double p) { return violation_mass(eps, sigma, p); };
  if (hi - lo < 1e-12) return mass(p_hat);

  // delta1(p) can be non-smooth where the interval topology changes, so a
  // dense grid seeds a golden-section refinement.
  constexpr double kStep = 1e-3;
  const int cells = std::max(1, static_cast<int>(std::ceil((hi - lo) / kStep)));
  double best_p = lo, best = mass(lo);
  for (int t = 1; t <= cells; ++t) {
    const double p = lo + (hi - lo) * static_cast<double>(t) / cells;
    const double v = mass(p);
    if (v > best) {
      best = v;
      best_p = p;
    }
  }
  double a = std::max(lo, best_p - (hi - lo) / cells);
  double b = std::min(hi, best_p + (hi - lo) / cells);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = mass(x1), f2 = mass(x2);
  for (int it = 0; it < 80 && (b - a) > 1e-12; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = mass(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = mass(x1);
    }
  }
  return std::max({best, f1, f2});
}

PrivacyGuarantee gaussian_guarantee(double eps, double sigma, std::uint64_t m,
                                    double delta2, double p_hat) {
  const double beta = beta_star(delta2, m, 2);
  const double arg = 1.0 - beta * std::exp(eps) / 2.0;
  if (!(arg > 0.0)) {
    throw std::domain_error("gaussian_guarantee: beta*(delta2) e^eps / 2 >= 1");
  }
  const UncertaintySet ball(Distribution({p_hat, 1.0 - p_hat}), beta);
  const double delta1 = gaussian_delta1(eps, sigma, ball);
  PrivacyGuarantee g;
  g.eps = eps - std::log(arg);
  g.delta = delta1 + delta2 - delta1 * delta2;
  g.provenance = Provenance::composed;
  return g;
}

double inverse_erfc(double delta) {
  if (!(delta > 0.0) || !(delta < 2.0)) {
    throw std::domain_error("inverse_erfc: require delta in (0, 2)");
  }
  double lo, hi;
  if (delta <= 1.0) {
    lo = 0.0;
    hi = 1.0;
    while (std::erfc(hi) > delta) hi *= 2.0;
  } else {
    hi = 0.0;
    lo = -1.0;
    while (std::erfc(lo) < delta) lo *= 2.0;
  }
  for (int it = 0; it < 120 && (hi - lo) > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (std::erfc(mid) > delta ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  // Newton polish where the derivative has not underflowed.
  constexpr double kTwoOverSqrtPi = 1.1283791670955125739;
  for (int it = 0; it < 8; ++it) {
    const double deriv = -kTwoOverSqrtPi * std::exp(-x * x);
    if (deriv == 0.0) break;
    const double step = (std::erfc(x) - delta) / deriv;
    x -= step;
    if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

double pldp_sigma(double eps, double delta) {
  if (!(eps > 0.0)) throw std::domain_error("pldp_sigma: require eps > 0");
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::domain_error("pldp_sigma: require delta in (0, 1)");
  }
  const double f = inverse_erfc(delta);
  return std::sqrt(2.0) * (f + std::sqrt(f * f + eps)) / eps;
}

std::vector<double> sample_noise(const LaplaceSpec& spec, std::uint64_t seed,
                                 std::size_t count) {
  if (!(spec.scale_b > 0.0)) throw std::domain_error("sample_noise: require b > 0");
  SplitMix64Rng rng(seed);
  std::vector<double> out(count);
  for (double& v : out) v = rng.laplace(spec.scale_b);
  return out;
}

std::vector<double> sample_noise(const GaussianSpec& spec, std::uint64_t seed,
                                 std::size_t count) {
  if (!(spec.sigma > 0.0)) throw std::domain_error("sample_noise: require sigma > 0");
  SplitMix64Rng rng(seed);
  std::vector<double> out(count);
  for (double& v : out) v = spec.sigma * rng.gaussian();
  return out;
}

}  // namespace pml
