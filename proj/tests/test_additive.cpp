#include <cmath>
#include <vector>

#include "doctest.h"
#include "pml/additive.hpp"
#include "pml/estimation.hpp"
#include "pml/rng.hpp"
#include "pml/types.hpp"

using namespace pml;

namespace {

// Independent density-ratio view of the binary Laplace leakage at outcome y.
double laplace_leakage_at(double y, double b, double p) {
  const double fm = std::exp(-std::abs(y + 1.0) / b);
  const double fp = std::exp(-std::abs(y - 1.0) / b);
  return std::log(std::max(fm, fp) / (p * fm + (1.0 - p) * fp));
}

// Independent density-ratio view of the binary Gaussian leakage.
double gaussian_leakage_at(double y, double sigma, double p) {
  const double km = std::exp(-(y + 1.0) * (y + 1.0) / (2.0 * sigma * sigma));
  const double kp = std::exp(-(y - 1.0) * (y - 1.0) / (2.0 * sigma * sigma));
  return std::log(std::max(km, kp) / (p * km + (1.0 - p) * kp));
}

bool in_violation_set(const std::vector<Interval>& set, double y) {
  for (const Interval& iv : set) {
    if (y >= iv.lo && y <= iv.hi) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("laplace_eps reference value and limits") {
  CHECK(laplace_eps(2.0, 0.5) ==
        doctest::Approx(0.3798854930417225).epsilon(1e-13));
  CHECK(laplace_eps(2.0, 1e-12) == doctest::Approx(1.0).epsilon(1e-9));  // LDP limit
  CHECK(laplace_eps(1e6, 0.3) <= 3e-6);  // b -> inf: no signal
  CHECK_THROWS_AS(laplace_eps(-1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(laplace_eps(2.0, 0.7), std::domain_error);
}

TEST_CASE("laplace_eps dominates the density-ratio leakage on a grid") {
  const double b = 2.0, p = 0.5;
  const double bound = laplace_eps(b, p);
  double grid_max = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const double y = -6.0 + 12.0 * t / 9999.0;
    const double l = laplace_leakage_at(y, b, p);
    CHECK(l <= bound + 1e-9);
    grid_max = std::max(grid_max, l);
  }
  CHECK(grid_max == doctest::Approx(bound).epsilon(1e-6));  // the bound is attained
}

TEST_CASE("laplace_eps_with_uncertainty") {
  // Forced beta* >= 2 p_hat: exactly the 2/b LDP guarantee.
  CHECK(laplace_eps_with_uncertainty(3.0, 0.5, 1e-6, 4) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  // Reference: b=2, m=1800, delta=1e-9, p_hat=0.5.
  CHECK(laplace_eps_with_uncertainty(2.0, 0.5, 1e-9, 1800) ==
        doctest::Approx(0.4538399312629544).epsilon(1e-12));
  // Vanishing uncertainty approaches the exact leakage.
  CHECK(laplace_eps_with_uncertainty(2.0, 0.5, 0.5, 100000000) ==
        doctest::Approx(laplace_eps(2.0, 0.5)).epsilon(1e-3));
  // delta = 0 means no distributional claim at all: plain LDP.
  CHECK(laplace_eps_with_uncertainty(2.0, 0.5, 0.0, 1800) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("laplace_scale_for_target round-trips") {
  for (double eps : {0.2, 0.5, 0.69}) {
    const double b = laplace_scale_for_target(eps, 1e-6, 5000, 0.4);
    CHECK(laplace_eps_with_uncertainty(b, 0.4, 1e-6, 5000) ==
          doctest::Approx(eps).epsilon(1e-9));
  }
  // LDP regime: b = 2 / eps exactly.
  CHECK(laplace_scale_for_target(0.6931, 0.0, 1000, 0.5) ==
        doctest::Approx(2.0 / 0.6931).epsilon(1e-14));
  // Smaller delta costs a larger scale at fixed eps.
  CHECK(laplace_scale_for_target(0.5, 1e-9, 5000, 0.4) >
        laplace_scale_for_target(0.5, 1e-3, 5000, 0.4));
  // Target above -log(p_eff) is unattainable.
  CHECK_THROWS_AS(laplace_scale_for_target(5.0, 1e-6, 100000, 0.4),
                  std::domain_error);
}

TEST_CASE("gaussian_pml_at_y values and symmetry") {
  CHECK(std::abs(gaussian_pml_at_y(0.0, 1.0, 0.5)) <= 1e-14);
  CHECK(gaussian_pml_at_y(0.7, 1.5, 0.3) ==
        doctest::Approx(0.14963162302148125).epsilon(1e-12));
  CHECK(gaussian_pml_at_y(-2.3, 0.8, 0.55) ==
        doctest::Approx(0.5972186655718562).epsilon(1e-12));
  // Large y concentrates the posterior on x = +1.
  CHECK(gaussian_pml_at_y(40.0, 1.0, 0.3) ==
        doctest::Approx(-std::log(0.7)).epsilon(1e-9));
  // (y, p) -> (-y, 1-p) symmetry.
  for (double y : {0.3, 1.1, 2.7}) {
    CHECK(gaussian_pml_at_y(y, 1.2, 0.35) ==
          doctest::Approx(gaussian_pml_at_y(-y, 1.2, 0.65)).epsilon(1e-13));
  }
  // Density-ratio oracle agreement.
  SplitMix64Rng rng(9);
  for (int t = 0; t < 1000; ++t) {
    const double y = -6.0 + 12.0 * rng.uniform();
    const double p = 0.05 + 0.9 * rng.uniform();
    CHECK(gaussian_pml_at_y(y, 1.3, p) ==
          doctest::Approx(gaussian_leakage_at(y, 1.3, p)).epsilon(1e-12));
  }
}

TEST_CASE("eps_violation_set structure") {
  // eps above the leakage sup: empty.
  CHECK(eps_violation_set(2.0, 1.5, 0.5).empty());
  // eps = 0: everything except a null set violates; two capped half-lines.
  const auto all = eps_violation_set(0.0, 1.5, 0.5);
  REQUIRE(all.size() == 2);
  const double cap = 1.0 + 20.0 * 1.5;
  CHECK(all.front().lo == doctest::Approx(-cap).epsilon(1e-12));
  CHECK(all.back().hi == doctest::Approx(cap).epsilon(1e-12));
  // Interval endpoints sit on the level set.
  const auto set = eps_violation_set(0.2, 1.5, 0.5);
  REQUIRE(set.size() == 2);
  CHECK(set[0].hi == doctest::Approx(-0.5065440595572392).epsilon(1e-9));
  CHECK(set[1].lo == doctest::Approx(0.5065440595572392).epsilon(1e-9));
  for (const Interval& iv : set) CHECK(iv.lo < iv.hi);
}

TEST_CASE("eps_violation_set classifies a dense grid correctly") {
  const double eps = 0.25, sigma = 1.2, p = 0.4;
  const auto set = eps_violation_set(eps, sigma, p);
  const double cap = 1.0 + 20.0 * sigma;
  int mismatches = 0;
  for (int t = 0; t < 100000; ++t) {
    const double y = -cap + 2.0 * cap * t / 99999.0;
    const double l = gaussian_pml_at_y(y, sigma, p);
    if (std::abs(l - eps) < 1e-7) continue;  // boundary band
    if ((l > eps) != in_violation_set(set, y)) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("gaussian_delta1 matches the closed-form mass at beta = 0") {
  struct Case {
    double eps, sigma, p, expected;
  };
  const Case cases[] = {{0.2, 1.5, 0.5, 0.7865129645607106},
                        {0.4, 1.5, 0.5, 0.5141150492481121},
                        {0.3, 2.0, 0.35, 0.4154663921415551}};
  for (const Case& c : cases) {
    const UncertaintySet point(Distribution({c.p, 1.0 - c.p}), 0.0);
    CHECK(gaussian_delta1(c.eps, c.sigma, point) ==
          doctest::Approx(c.expected).epsilon(1e-9));
  }
  // eps above eps_max: no violations.
  const UncertaintySet half(Distribution({0.5, 0.5}), 0.0);
  CHECK(gaussian_delta1(1.0, 1.5, half) == 0.0);
}

TEST_CASE("gaussian_delta1 monotonicity and symmetry") {
  const UncertaintySet set(Distribution({0.45, 0.55}), 0.1);
  CHECK(gaussian_delta1(0.3, 1.5, set) <= gaussian_delta1(0.2, 1.5, set) + 1e-12);
  const UncertaintySet mirror(Distribution({0.55, 0.45}), 0.1);
  CHECK(gaussian_delta1(0.25, 1.5, set) ==
        doctest::Approx(gaussian_delta1(0.25, 1.5, mirror)).epsilon(1e-9));
  // The ball maximum dominates the center value.
  const UncertaintySet point(Distribution({0.45, 0.55}), 0.0);
  CHECK(gaussian_delta1(0.25, 1.5, set) >=
        gaussian_delta1(0.25, 1.5, point) - 1e-12);
}

TEST_CASE("gaussian_guarantee composition") {
  const PrivacyGuarantee g = gaussian_guarantee(0.3, 1.5, 1000, 1e-6, 0.5);
  const double beta = beta_star(1e-6, 1000, 2);
  CHECK(g.eps ==
        doctest::Approx(0.3 - std::log(1.0 - beta * std::exp(0.3) / 2.0))
            .epsilon(1e-12));
  CHECK(g.delta >= 1e-6);  // delta2 floor
  CHECK(g.delta <= 1.0);
  CHECK(g.provenance == Provenance::composed);
  // beta* e^eps / 2 >= 1 is out of domain.
  CHECK_THROWS_AS(gaussian_guarantee(5.0, 1.5, 20, 1e-6, 0.5), std::domain_error);
}

TEST_CASE("inverse_erfc") {
  CHECK(inverse_erfc(0.5) == doctest::Approx(0.47693627620446977).epsilon(1e-12));
  for (double d : {1e-9, 1e-4, 0.3, 1.0, 1.7}) {
    CHECK(std::erfc(inverse_erfc(d)) == doctest::Approx(d).epsilon(1e-12));
  }
  CHECK_THROWS_AS(inverse_erfc(0.0), std::domain_error);
  CHECK_THROWS_AS(inverse_erfc(2.0), std::domain_error);
}

TEST_CASE("pldp_sigma") {
  CHECK(pldp_sigma(1.0, 0.5) == doctest::Approx(2.2413134234661705).epsilon(1e-12));
  CHECK(pldp_sigma(1.0, 1e-6) > pldp_sigma(1.0, 1e-3));  // stricter delta, more noise
  CHECK_THROWS_AS(pldp_sigma(0.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(pldp_sigma(1.0, 0.0), std::domain_error);
}

TEST_CASE("sample_noise moments and determinism") {
  const std::size_t n = 1000000;
  const auto lap = sample_noise(LaplaceSpec{1.5}, 99, n);
  double mean = 0.0, var = 0.0;
  for (double v : lap) mean += v;
  mean /= n;
  for (double v : lap) var += (v - mean) * (v - mean);
  var /= n;
  CHECK(var == doctest::Approx(2.0 * 1.5 * 1.5).epsilon(0.01));

  const auto gau = sample_noise(GaussianSpec{0.8}, 99, n);
  mean = 0.0;
  var = 0.0;
  for (double v : gau) mean += v;
  mean /= n;
  for (double v : gau) var += (v - mean) * (v - mean);
  var /= n;
  CHECK(var == doctest::Approx(0.64).epsilon(0.01));

  CHECK(sample_noise(LaplaceSpec{1.0}, 5, 0).empty());
  CHECK(sample_noise(LaplaceSpec{1.0}, 5, 10) == sample_noise(LaplaceSpec{1.0}, 5, 10));
}
