// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "pml/additive.hpp"
#include "pml/design.hpp"
#include "pml/estimation.hpp"
#include "pml/experiments.hpp"
#include "pml/leakage.hpp"
#include "pml/rng.hpp"
#include "pml/types.hpp"

using namespace pml;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  if (!pass) ++g_failures;
}

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// In-ball, in-simplex prior sampler that works even when beta >= 2 min mass:
// random zero-sum direction, scaled to respect both the l1 radius and
// nonnegativity.
Distribution sample_feasible_prior(const Distribution& center, double beta,
                                   SplitMix64Rng& rng) {
  const std::size_t n = center.size();
  std::vector<double> omega(n);
  double mean = 0.0;
  for (double& w : omega) {
    w = rng.gaussian();
    mean += w;
  }
  mean /= static_cast<double>(n);
  double l1 = 0.0;
  for (double& w : omega) {
    w -= mean;
    l1 += std::abs(w);
  }
  if (l1 < 1e-12) return center;
  double t_max = beta / l1;
  for (std::size_t i = 0; i < n; ++i) {
    if (omega[i] < 0.0) {
      t_max = std::min(t_max, (center(i) - 1e-9) / (-omega[i]));
    }
  }
  const double t = t_max * rng.uniform();
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = center(i) + t * omega[i];
  return Distribution(std::move(q));
}

void criterion_1() {
  const double t0 = now_ms();
  const Mechanism mech({{0.325, 0.225, 0.225, 0.225},
                        {0.45, 0.1, 0.225, 0.225},
                        {0.45, 0.225, 0.1, 0.225},
                        {0.45, 0.225, 0.225, 0.1}});
  const Distribution prior({0.4, 0.2, 0.2, 0.2});
  const LeakageProfile profile = pml_per_outcome(mech, prior);
  const double expected = std::log(9.0 / 8.0);
  double worst = 0.0;
  for (double l : profile.per_outcome) worst = std::max(worst, std::abs(l - expected));
  const int region = privacy_region(profile.eps_min, prior);
  const double elapsed = now_ms() - t0;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "reference 4x4: max |l - log(9/8)| = %.2e, region %d, %.3f ms", worst,
                region, elapsed);
  report(1, profile.per_outcome.size() == 4 && worst <= 1e-12 && region == 1 &&
             elapsed < 1.0,
         buf);
}

void criterion_2() {
  double worst = 0.0;
  for (double eps : {0.1, std::log(2.0), 1.0, 3.0}) {
    const Mechanism mech = optimal_binary_mechanism(0.5, 1.0, eps);
    const double s = std::exp(eps);
    const double expect[2][2] = {{s / (1.0 + s), 1.0 / (1.0 + s)},
                                 {1.0 / (1.0 + s), s / (1.0 + s)}};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        worst = std::max(worst, std::abs(mech(i, j) - expect[i][j]));
      }
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf),
                "randomized-response reduction: max entry error = %.2e", worst);
  report(2, worst <= 1e-12, buf);
}

void criterion_3() {
  const double t0 = now_ms();
  SplitMix64Rng rng(101);
  double worst_extreme = 0.0, worst_interior = 0.0;
  int triples = 0;
  while (triples < 1000) {
    const double p1 = 0.5 + 0.49 * rng.uniform();
    const double beta = 2.0 * (1.0 - p1) * rng.uniform();
    const double worst_p1 = p1 - beta / 2.0;
    const double eps_cap = worst_p1 > 0.0 ? -std::log(worst_p1) : 10.0;
    const double eps = eps_cap * (0.02 + 0.96 * rng.uniform());
    if (eps <= 0.0 || eps >= eps_cap) continue;
    ++triples;
    const Mechanism mech = optimal_binary_mechanism(p1, beta, eps);
    for (double s : {-1.0, 1.0}) {
      const double p = p1 + s * beta / 2.0;
      if (p <= 0.0 || p >= 1.0) continue;
      worst_extreme = std::max(
          worst_extreme, std::abs(eps_min(mech, Distribution({p, 1.0 - p})) - eps));
    }
    for (int k = 0; k < 100; ++k) {
      const double p = p1 + beta * (rng.uniform() - 0.5);
      if (p <= 1e-9 || p >= 1.0 - 1e-9) continue;
      worst_interior = std::max(
          worst_interior, eps_min(mech, Distribution({p, 1.0 - p})) - eps);
    }
  }
  const double elapsed = now_ms() - t0;
  char buf[180];
  std::snprintf(buf, sizeof(buf),
                "binary optimum: extreme-point |eps_min - eps| = %.2e, interior excess "
                "= %.2e, %.0f ms",
                worst_extreme, worst_interior, elapsed);
  report(3, worst_extreme <= 1e-10 && worst_interior <= 1e-10 && elapsed < 5000.0, buf);
}

void criterion_4() {
  const double t0 = now_ms();
  const Mechanism mech = k_singular_mechanism(10, 2);
  const Distribution uniform = Distribution::uniform(10);
  const double eps = eps_min(mech, uniform);  // log 5
  SplitMix64Rng rng(202);
  double worst_excess = -1e9;
  double worst_equality_gap = 0.0;
  bool ok = std::abs(eps - std::log(5.0)) <= 1e-12;
  for (int bi = 1; bi <= 30; ++bi) {
    const double beta = 0.01 * bi;
    // Same value as eps + the k>1 sensitivity term, but defined for any
    // beta with e^eps beta / 2 < 1, so it also covers beta >= 2 p_min.
    const double capped = leakage_bound_in_ball(eps, beta);
    for (int s = 0; s < 10000; ++s) {
      const Distribution q = sample_feasible_prior(uniform, beta, rng);
      worst_excess = std::max(worst_excess, eps_min(mech, q) - capped);
    }
    // Equality case needs the crafted prior, defined for beta < 2 p_min.
    if (beta < 2.0 * uniform.min_mass() - 1e-12) {
      const double bound = l1_sensitivity_bound(eps, beta, 2, uniform.min_mass());
      const Distribution crafted = worst_case_prior(mech, uniform, beta, 0);
      worst_equality_gap = std::max(
          worst_equality_gap, std::abs(eps_min(mech, crafted) - (eps + bound)));
    }
  }
  const double elapsed = now_ms() - t0;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "sensitivity bound: sampled excess = %.2e, equality gap = %.2e, "
                "%.0f ms",
                worst_excess, worst_equality_gap, elapsed);
  report(4, ok && worst_excess <= 1e-9 && worst_equality_gap <= 1e-9 &&
             elapsed < 30000.0,
         buf);
}

void criterion_5() {
  const double eps = std::log(5.0);
  const std::size_t n = 20;
  bool ok = true;
  // Clamps to 1 when eps' barely exceeds eps.
  ok = ok && delta_min_of_eps_prime(eps, eps + 0.01, 20000, n) == 1.0;
  // Monotone decreasing in eps' and in m.
  double prev = 2.0;
  for (double step : {0.02, 0.05, 0.10, 0.20, 0.40}) {
    const double v = delta_min_of_eps_prime(eps, eps + step, 100000, n);
    ok = ok && v <= prev + 1e-15;
    prev = v;
  }
  for (std::uint64_t m : {20000ull, 50000ull, 100000ull, 200000ull}) {
    ok = ok && delta_min_of_eps_prime(eps, eps + 0.1, m, n) <=
                   delta_min_of_eps_prime(eps, eps + 0.1, m / 2, n) + 1e-15;
  }
  // Falls below 1e-10 at m = 1e5 once eps' sits ~5% above eps.
  const double tail = delta_min_of_eps_prime(eps, 1.05 * eps, 100000, n);
  ok = ok && tail < 1e-10;
  // Spot values against direct formula evaluation.
  double worst_rel = 0.0;
  for (double step : {0.05, 0.1, 0.3}) {
    for (std::uint64_t m : {20000ull, 100000ull}) {
      const double got = delta_min_of_eps_prime(eps, eps + step, m, n);
      const double gap = std::exp(-eps) - std::exp(-(eps + step));
      const double direct = std::min(
          1.0, std::exp(log_two_pow_n_minus_2(n) - 2.0 * static_cast<double>(m) *
                                                       gap * gap));
      if (direct > 0.0) {
        worst_rel = std::max(worst_rel, std::abs(got - direct) / direct);
      }
    }
  }
  ok = ok && worst_rel <= 1e-12;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "delta_min curve: tail at 1.05 eps = %.2e, spot rel err = %.2e", tail,
                worst_rel);
  report(5, ok, buf);
}

void criterion_6() {
  SplitMix64Rng rng(303);
  const Distribution est({0.4, 0.3, 0.2, 0.1});
  const double eps = 0.5, beta = 0.15;
  const DesignProblem problem(est, beta, eps);
  const double eps_prime = eps_prime_transform(eps, beta);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::vector<double>> rows(4, std::vector<double>(4));
    for (auto& row : rows) {
      double sum = 0.0;
      for (double& v : row) {
        v = rng.uniform_open();
        sum += v;
      }
      for (double& v : row) v /= sum;
    }
    Mechanism raw(rows);
    // Rescale toward the rank-one output mechanism until eps'-PML holds at
    // the estimate.
    const std::vector<double> py = raw.output_dist(est);
    double lo = 0.0, hi = 1.0;  // weight on the raw mechanism
    for (int it = 0; it < 60; ++it) {
      const double lambda = 0.5 * (lo + hi);
      std::vector<std::vector<double>> mixed(4, std::vector<double>(4));
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
          mixed[i][j] = lambda * raw(i, j) + (1.0 - lambda) * py[j];
        }
      }
      (eps_min(Mechanism(mixed), est) <= eps_prime - 1e-6 ? lo : hi) = lambda;
    }
    std::vector<std::vector<double>> mixed(4, std::vector<double>(4));
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        mixed[i][j] = lo * raw(i, j) + (1.0 - lo) * py[j];
      }
    }
    worst = std::max(worst, membership_check(Mechanism(mixed), problem).max_violation);
  }
  char buf[140];
  std::snprintf(buf, sizeof(buf),
                "subset property: max LCCP violation over 500 mechanisms = %.2e",
                worst);
  report(6, worst <= 1e-9, buf);
}

void criterion_7() {
  const double frozen = 1.0 - std::log((std::exp(1.0) + 1.0) / 2.0);
  const double got = laplace_eps(2.0, 0.5);
  bool ok = std::abs(got - frozen) <= 1e-12;
  double grid_excess = -1e9;
  for (int t = 0; t < 100000; ++t) {
    const double y = -8.0 + 16.0 * t / 99999.0;
    const double fm = std::exp(-std::abs(y + 1.0) / 2.0);
    const double fp = std::exp(-std::abs(y - 1.0) / 2.0);
    const double l = std::log(std::max(fm, fp) / (0.5 * fm + 0.5 * fp));
    grid_excess = std::max(grid_excess, l - got);
  }
  ok = ok && grid_excess <= 1e-9;
  // Forced beta* >= 1: the guarantee collapses to the 2/b LDP level exactly.
  const double ldp = laplace_eps_with_uncertainty(2.0, 0.5, 1e-6, 4);
  ok = ok && ldp == 1.0;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "laplace: |eps - frozen| = %.2e, grid excess = %.2e, LDP regime = %.17g",
                std::abs(got - frozen), grid_excess, ldp);
  report(7, ok, buf);
}

void criterion_8() {
  const double t0 = now_ms();
  // Interval-based delta1 against a brute-force Riemann oracle at beta = 0.
  double worst_gap = 0.0;
  for (double eps : {0.15, 0.3}) {
    for (double p : {0.5, 0.35}) {
      const double sigma = 1.5;
      const UncertaintySet point(Distribution({p, 1.0 - p}), 0.0);
      const double via_intervals = gaussian_delta1(eps, sigma, point);
      // Tail beyond 8 sigma holds ~1e-16 mass; a tighter window keeps the
      // oracle's own discretization error under the comparison tolerance.
      const double cap = 1.0 + 8.0 * sigma;
      const long steps = 40000000;
      const double dy = 2.0 * cap / steps;
      double riemann = 0.0;
      const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
      const double norm = 1.0 / (sigma * std::sqrt(2.0 * 3.14159265358979323846));
      for (long t = 0; t < steps; ++t) {
        const double y = -cap + (t + 0.5) * dy;
        const double km = std::exp(-(y + 1.0) * (y + 1.0) * inv2s2);
        const double kp = std::exp(-(y - 1.0) * (y - 1.0) * inv2s2);
        const double mix = p * km + (1.0 - p) * kp;
        if (std::log(std::max(km, kp) / mix) > eps) riemann += norm * mix * dy;
      }
      worst_gap = std::max(worst_gap, std::abs(via_intervals - riemann));
    }
  }
  bool ok = worst_gap <= 1e-6;

  // Full curves: monotone, delta2 floor, and dominance over the pLDP baseline.
  GaussianCurveConfig cfg;
  cfg.sigmas = {1.5};
  cfg.m_grid = {1000};
  cfg.eps_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.8, 1.0, 1.2};
  cfg.delta2 = 1e-6;
  cfg.p_hat = 0.5;
  const auto curves = run_gaussian_curves(cfg);
  const auto& res = curves.front();
  bool curve_ok = !res.pml.points.empty();
  double prev_delta = 2.0;
  for (std::size_t i = 0; i < res.pml.points.size(); ++i) {
    const CurvePoint& pt = res.pml.points[i];
    curve_ok = curve_ok && pt.delta_star >= cfg.delta2 - 1e-18;
    curve_ok = curve_ok && pt.delta_star <= prev_delta + 1e-12;
    prev_delta = pt.delta_star;
    curve_ok = curve_ok && pt.delta_star <= res.pldp[i].delta_star + 1e-12;
  }
  const double elapsed = now_ms() - t0;
  char buf[180];
  std::snprintf(buf, sizeof(buf),
                "gaussian: delta1 vs Riemann gap = %.2e, curve points = %zu, %.0f ms",
                worst_gap, res.pml.points.size(), elapsed);
  report(8, ok && curve_ok && elapsed < 60000.0, buf);
}

void criterion_9() {
  SplitMix64Rng rng(404);
  const std::vector<double> lambdas = {0.1, 0.3, 0.5, 0.7, 0.9};
  double worst_convexity = 0.0, worst_lipschitz = -1e9;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + trial % 3;
    std::vector<std::vector<double>> rows(n, std::vector<double>(n));
    for (auto& row : rows) {
      double sum = 0.0;
      for (double& v : row) {
        v = rng.uniform_open();
        sum += v;
      }
      for (double& v : row) v /= sum;
    }
    const Mechanism mech(rows);
    std::vector<double> c(n);
    double sum = 0.0;
    for (double& v : c) {
      v = 0.1 + rng.uniform();
      sum += v;
    }
    for (double& v : c) v /= sum;
    const Distribution center(c);
    const double beta = 0.5 * center.min_mass();
    const UncertaintySet set(center, beta);
    const Distribution p = sample_prior_in_ball(set, rng.next_u64());
    const Distribution q = sample_prior_in_ball(set, rng.next_u64());

    const ConvexityReport rep = convexity_audit(mech, p, q, lambdas);
    worst_convexity = std::max(worst_convexity, rep.max_eps_min_violation);

    const double gap = std::abs(eps_min(mech, p) - eps_min(mech, q));
    worst_lipschitz = std::max(worst_lipschitz, gap - lipschitz_bound(mech, set, p, q));
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "property suites: convexity violation = %.2e, lipschitz excess = %.2e",
                worst_convexity, worst_lipschitz);
  report(9, worst_convexity <= 1e-12 && worst_lipschitz <= 1e-9, buf);
}

void criterion_10() {
  const BinaryColumn data = synth_binary_source(0.7, 10000, 55);
  ExperimentConfig cfg;
  cfg.m_grid = {2000};
  cfg.eps_grid = {std::log(2.0)};
  cfg.delta = 1e-9;
  cfg.iterations = 20;
  cfg.seed = 99;
  const std::string run_a = format_result_csv(run_laplace_experiment(data, cfg));
  const std::string run_b = format_result_csv(run_laplace_experiment(data, cfg));
  const bool identical = run_a == run_b;
  const auto cells = run_laplace_experiment(data, cfg);
  double pml_mi = -1.0, ldp_mi = -1.0;
  for (const ExperimentCell& c : cells) {
    if (c.arm == "pml") pml_mi = c.mi_mean;
    if (c.arm == "ldp") ldp_mi = c.mi_mean;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "experiment: byte-identical = %s, MI pml = %.5f vs ldp = %.5f",
                identical ? "yes" : "no", pml_mi, ldp_mi);
  report(10, identical && pml_mi > ldp_mi, buf);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criteria failed\n", g_failures);
  return 1;
}
