// Python bindings for the main assessment / design / calibration operations.
// Distributions are plain lists of probabilities, mechanisms nested lists
// (rows = inputs); validation happens in the C++ constructors.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pml/additive.hpp"
#include "pml/design.hpp"
#include "pml/estimation.hpp"
#include "pml/experiments.hpp"
#include "pml/leakage.hpp"
#include "pml/types.hpp"

namespace py = pybind11;

namespace {

using Matrix = std::vector<std::vector<double>>;

pml::Distribution dist(const std::vector<double>& p) { return pml::Distribution(p); }
pml::Mechanism mech(const Matrix& m) { return pml::Mechanism(m); }

py::dict profile_to_dict(const pml::LeakageProfile& p) {
  py::dict d;
  d["per_outcome"] = p.per_outcome;
  d["output_indices"] = p.output_indices;
  d["excluded_outcomes"] = p.excluded_outcomes;
  d["output_dist"] = p.output_dist;
  d["eps_min"] = p.eps_min;
  return d;
}

}  // namespace

PYBIND11_MODULE(_pml, m) {
  m.doc() = "Pointwise maximal leakage: assessment, mechanism design, noise "
            "calibration. All leakage values are in nats.";

  py::register_exception<std::domain_error>(m, "InfeasibleError", PyExc_ValueError);

  // Leakage assessment.
  m.def("eps_min",
        [](const Matrix& M, const std::vector<double>& p) {
          return pml::eps_min(mech(M), dist(p));
        },
        py::arg("mechanism"), py::arg("prior"));
  m.def("leakage_profile",
        [](const Matrix& M, const std::vector<double>& p) {
          return profile_to_dict(pml::pml_per_outcome(mech(M), dist(p)));
        },
        py::arg("mechanism"), py::arg("prior"));
  m.def("eps_max",
        [](const std::vector<double>& p) { return pml::eps_max(dist(p)); },
        py::arg("prior"));
  m.def("privacy_region",
        [](double eps, const std::vector<double>& p) {
          return pml::privacy_region(eps, dist(p));
        },
        py::arg("eps"), py::arg("prior"));
  m.def("l1_sensitivity_bound", &pml::l1_sensitivity_bound, py::arg("eps"),
        py::arg("beta"), py::arg("region_k"), py::arg("p_min"));
  m.def("leakage_bound_in_ball", &pml::leakage_bound_in_ball, py::arg("eps"),
        py::arg("beta"));
  m.def("mutual_information",
        [](const Matrix& M, const std::vector<double>& p) {
          return pml::mutual_information(mech(M), dist(p));
        },
        py::arg("mechanism"), py::arg("prior"));

  // Estimation and concentration.
  m.def("beta_star", &pml::beta_star, py::arg("delta"), py::arg("m"), py::arg("n"));
  m.def("weissman_bound",
        [](std::uint64_t m_samples, std::size_t n, double beta) {
          return pml::weissman_bound(m_samples, n, beta);
        },
        py::arg("m"), py::arg("n"), py::arg("beta"));
  m.def("eps_prime_of_delta", &pml::eps_prime_of_delta, py::arg("eps"),
        py::arg("delta"), py::arg("m"), py::arg("n"));
  m.def("delta_min_of_eps_prime", &pml::delta_min_of_eps_prime, py::arg("eps"),
        py::arg("eps_prime"), py::arg("m"), py::arg("n"));

  // Mechanism design.
  m.def("optimal_binary_mechanism",
        [](double p1, double beta, double eps) {
          return pml::optimal_binary_mechanism(p1, beta, eps).matrix();
        },
        py::arg("p1"), py::arg("beta"), py::arg("eps"));
  m.def("eps_prime_transform", &pml::eps_prime_transform, py::arg("eps"),
        py::arg("beta"));
  m.def("membership_check",
        [](const Matrix& M, const std::vector<double>& est, double beta, double eps) {
          const pml::DesignProblem problem(dist(est), beta, eps);
          const pml::MembershipResult r = pml::membership_check(mech(M), problem);
          return py::make_tuple(r.member, r.max_violation);
        },
        py::arg("mechanism"), py::arg("estimate"), py::arg("beta"), py::arg("eps"));
  m.def("design_mechanism",
        [](const std::vector<double>& est, double beta, double eps,
           const std::string& mode) {
          const pml::DesignProblem problem(dist(est), beta, eps);
          if (mode == "vertex") {
            const pml::ConstraintSet cs = pml::lccp_constraints(problem);
            return pml::vertex_search(cs, problem.utility_fn(), problem.estimate)
                .matrix();
          }
          if (mode == "fixed_estimate") {
            return pml::design_via_fixed_estimate(problem).mechanism.matrix();
          }
          throw std::invalid_argument("mode must be 'vertex' or 'fixed_estimate'");
        },
        py::arg("estimate"), py::arg("beta"), py::arg("eps"),
        py::arg("mode") = "fixed_estimate");
  m.def("k_singular_mechanism",
        [](std::size_t n, std::size_t k) {
          return pml::k_singular_mechanism(n, k).matrix();
        },
        py::arg("n"), py::arg("k"));

  // Additive noise on a binary secret.
  m.def("laplace_eps", &pml::laplace_eps, py::arg("b"), py::arg("p_min"));
  m.def("laplace_eps_with_uncertainty", &pml::laplace_eps_with_uncertainty,
        py::arg("b"), py::arg("p_min_hat"), py::arg("delta"), py::arg("m"));
  m.def("laplace_scale_for_target", &pml::laplace_scale_for_target,
        py::arg("eps"), py::arg("delta"), py::arg("m"), py::arg("p_min_hat"));
  m.def("gaussian_pml_at_y", &pml::gaussian_pml_at_y, py::arg("y"),
        py::arg("sigma"), py::arg("prior_p"));
  m.def("gaussian_delta1",
        [](double eps, double sigma, double p_hat, double beta) {
          return pml::gaussian_delta1(
              eps, sigma,
              pml::UncertaintySet(pml::Distribution({p_hat, 1.0 - p_hat}), beta));
        },
        py::arg("eps"), py::arg("sigma"), py::arg("p_hat"), py::arg("beta") = 0.0);
  m.def("gaussian_guarantee",
        [](double eps, double sigma, std::uint64_t m_samples, double delta2,
           double p_hat) {
          const pml::PrivacyGuarantee g =
              pml::gaussian_guarantee(eps, sigma, m_samples, delta2, p_hat);
          return py::make_tuple(g.eps, g.delta);
        },
        py::arg("eps"), py::arg("sigma"), py::arg("m"), py::arg("delta2"),
        py::arg("p_hat") = 0.5);
  m.def("pldp_sigma", &pml::pldp_sigma, py::arg("eps"), py::arg("delta"));

  // Experiments.
  m.def("laplace_experiment",
        [](const std::vector<int>& values, const std::vector<std::uint64_t>& m_grid,
           const std::vector<double>& eps_grid, double delta, std::size_t iterations,
           std::uint64_t seed) {
          pml::BinaryColumn col{values, "data"};
          pml::ExperimentConfig cfg;
          cfg.m_grid = m_grid;
          cfg.eps_grid = eps_grid;
          cfg.delta = delta;
          cfg.iterations = iterations;
          cfg.seed = seed;
          py::list out;
          for (const pml::ExperimentCell& c : pml::run_laplace_experiment(col, cfg)) {
            py::dict d;
            d["m"] = c.m;
            d["eps"] = c.eps;
            d["arm"] = c.arm;
            d["mi_mean"] = c.mi_mean;
            d["mi_std"] = c.mi_std;
            d["cells_failed"] = c.cells_failed;
            out.append(d);
          }
          return out;
        },
        py::arg("values"), py::arg("m_grid"), py::arg("eps_grid"),
        py::arg("delta") = 1e-9, py::arg("iterations") = 100, py::arg("seed") = 0);
  m.def("synth_binary_source",
        [](double p, std::size_t m_rows, std::uint64_t seed) {
          return pml::synth_binary_source(p, m_rows, seed).values;
        },
        py::arg("p"), py::arg("rows"), py::arg("seed") = 0);
}
