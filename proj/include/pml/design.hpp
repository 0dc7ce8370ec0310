#ifndef PML_DESIGN_HPP
#define PML_DESIGN_HPP

#include <functional>
#include <string>
#include <vector>

#include "pml/types.hpp"

namespace pml {

/// Outcome-wise sub-linear utility evaluated on (mechanism, estimate).
using UtilityFn = std::function<double(const Mechanism&, const Distribution&)>;

enum class UtilityKind { mutual_information, custom_sublinear };

struct DesignProblem {
  Distribution estimate;
  double beta;
  double eps;
  UtilityKind utility = UtilityKind::mutual_information;
  UtilityFn custom_utility;  // used when utility == custom_sublinear

  DesignProblem(Distribution est, double b, double e,
                UtilityKind kind = UtilityKind::mutual_information,
                UtilityFn custom = nullptr);

  UtilityFn utility_fn() const;
};

/// One linear constraint a . x <= b (or == b) over the N^2 mechanism entries
/// in row-major order.
struct LinearConstraint {
  std::vector<double> coeffs;
  double rhs;
  bool equality;
};

/// Linear description of M(eps, B_beta(P_hat)): the per-column leakage
/// inequalities at the transformed parameter eps', row-stochasticity and
/// nonnegativity.
struct ConstraintSet {
  std::size_t n = 0;
  double eps = 0.0;
  double beta = 0.0;
  double eps_prime = 0.0;
  Distribution estimate;
  std::vector<LinearConstraint> inequalities;   // N^3 leakage rows
  std::vector<LinearConstraint> equalities;     // N row sums
  std::vector<LinearConstraint> bounds;         // N^2 nonnegativity rows

  explicit ConstraintSet(Distribution est) : estimate(std::move(est)) {}

  /// Largest violation of any constraint row by the given mechanism.
  double max_violation(const Mechanism& mech) const;
};

struct MembershipResult {
  bool member;
  double max_violation;
};

struct DesignResult {
  Mechanism mechanism;
  double eps;
  double beta;
  double eps_prime;
  std::string path;  // closed_form | vertex | fixed_estimate
};

/// Closed-form optimal 2x2 mechanism for an l1-ball around (p1, 1-p1),
/// p1 >= 0.5, valid in the first privacy region across the whole ball.
Mechanism optimal_binary_mechanism(double p1, double beta, double eps);

/// eps' = log(e^eps / (1 + (beta/2) e^eps)); equals eps at beta = 0.
double eps_prime_transform(double eps, double beta);

ConstraintSet lccp_constraints(const DesignProblem& problem);

MembershipResult membership_check(const Mechanism& mech, const DesignProblem& problem);

/// Enumerates the vertices of the constraint polytope (double description
/// over the reduced coordinates) and returns a utility argmax. Ties broken
/// by lexicographic matrix order. Exhaustive mode is limited to N <= 6.
Mechanism vertex_search(const ConstraintSet& constraints, const UtilityFn& utility,
                        const Distribution& estimate);

/// All polytope vertices, lexicographically sorted. Exposed for audits.
std::vector<Mechanism> enumerate_vertices(const ConstraintSet& constraints);

/// Design via the parameter transformation: maximize utility over
/// M(eps', P_hat) and certify membership for the original (eps, beta) ball.
DesignResult design_via_fixed_estimate(const DesignProblem& problem);

/// Block-circulant doubly stochastic matrix with entries in {0, 1/k};
/// satisfies eps-PML at the uniform prior with eps = log(N/k).
Mechanism k_singular_mechanism(std::size_t n, std::size_t k);

double mutual_information(const Mechanism& mech, const Distribution& prior);

}  // namespace pml

#endif  // PML_DESIGN_HPP
