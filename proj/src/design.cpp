#include "pml/design.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pml/leakage.hpp"

namespace pml {

namespace {

constexpr double kVertexTol = 1e-9;

double mi_utility(const Mechanism& mech, const Distribution& prior) {
  return mutual_information(mech, prior);
}

}  // namespace

DesignProblem::DesignProblem(Distribution est, double b, double e, UtilityKind kind,
                             UtilityFn custom)
    : estimate(std::move(est)), beta(b), eps(e), utility(kind),
      custom_utility(std::move(custom)) {
  if (!(beta >= 0.0) || !(beta < 2.0 * estimate.min_mass())) {
    throw std::domain_error("DesignProblem: require 0 <= beta < 2 min_x estimate(x)");
  }
  if (eps < 0.0) {
    throw std::invalid_argument("DesignProblem: eps must be nonnegative");
  }
  if (utility == UtilityKind::custom_sublinear && !custom_utility) {
    throw std::invalid_argument("DesignProblem: custom utility function missing");
  }
}

UtilityFn DesignProblem::utility_fn() const {
  if (utility == UtilityKind::custom_sublinear) return custom_utility;
  return mi_utility;
}

double mutual_information(const Mechanism& mech, const Distribution& prior) {
  const std::vector<double> py = mech.output_dist(prior);
  double mi = 0.0;
  for (std::size_t j = 0; j < mech.num_outputs(); ++j) {
    if (py[j] < kMassFloor) continue;
    for (std::size_t i = 0; i < mech.num_inputs(); ++i) {
      const double joint = prior(i) * mech(i, j);
      if (joint < kMassFloor) continue;
      mi += joint * std::log(mech(i, j) / py[j]);
    }
  }
  return std::max(mi, 0.0);
}

Mechanism optimal_binary_mechanism(double p1, double beta, double eps) {
  if (!(p1 >= 0.5) || !(p1 < 1.0)) {
    throw std::invalid_argument(
        "optimal_binary_mechanism: require p1 in [0.5, 1); reorder the alphabet first");
  }
  // beta = 2(1 - p1) is allowed: with p1 = 0.5 it makes the ball the whole
  // simplex and the construction degrades to randomized response.
  if (!(beta >= 0.0) || !(beta <= 2.0 * (1.0 - p1))) {
    throw std::domain_error("optimal_binary_mechanism: require beta <= 2 (1 - p1)");
  }
  const double worst_p1 = p1 - beta / 2.0;
  if (eps < 0.0 || (worst_p1 > 0.0 && eps > -std::log(worst_p1))) {
    throw std::domain_error(
        "optimal_binary_mechanism: eps outside the first privacy region for the ball");
  }
  const double s = std::exp(eps);
  const double norm = 1.0 + beta * s;
  std::vector<std::vector<double>> rows = {
      {s * (1.0 - p1 + beta / 2.0) / norm, (1.0 - s * (1.0 - p1 - beta / 2.0)) / norm},
      {(1.0 - s * (p1 - beta / 2.0)) / norm, s * (p1 + beta / 2.0) / norm}};
  return Mechanism(std::move(rows));
}

double eps_prime_transform(double eps, double beta) {
  if (eps < 0.0 || beta < 0.0 || beta >= 2.0) {
    throw std::invalid_argument("eps_prime_transform: require eps >= 0, beta in [0,2)");
  }
  const double s = std::exp(eps);
  return std::log(s / (1.0 + beta / 2.0 * s));
}

ConstraintSet lccp_constraints(const DesignProblem& problem) {
  const std::size_t n = problem.estimate.size();
  ConstraintSet set(problem.estimate);
  set.n = n;
  set.eps = problem.eps;
  set.beta = problem.beta;
  set.eps_prime = eps_prime_transform(problem.eps, problem.beta);
  const double gain = std::exp(set.eps_prime);

  const auto var = [n](std::size_t i, std::size_t j) { return i * n + j; };

  set.inequalities.reserve(n * n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t ip = 0; ip < n; ++ip) {
      for (std::size_t j = 0; j < n; ++j) {
        LinearConstraint c{std::vector<double>(n * n, 0.0), 0.0, false};
        c.coeffs[var(i, j)] += 1.0;
        for (std::size_t k = 0; k < n; ++k) {
          c.coeffs[var(k, j)] -= gain * problem.estimate(k);
        }
        c.coeffs[var(ip, j)] -= gain * problem.beta / 2.0;
        set.inequalities.push_back(std::move(c));
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    LinearConstraint c{std::vector<double>(n * n, 0.0), 1.0, true};
    for (std::size_t j = 0; j < n; ++j) c.coeffs[var(i, j)] = 1.0;
    set.equalities.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      LinearConstraint c{std::vector<double>(n * n, 0.0), 0.0, false};
      c.coeffs[var(i, j)] = -1.0;
      set.bounds.push_back(std::move(c));
    }
  }
  return set;
}

double ConstraintSet::max_violation(const Mechanism& mech) const {
  std::vector<double> x(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) x[i * n + j] = mech(i, j);
  }
  const auto dot = [&x](const LinearConstraint& c) {
    return std::inner_product(c.coeffs.begin(), c.coeffs.end(), x.begin(), 0.0);
  };
  double worst = 0.0;
  for (const auto& c : inequalities) worst = std::max(worst, dot(c) - c.rhs);
  for (const auto& c : bounds) worst = std::max(worst, dot(c) - c.rhs);
  for (const auto& c : equalities) worst = std::max(worst, std::abs(dot(c) - c.rhs));
  return worst;
}

MembershipResult membership_check(const Mechanism& mech, const DesignProblem& problem) {
  const std::size_t n = problem.estimate.size();
  if (mech.num_inputs() != n || mech.num_outputs() != n) {
    throw std::invalid_argument("membership_check: mechanism shape does not match problem");
  }
  const ConstraintSet set = lccp_constraints(problem);
  const double violation = set.max_violation(mech);
  return {violation <= kVertexTol, violation};
}

// ---------------------------------------------------------------------------
// Vertex enumeration: double description over the reduced coordinates
// x_(i,j) = p_ij for j < N-1, with p_i(N-1) eliminated via the row sums.
// ---------------------------------------------------------------------------

namespace {

struct ReducedConstraint {
  std::vector<double> a;  // dimension N(N-1)
  double b;
};

struct Vertex {
  std::vector<double> x;
  std::vector<int> active;  // sorted constraint ids
};

ReducedConstraint reduce(const LinearConstraint& c, std::size_t n) {
  const std::size_t d = n * (n - 1);
  ReducedConstraint r{std::vector<double>(d, 0.0), c.rhs};
  for (std::size_t i = 0; i < n; ++i) {
    const double last = c.coeffs[i * n + (n - 1)];
    r.b -= last;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      r.a[i * (n - 1) + j] = c.coeffs[i * n + j] - last;
    }
  }
  return r;
}

std::size_t matrix_rank(std::vector<std::vector<double>> rows) {
  std::size_t rank = 0;
  const std::size_t d = rows.empty() ? 0 : rows[0].size();
  for (std::size_t col = 0; col < d && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (std::abs(rows[r][col]) > std::abs(rows[pivot][col])) pivot = r;
    }
    if (std::abs(rows[pivot][col]) < 1e-9) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank) continue;
      const double f = rows[r][col] / rows[rank][col];
      if (f == 0.0) continue;
      for (std::size_t cc = col; cc < d; ++cc) rows[r][cc] -= f * rows[rank][cc];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

std::vector<Mechanism> enumerate_vertices(const ConstraintSet& constraints) {
  const std::size_t n = constraints.n;
  if (n > 6) {
    throw std::invalid_argument("enumerate_vertices: exhaustive mode limited to N <= 6");
  }
  const std::size_t d = n * (n - 1);

  // Constraint ids: [0, d) nonnegativity of the reduced entries, [d, d+n) the
  // eliminated-column nonnegativity (partial row sums <= 1), then the leakage
  // inequalities.
  std::vector<ReducedConstraint> cons;
  cons.reserve(d + n + constraints.inequalities.size());
  for (std::size_t r = 0; r < d; ++r) {
    ReducedConstraint c{std::vector<double>(d, 0.0), 0.0};
    c.a[r] = -1.0;
    cons.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < n; ++i) {
    ReducedConstraint c{std::vector<double>(d, 0.0), 1.0};
    for (std::size_t j = 0; j + 1 < n; ++j) c.a[i * (n - 1) + j] = 1.0;
    cons.push_back(std::move(c));
  }
  const std::size_t n_base = cons.size();
  for (const auto& c : constraints.inequalities) cons.push_back(reduce(c, n));

  // Initial vertex set: product of the per-row simplices, i.e. every 0/1
  // matrix with at most one unit entry per reduced row block.
  std::vector<Vertex> verts;
  {
    std::vector<int> choice(n, -1);
    for (;;) {
      Vertex v;
      v.x.assign(d, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j + 1 < n; ++j) {
          const int id = static_cast<int>(i * (n - 1) + j);
          if (choice[i] == static_cast<int>(j)) continue;
          v.active.push_back(id);
        }
        if (choice[i] >= 0) {
          v.x[i * (n - 1) + choice[i]] = 1.0;
          v.active.push_back(static_cast<int>(d + i));
        }
      }
      std::sort(v.active.begin(), v.active.end());
      verts.push_back(std::move(v));
      std::size_t pos = 0;
      while (pos < n && ++choice[pos] == static_cast<int>(n - 1)) choice[pos++] = -1;
      if (pos == n) break;
    }
  }

  const auto eval = [&](const ReducedConstraint& c, const std::vector<double>& x) {
    return std::inner_product(c.a.begin(), c.a.end(), x.begin(), 0.0) - c.b;
  };
  const auto recompute_active = [&](const std::vector<double>& x, std::size_t upto) {
    std::vector<int> active;
    for (std::size_t cid = 0; cid < upto; ++cid) {
      if (std::abs(eval(cons[cid], x)) <= kVertexTol) {
        active.push_back(static_cast<int>(cid));
      }
    }
    return active;
  };

  for (std::size_t cid = n_base; cid < cons.size(); ++cid) {
    const ReducedConstraint& c = cons[cid];
    std::vector<double> slack(verts.size());
    std::vector<std::size_t> pos_idx, neg_idx;
    for (std::size_t v = 0; v < verts.size(); ++v) {
      slack[v] = eval(c, verts[v].x);
      if (slack[v] > kVertexTol) {
        pos_idx.push_back(v);
      } else if (slack[v] < -kVertexTol) {
        neg_idx.push_back(v);
      } else {
        verts[v].active.push_back(static_cast<int>(cid));
      }
    }
    if (pos_idx.empty()) continue;

    // Copy survivors: the pair loop below still reads verts[nv].
    std::vector<Vertex> next;
    next.reserve(verts.size());
    for (std::size_t v = 0; v < verts.size(); ++v) {
      if (slack[v] <= kVertexTol) next.push_back(verts[v]);
    }
    const auto is_new = [&](const std::vector<double>& x) {
      for (const Vertex& w : next) {
        double dist = 0.0;
        for (std::size_t r = 0; r < d; ++r) dist = std::max(dist, std::abs(w.x[r] - x[r]));
        if (dist < 1e-8) return false;
      }
      return true;
    };
    for (std::size_t pv : pos_idx) {
      for (std::size_t nv : neg_idx) {
        // Adjacency: the common active constraints must span a (d-1)-face.
        std::vector<int> common;
        std::set_intersection(verts[pv].active.begin(), verts[pv].active.end(),
                              verts[nv].active.begin(), verts[nv].active.end(),
                              std::back_inserter(common));
        if (common.size() + 1 < d) continue;
        std::vector<std::vector<double>> normals;
        normals.reserve(common.size());
        for (int id : common) normals.push_back(cons[id].a);
        if (matrix_rank(std::move(normals)) != d - 1) continue;

        const double lambda = -slack[nv] / (slack[pv] - slack[nv]);
        std::vector<double> x(d);
        for (std::size_t r = 0; r < d; ++r) {
          x[r] = verts[nv].x[r] + lambda * (verts[pv].x[r] - verts[nv].x[r]);
        }
        if (!is_new(x)) continue;
        Vertex fresh;
        fresh.active = recompute_active(x, cid + 1);
        fresh.x = std::move(x);
        next.push_back(std::move(fresh));
      }
    }
    verts = std::move(next);
  }

  std::vector<Mechanism> out;
  out.reserve(verts.size());
  for (const Vertex& v : verts) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      double partial = 0.0;
      for (std::size_t j = 0; j + 1 < n; ++j) {
        rows[i][j] = std::clamp(v.x[i * (n - 1) + j], 0.0, 1.0);
        partial += rows[i][j];
      }
      rows[i][n - 1] = std::clamp(1.0 - partial, 0.0, 1.0);
      const double sum = std::accumulate(rows[i].begin(), rows[i].end(), 0.0);
      if (std::abs(sum - 1.0) > kVertexTol) {
        throw std::runtime_error("enumerate_vertices: row renormalization drift > 1e-9");
      }
      for (double& p : rows[i]) p /= sum;
    }
    out.emplace_back(std::move(rows));
  }
  std::sort(out.begin(), out.end(), [](const Mechanism& a, const Mechanism& b) {
    return a.matrix() < b.matrix();
  });
  return out;
}

Mechanism vertex_search(const ConstraintSet& constraints, const UtilityFn& utility,
                        const Distribution& estimate) {
  const std::vector<Mechanism> vertices = enumerate_vertices(constraints);
  if (vertices.empty()) {
    throw std::runtime_error("vertex_search: empty vertex set");
  }
  // Vertices are lexicographically sorted, so keeping a strict improvement
  // yields the lexicographically smallest argmax.
  std::size_t best = 0;
  double best_utility = utility(vertices[0], estimate);
  for (std::size_t v = 1; v < vertices.size(); ++v) {
    const double u = utility(vertices[v], estimate);
    if (u > best_utility + 1e-12) {
      best = v;
      best_utility = u;
    }
  }
  return vertices[best];
}

Mechanism k_singular_mechanism(std::size_t n, std::size_t k) {
  if (k == 0 || n % k != 0) {
    throw std::invalid_argument("k_singular_mechanism: k must divide N");
  }
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < k; ++t) {
      rows[i][(i + t) % n] = 1.0 / static_cast<double>(k);
    }
  }
  return Mechanism(std::move(rows));
}

DesignResult design_via_fixed_estimate(const DesignProblem& problem) {
  const std::size_t n = problem.estimate.size();
  const double eps_prime = eps_prime_transform(problem.eps, problem.beta);

  const auto finish = [&](Mechanism mech) {
    const MembershipResult check = membership_check(mech, problem);
    if (!check.member) {
      throw std::runtime_error("design_via_fixed_estimate: designed mechanism failed "
                               "membership re-validation");
    }
    return DesignResult{std::move(mech), problem.eps, problem.beta, eps_prime,
                        "fixed_estimate"};
  };

  if (eps_prime <= kProbTol) {
    // No leakage allowed: independent output, uniform rows.
    std::vector<std::vector<double>> rows(
        n, std::vector<double>(n, 1.0 / static_cast<double>(n)));
    return finish(Mechanism(std::move(rows)));
  }

  // Uniform estimate with e^eps' = N/k: the k-singular mechanism is the
  // known optimum for sub-convex utilities.
  const bool uniform =
      std::all_of(problem.estimate.probs().begin(), problem.estimate.probs().end(),
                  [&](double p) { return std::abs(p - 1.0 / n) <= kProbTol; });
  if (uniform) {
    for (std::size_t k = 1; k <= n; ++k) {
      if (n % k != 0) continue;
      const double target = std::log(static_cast<double>(n) / static_cast<double>(k));
      if (std::abs(eps_prime - target) <= 1e-9) {
        return finish(k_singular_mechanism(n, k));
      }
    }
  }

  if (n > 6) {
    throw std::domain_error(
        "design_via_fixed_estimate: N > 6 requires a uniform estimate with "
        "eps' = log(N/k); use the closed-form path for binary problems");
  }
  DesignProblem fixed(problem.estimate, 0.0, eps_prime, problem.utility,
                      problem.custom_utility);
  const ConstraintSet cons = lccp_constraints(fixed);
  return finish(vertex_search(cons, problem.utility_fn(), problem.estimate));
}

}  // namespace pml
