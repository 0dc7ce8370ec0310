#include "pml/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pml {

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) {
    throw std::invalid_argument("Distribution: alphabet size must be >= 2");
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) {
      throw std::invalid_argument("Distribution: negative probability mass");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("Distribution: masses sum to " + std::to_string(sum));
  }
  // Small drift (accumulated rounding up to 1e-9) is renormalized so that
  // downstream simplex checks against kProbTol hold exactly.
  if (std::abs(sum - 1.0) > kProbTol) {
    for (double& p : probs_) p /= sum;
  }
}

Distribution Distribution::uniform(std::size_t n) {
  return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double Distribution::min_mass() const {
  return *std::min_element(probs_.begin(), probs_.end());
}

bool Distribution::full_support() const { return min_mass() > 0.0; }

std::uint64_t SampleSet::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

UncertaintySet::UncertaintySet(Distribution c, double beta)
    : center(std::move(c)), radius_beta(beta) {
  if (beta < 0.0) {
    throw std::invalid_argument("UncertaintySet: negative radius");
  }
}

Mechanism::Mechanism(std::vector<std::vector<double>> matrix) : rows_(std::move(matrix)) {
  if (rows_.empty() || rows_[0].empty()) {
    throw std::invalid_argument("Mechanism: empty matrix");
  }
  const std::size_t m = rows_[0].size();
  for (const auto& row : rows_) {
    if (row.size() != m) {
      throw std::invalid_argument("Mechanism: ragged matrix");
    }
    double sum = 0.0;
    for (double p : row) {
      if (p < -kProbTol || p > 1.0 + kProbTol) {
        throw std::invalid_argument("Mechanism: entry outside [0,1]");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument("Mechanism: row sums to " + std::to_string(sum));
    }
  }
}

Mechanism Mechanism::identity(std::size_t n) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1.0;
  return Mechanism(std::move(rows));
}

std::vector<double> Mechanism::output_dist(const Distribution& prior) const {
  if (prior.size() != num_inputs()) {
    throw std::invalid_argument("output_dist: prior size does not match mechanism");
  }
  std::vector<double> py(num_outputs(), 0.0);
  for (std::size_t i = 0; i < num_inputs(); ++i) {
    for (std::size_t j = 0; j < num_outputs(); ++j) {
      py[j] += prior(i) * rows_[i][j];
    }
  }
  return py;
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::exact: return "exact";
    case Provenance::l1_bound: return "l1_bound";
    case Provenance::lipschitz_bound: return "lipschitz_bound";
    case Provenance::composed: return "composed";
  }
  return "exact";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "exact") return Provenance::exact;
  if (s == "l1_bound") return Provenance::l1_bound;
  if (s == "lipschitz_bound") return Provenance::lipschitz_bound;
  if (s == "composed") return Provenance::composed;
  throw std::invalid_argument("unknown provenance: " + s);
}

}  // namespace pml
