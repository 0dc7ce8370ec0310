#ifndef PML_TYPES_HPP
#define PML_TYPES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pml {

/// Tolerance for simplex membership and row-stochasticity checks.
/// All probability comparisons in the library go through this constant.
inline constexpr double kProbTol = 1e-12;

/// Probabilities below this are treated as zero to avoid log overflow.
inline constexpr double kMassFloor = 1e-300;

/// Probability mass function on a finite alphabet {1, ..., N}, N >= 2.
class Distribution {
 public:
  explicit Distribution(std::vector<double> probs);

  static Distribution uniform(std::size_t n);

  const std::vector<double>& probs() const { return probs_; }
  double operator()(std::size_t i) const { return probs_[i]; }
  std::size_t size() const { return probs_.size(); }

  double min_mass() const;
  /// True iff every symbol has strictly positive mass (interior of the simplex).
  bool full_support() const;

 private:
  std::vector<double> probs_;
};

/// Per-symbol occurrence counts from m i.i.d. samples.
struct SampleSet {
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const;
};

/// l1-ball of radius beta around a center distribution.
struct UncertaintySet {
  Distribution center;
  double radius_beta;

  UncertaintySet(Distribution c, double beta);

  /// Precondition of the sensitivity bounds: beta < 2 * min_x center(x).
  bool feasible_for_bounds() const {
    return radius_beta < 2.0 * center.min_mass();
  }
};

/// Row-stochastic conditional probability matrix P_{Y|X}.
class Mechanism {
 public:
  Mechanism(std::vector<std::vector<double>> matrix);

  static Mechanism identity(std::size_t n);

  const std::vector<std::vector<double>>& matrix() const { return rows_; }
  double operator()(std::size_t i, std::size_t j) const { return rows_[i][j]; }
  std::size_t num_inputs() const { return rows_.size(); }
  std::size_t num_outputs() const { return rows_.empty() ? 0 : rows_[0].size(); }

  /// Output distribution P_Y = P_{Y|X} o prior.
  std::vector<double> output_dist(const Distribution& prior) const;

 private:
  std::vector<std::vector<double>> rows_;
};

enum class Provenance { exact, l1_bound, lipschitz_bound, composed };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

/// (eps, delta) pair with a record of which bound produced it.
struct PrivacyGuarantee {
  double eps = 0.0;
  double delta = 0.0;
  Provenance provenance = Provenance::exact;
};

}  // namespace pml

#endif  // PML_TYPES_HPP
