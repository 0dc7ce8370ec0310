#ifndef PML_EXPERIMENTS_HPP
#define PML_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pml/additive.hpp"
#include "pml/types.hpp"

namespace pml {

/// Column of {-1, +1} values with a label.
struct BinaryColumn {
  std::vector<int> values;
  std::string name;
};

struct ExperimentConfig {
  std::vector<std::uint64_t> m_grid;
  std::vector<double> eps_grid;
  double delta = 1e-9;
  std::size_t iterations = 100;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ExperimentCell {
  std::string feature;
  std::uint64_t m;
  double eps;
  std::string arm;  // "pml" | "ldp"
  double mi_mean;
  double mi_std;
  std::size_t cells_failed;
};

/// Reads the named column of a headered CSV file and maps positive_label to
/// +1 and the (single) other label to -1, preserving row order.
BinaryColumn ingest_csv(const std::string& path, const std::string& column,
                        const std::string& positive_label);

/// Binary decision on perturbed reals: -1 below zero, +1 otherwise.
BinaryColumn threshold_decode(const std::vector<double>& perturbed);

/// Plug-in mutual information of the empirical 2x2 contingency table, nats.
double empirical_mutual_information(const BinaryColumn& x, const BinaryColumn& y);

/// Shuffle / estimate / calibrate / perturb / decode protocol comparing
/// PML-calibrated Laplace noise against the b = 2/eps LDP baseline.
std::vector<ExperimentCell> run_laplace_experiment(const BinaryColumn& data,
                                                   const ExperimentConfig& cfg);

struct GaussianCurveResult {
  double sigma = 0.0;
  std::uint64_t m = 0;
  EpsDeltaCurve pml;
  /// pLDP baseline delta at each matched eps_star (1 when unattainable).
  std::vector<CurvePoint> pldp;
  std::vector<double> infeasible_eps;
};

struct GaussianCurveConfig {
  std::vector<double> sigmas;
  std::vector<std::uint64_t> m_grid;
  std::vector<double> eps_grid;
  double delta2 = 1e-6;
  double p_hat = 0.5;  // estimated mass of x = -1
};

std::vector<GaussianCurveResult> run_gaussian_curves(const GaussianCurveConfig& cfg);

/// i.i.d. source with P(+1) = p; deterministic per seed.
BinaryColumn synth_binary_source(double p, std::size_t m, std::uint64_t seed);

std::string format_result_csv(const std::vector<ExperimentCell>& cells);
std::string format_curve_csv(const EpsDeltaCurve& curve);
std::string format_curve_csv(const std::vector<CurvePoint>& points);

}  // namespace pml

#endif  // PML_EXPERIMENTS_HPP
