#include "pml/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pml/estimation.hpp"
#include "pml/rng.hpp"

namespace pml {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (m_grid.empty() || eps_grid.empty()) {
    throw std::invalid_argument("experiment config: empty grid");
  }
  for (std::uint64_t m : m_grid) {
    if (m == 0) throw std::invalid_argument("experiment config: m must be positive");
  }
  for (double e : eps_grid) {
    if (!(e > 0.0)) throw std::invalid_argument("experiment config: eps must be positive");
  }
  if (!(delta >= 0.0) || delta >= 1.0) {
    throw std::invalid_argument("experiment config: delta must lie in [0, 1)");
  }
  if (iterations == 0) {
    throw std::invalid_argument("experiment config: need at least one iteration");
  }
}

BinaryColumn ingest_csv(const std::string& path, const std::string& column,
                        const std::string& positive_label) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("ingest_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("ingest_csv: empty file");
  const auto header = split_csv_line(line);
  std::size_t col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == column) col = i;
  }
  if (col == header.size()) {
    throw std::invalid_argument("ingest_csv: no column named '" + column + "'");
  }

  BinaryColumn out;
  out.name = column;
  std::string negative_label;
  bool have_negative = false;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (col >= fields.size()) {
      throw std::invalid_argument("ingest_csv: short row " + std::to_string(row));
    }
    const std::string& v = fields[col];
    if (v == positive_label) {
      out.values.push_back(1);
    } else {
      if (!have_negative) {
        negative_label = v;
        have_negative = true;
      } else if (v != negative_label) {
        throw std::invalid_argument("ingest_csv: column '" + column +
                                    "' has more than two labels");
      }
      out.values.push_back(-1);
    }
  }
  if (out.values.empty()) throw std::invalid_argument("ingest_csv: no data rows");
  return out;
}

BinaryColumn threshold_decode(const std::vector<double>& perturbed) {
  BinaryColumn out;
  out.name = "decoded";
  out.values.reserve(perturbed.size());
  for (double v : perturbed) out.values.push_back(v < 0.0 ? -1 : 1);
  return out;
}

double empirical_mutual_information(const BinaryColumn& x, const BinaryColumn& y) {
  if (x.values.size() != y.values.size() || x.values.empty()) {
    throw std::invalid_argument("empirical_mutual_information: size mismatch");
  }
  const std::size_t m = x.values.size();
  double joint[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t i = 0; i < m; ++i) {
    joint[x.values[i] > 0][y.values[i] > 0] += 1.0;
  }
  const double rx[2] = {joint[0][0] + joint[0][1], joint[1][0] + joint[1][1]};
  const double cy[2] = {joint[0][0] + joint[1][0], joint[0][1] + joint[1][1]};
  double mi = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double c = joint[a][b];
      if (c == 0.0) continue;
      mi += (c / static_cast<double>(m)) *
            std::log(c * static_cast<double>(m) / (rx[a] * cy[b]));
    }
  }
  return std::max(mi, 0.0);
}

std::vector<ExperimentCell> run_laplace_experiment(const BinaryColumn& data,
                                                   const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t total = data.values.size();
  for (std::uint64_t m : cfg.m_grid) {
    if (m > total) {
      throw std::invalid_argument("run_laplace_experiment: m exceeds data size");
    }
  }
  const std::size_t nm = cfg.m_grid.size();
  const std::size_t ne = cfg.eps_grid.size();

  // mis[(mi * ne + ei) * 2 + arm]; arm 0 = pml, arm 1 = ldp.
  std::vector<std::vector<double>> mis(nm * ne * 2);
  std::vector<std::size_t> failed(nm * ne * 2, 0);

  std::vector<int> perm(data.values);
  std::vector<double> unit(0), perturbed(0);
  for (std::size_t iter = 0; iter < cfg.iterations; ++iter) {
    // Shuffle seed is base seed + iteration; noise uses derived substreams.
    SplitMix64Rng shuffle_rng(cfg.seed + iter);
    perm.assign(data.values.begin(), data.values.end());
    for (std::size_t i = total - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(shuffle_rng.below(i + 1));
      std::swap(perm[i], perm[j]);
    }

    for (std::size_t mi = 0; mi < nm; ++mi) {
      const std::uint64_t m = cfg.m_grid[mi];
      BinaryColumn truth;
      truth.name = data.name;
      truth.values.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(m));
      std::size_t plus = 0;
      for (int v : truth.values) plus += (v > 0);
      const double p_hat_min =
          std::min(plus, m - plus) / static_cast<double>(m);

      for (std::size_t ei = 0; ei < ne; ++ei) {
        const double eps = cfg.eps_grid[ei];
        // Unit-scale noise shared by both arms so the delta = 0 PML arm is
        // bit-identical to the LDP arm.
        SplitMix64Rng noise_rng = SplitMix64Rng::substream(
            cfg.seed, cfg.iterations + (iter * nm + mi) * ne + ei);
        unit.resize(m);
        for (double& v : unit) v = noise_rng.laplace(1.0);

        double b_arm[2];
        bool ok_arm[2] = {true, true};
        b_arm[1] = 2.0 / eps;  // LDP baseline
        if (cfg.delta <= 0.0) {
          b_arm[0] = 2.0 / eps;
        } else if (p_hat_min <= 0.0 ||
                   p_hat_min - beta_star(cfg.delta, m, 2) / 2.0 <= 0.0) {
          ok_arm[0] = false;  // insufficient samples: the ball hits the boundary
        } else {
          try {
            b_arm[0] = laplace_scale_for_target(eps, cfg.delta, m, p_hat_min);
          } catch (const std::domain_error&) {
            ok_arm[0] = false;  // eps not attainable at this effective p_min
          }
        }

        for (int arm = 0; arm < 2; ++arm) {
          const std::size_t cell = (mi * ne + ei) * 2 + static_cast<std::size_t>(arm);
          if (!ok_arm[arm]) {
            ++failed[cell];
            continue;
          }
          perturbed.resize(m);
          for (std::size_t j = 0; j < m; ++j) {
            perturbed[j] = static_cast<double>(truth.values[j]) + b_arm[arm] * unit[j];
          }
          mis[cell].push_back(
              empirical_mutual_information(truth, threshold_decode(perturbed)));
        }
      }
    }
  }

  std::vector<ExperimentCell> out;
  out.reserve(nm * ne * 2);
  for (std::size_t mi = 0; mi < nm; ++mi) {
    for (std::size_t ei = 0; ei < ne; ++ei) {
      for (int arm = 0; arm < 2; ++arm) {
        const std::size_t cell = (mi * ne + ei) * 2 + static_cast<std::size_t>(arm);
        ExperimentCell row;
        row.feature = data.name;
        row.m = cfg.m_grid[mi];
        row.eps = cfg.eps_grid[ei];
        row.arm = (arm == 0) ? "pml" : "ldp";
        row.cells_failed = failed[cell];
        const auto& vals = mis[cell];
        if (vals.empty()) {
          row.mi_mean = kNaN;
          row.mi_std = kNaN;
        } else {
          double sum = 0.0;
          for (double v : vals) sum += v;
          const double mean = sum / static_cast<double>(vals.size());
          double ss = 0.0;
          for (double v : vals) ss += (v - mean) * (v - mean);
          row.mi_mean = mean;
          row.mi_std = std::sqrt(ss / static_cast<double>(vals.size()));
        }
        out.push_back(std::move(row));
      }
    }
  }
  return out;
}

namespace {

/// delta such that the pLDP Gaussian needs exactly this sigma at eps; 1 when
/// the target sigma is below the delta -> 1 limit sqrt(2 / eps).
double pldp_delta_for_sigma(double eps, double sigma) {
  if (!(sigma > std::sqrt(2.0 / eps))) return 1.0;
  // sigma(delta) is continuous and strictly decreasing; bisect on log delta.
  double lo = std::log(1e-300), hi = std::log(1.0 - 1e-12);
  if (pldp_sigma(eps, std::exp(lo)) < sigma) return std::exp(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (pldp_sigma(eps, std::exp(mid)) > sigma ? lo : hi) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace

std::vector<GaussianCurveResult> run_gaussian_curves(const GaussianCurveConfig& cfg) {
  if (cfg.sigmas.empty() || cfg.m_grid.empty() || cfg.eps_grid.empty()) {
    throw std::invalid_argument("run_gaussian_curves: empty grid");
  }
  if (!(cfg.delta2 > 0.0) || cfg.delta2 >= 1.0) {
    throw std::invalid_argument("run_gaussian_curves: delta2 must lie in (0, 1)");
  }
  if (!(cfg.p_hat > 0.0) || !(cfg.p_hat < 1.0)) {
    throw std::invalid_argument("run_gaussian_curves: p_hat must lie in (0, 1)");
  }
  for (double s : cfg.sigmas) {
    if (!(s > 0.0)) throw std::invalid_argument("run_gaussian_curves: sigma > 0");
  }

  std::vector<GaussianCurveResult> out;
  for (double sigma : cfg.sigmas) {
    for (std::uint64_t m : cfg.m_grid) {
      GaussianCurveResult res;
      res.sigma = sigma;
      res.m = m;
      res.pml.m = m;
      res.pml.sigma_or_b = sigma;
      res.pml.delta2 = cfg.delta2;
      const double beta = beta_star(cfg.delta2, m, 2);
      res.pml.beta = beta;
      for (double eps : cfg.eps_grid) {
        const double arg = 1.0 - beta * std::exp(eps) / 2.0;
        if (!(arg > 0.0)) {
          res.infeasible_eps.push_back(eps);
          continue;
        }
        const UncertaintySet ball(Distribution({cfg.p_hat, 1.0 - cfg.p_hat}), beta);
        const double delta1 = gaussian_delta1(eps, sigma, ball);
        CurvePoint pt;
        pt.eps_design = eps;
        pt.delta1 = delta1;
        pt.delta2 = cfg.delta2;
        pt.eps_star = eps - std::log(arg);
        pt.delta_star = delta1 + cfg.delta2 - delta1 * cfg.delta2;
        res.pml.points.push_back(pt);

        CurvePoint base;
        base.eps_star = pt.eps_star;
        base.eps_design = pt.eps_star;
        base.delta1 = 0.0;
        base.delta2 = 0.0;
        base.delta_star = pldp_delta_for_sigma(pt.eps_star, sigma);
        res.pldp.push_back(base);
      }
      out.push_back(std::move(res));
    }
  }
  return out;
}

BinaryColumn synth_binary_source(double p, std::size_t m, std::uint64_t seed) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::invalid_argument("synth_binary_source: p must lie in (0, 1)");
  }
  if (m == 0) throw std::invalid_argument("synth_binary_source: m must be positive");
  SplitMix64Rng rng(seed);
  BinaryColumn out;
  out.name = "synthetic";
  out.values.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.values.push_back(rng.uniform() < p ? 1 : -1);
  return out;
}

std::string format_result_csv(const std::vector<ExperimentCell>& cells) {
  std::string s = "feature,m,eps,arm,mi_mean,mi_std,cells_failed\n";
  for (const ExperimentCell& c : cells) {
    s += c.feature + ',' + std::to_string(c.m) + ',' + fmt17(c.eps) + ',' + c.arm +
         ',' + fmt17(c.mi_mean) + ',' + fmt17(c.mi_std) + ',' +
         std::to_string(c.cells_failed) + '\n';
  }
  return s;
}

std::string format_curve_csv(const std::vector<CurvePoint>& points) {
  std::string s = "eps_star,delta_star,eps_design,delta1,delta2\n";
  for (const CurvePoint& p : points) {
    s += fmt17(p.eps_star) + ',' + fmt17(p.delta_star) + ',' + fmt17(p.eps_design) +
         ',' + fmt17(p.delta1) + ',' + fmt17(p.delta2) + '\n';
  }
  return s;
}

std::string format_curve_csv(const EpsDeltaCurve& curve) {
  return format_curve_csv(curve.points);
}

}  // namespace pml
