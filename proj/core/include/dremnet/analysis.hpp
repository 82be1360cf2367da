#pragma once

// Exact moment recursions for the estimation error theta_hat - theta under
// deterministic regressors and graph.
//
// At an effective update of sensor i (gated sum S > 0), with
//   beta = alpha S / (mu + S),  eps_l = (alpha / (mu + S))^2 sum_j delta_j^2 var[vbar_jl],
//   mean'     = (1 - beta) mean
//   cov'      = (1 - beta)^2 cov + eps_l     (exact, noise windows disjoint)
//   bound'    = (1 - beta) cov_bound + eps_l (dominates cov)
// Moments are held between updates.

#include <string>
#include <vector>

#include "dremnet/scenario.hpp"

namespace dremnet {

double beta(double alpha, double mu, double gated_sum);

/// R * |row l of adj(phi)|^2, the variance of channel l of the mixed noise.
double mixed_noise_variance(const Matrix& phi, double noise_variance, std::size_t channel);

struct StepCoefficients {
  Step k = 0;
  SensorIndex sensor = 0;
  double alpha = 0.0;
  double gated_sum = 0.0;
  double beta = 0.0;
  Vector epsilon;  // per channel
};

struct MomentTrajectory {
  Step horizon = 0;
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> mean;       // [(k * n + i) * d + l]
  std::vector<double> cov_exact;  // same layout
  std::vector<double> cov_bound;  // same layout
  std::vector<StepCoefficients> updates;
  double adjugate_row_bound = 0.0;  // max |row l of adj Phi_i(k)| over the horizon

  std::size_t at(Step k, SensorIndex i, std::size_t l) const {
    return (static_cast<std::size_t>(k) * n + i) * d + l;
  }
};

MomentTrajectory moment_recursions(const Scenario& s, Step horizon);

/// Mean component only, same layout as MomentTrajectory::mean.
std::vector<double> mean_recursion(const Scenario& s, Step horizon);

struct CovarianceTrajectory {
  std::vector<double> exact;
  std::vector<double> bound;
};
CovarianceTrajectory covariance_recursion(const Scenario& s, Step horizon);

struct TheoremThresholds {
  double mean_tolerance = 1e-2;
  double covariance_tolerance = 1e-2;
  double pe_omega = 1.0;
  std::size_t pe_max_window = 50;
};

struct TheoremReport {
  std::vector<std::string> violations;  // assumption violations
  bool regressors_bounded = false;
  bool local_pe = false;
  bool step_size_ok = false;

  double final_max_abs_mean = 0.0;
  double final_max_covariance = 0.0;
  bool mean_converged = false;
  bool covariance_converged = false;

  /// max over effective updates of (eps / beta) / (C alpha / mu); <= 1 when the bound holds.
  double max_eps_beta_ratio = 0.0;
  double noise_constant = 0.0;  // C = B^2 max_l R_l
  bool eps_beta_bound_holds = true;

  bool assumptions_hold() const { return regressors_bounded && local_pe && step_size_ok; }
  bool pass() const {
    return assumptions_hold() && mean_converged && covariance_converged && eps_beta_bound_holds;
  }
};

TheoremReport theorem_check(const Scenario& s, Step horizon, const TheoremThresholds& thresholds = {});

}  // namespace dremnet
