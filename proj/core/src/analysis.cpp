#include "dremnet/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dremnet/check.hpp"
#include "dremnet/drem.hpp"

namespace dremnet {

double beta(double alpha, double mu, double gated_sum) {
  return alpha * gated_sum / (mu + gated_sum);
}

double mixed_noise_variance(const Matrix& phi, double noise_variance, std::size_t channel) {
  const Matrix adj = adjugate(phi);
  if (channel >= adj.rows()) throw std::invalid_argument("mixed_noise_variance: channel out of range");
  return noise_variance * squared_norm(adj.row(channel));
}

MomentTrajectory moment_recursions(const Scenario& s, Step horizon) {
  validate_scenario(s);
  if (horizon < 0) throw std::invalid_argument("moment_recursions: negative horizon");
  const std::size_t n = s.n, d = s.d;

  MomentTrajectory out;
  out.horizon = horizon;
  out.n = n;
  out.d = d;
  const std::size_t cells = (static_cast<std::size_t>(horizon) + 1) * n * d;
  out.mean.resize(cells);
  out.cov_exact.resize(cells);
  out.cov_bound.resize(cells);

  std::vector<std::vector<Vector>> phis;
  for (const auto& g : s.generators) phis.push_back(g.table(horizon));

  std::vector<double> mean(n * d), cov(n * d, 0.0), bound(n * d, 0.0);
  for (SensorIndex i = 0; i < n; ++i)
    for (std::size_t l = 0; l < d; ++l) mean[i * d + l] = s.theta_hat0[i][l] - s.theta[l];
  std::vector<std::size_t> counter(n, 0);

  std::vector<double> det(n);
  std::vector<Vector> noise_var(n, Vector(d));  // var[vbar_jl(k)]
  std::vector<Vector> history(d);

  for (Step k = 0;; ++k) {
    for (SensorIndex i = 0; i < n; ++i)
      for (std::size_t l = 0; l < d; ++l) {
        const std::size_t c = out.at(k, i, l);
        out.mean[c] = mean[i * d + l];
        out.cov_exact[c] = cov[i * d + l];
        out.cov_bound[c] = bound[i * d + l];
      }
    if (k == horizon) break;

    for (SensorIndex j = 0; j < n; ++j) {
      if (k + 1 < static_cast<Step>(d)) {
        det[j] = 0.0;
        std::fill(noise_var[j].begin(), noise_var[j].end(), 0.0);
        continue;
      }
      for (std::size_t r = 0; r < d; ++r) history[r] = phis[j][k - r];
      const Matrix phi = stack_regressors(history);
      const Matrix adj = adjugate(phi);
      det[j] = determinant(phi);
      for (std::size_t l = 0; l < d; ++l) {
        const double row_sq = squared_norm(adj.row(l));
        out.adjugate_row_bound = std::max(out.adjugate_row_bound, std::sqrt(row_sq));
        noise_var[j][l] = s.noise_variance[j] * row_sq;
      }
    }

    const double alpha = step_size(s.schedule, k);
    for (SensorIndex i = 0; i < n; ++i) {
      const bool open = counter[i] >= d;
      double gated_sum = 0.0;
      Vector driven(d, 0.0);  // sum_j delta_j^2 var[vbar_jl]
      for (SensorIndex j : closed_in_neighborhood(s.graph, i, k)) {
        const double delta = open ? det[j] : 0.0;
        gated_sum += delta * delta;
        for (std::size_t l = 0; l < d; ++l) driven[l] += delta * delta * noise_var[j][l];
      }
      counter[i] = update_counter(counter[i], gated_sum, d);
      if (gated_sum == 0.0) continue;

      StepCoefficients sc{k, i, alpha, gated_sum, beta(alpha, s.mu[i], gated_sum), Vector(d)};
      const double gain = alpha / (s.mu[i] + gated_sum);
      for (std::size_t l = 0; l < d; ++l) {
        const std::size_t c = i * d + l;
        sc.epsilon[l] = gain * gain * driven[l];
        mean[c] *= 1.0 - sc.beta;
        cov[c] = (1.0 - sc.beta) * (1.0 - sc.beta) * cov[c] + sc.epsilon[l];
        bound[c] = (1.0 - sc.beta) * bound[c] + sc.epsilon[l];
      }
      out.updates.push_back(std::move(sc));
    }
  }
  return out;
}

std::vector<double> mean_recursion(const Scenario& s, Step horizon) {
  return moment_recursions(s, horizon).mean;
}

CovarianceTrajectory covariance_recursion(const Scenario& s, Step horizon) {
  auto m = moment_recursions(s, horizon);
  return {std::move(m.cov_exact), std::move(m.cov_bound)};
}

TheoremReport theorem_check(const Scenario& s, Step horizon, const TheoremThresholds& thresholds) {
  TheoremReport rep;
  const ScenarioReport audit =
      check_scenario(s, thresholds.pe_max_window, thresholds.pe_omega, horizon);
  rep.regressors_bounded = audit.regressors_bounded;
  rep.local_pe = audit.local_pe;
  rep.step_size_ok = audit.step_size_ok;
  rep.violations = audit.violations;

  const MomentTrajectory m = moment_recursions(s, horizon);
  for (SensorIndex i = 0; i < s.n; ++i)
    for (std::size_t l = 0; l < s.d; ++l) {
      const std::size_t c = m.at(horizon, i, l);
      rep.final_max_abs_mean = std::max(rep.final_max_abs_mean, std::abs(m.mean[c]));
      rep.final_max_covariance = std::max(rep.final_max_covariance, m.cov_exact[c]);
    }
  rep.mean_converged = rep.final_max_abs_mean <= thresholds.mean_tolerance;
  rep.covariance_converged = rep.final_max_covariance <= thresholds.covariance_tolerance;

  const double max_r = *std::max_element(s.noise_variance.begin(), s.noise_variance.end());
  rep.noise_constant = m.adjugate_row_bound * m.adjugate_row_bound * max_r;
  for (const auto& u : m.updates) {
    const double limit = rep.noise_constant * u.alpha / s.mu[u.sensor];
    for (double eps : u.epsilon) {
      const double ratio = eps / u.beta;
      const double rel = limit > 0.0 ? ratio / limit : (ratio > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      rep.max_eps_beta_ratio = std::max(rep.max_eps_beta_ratio, rel);
    }
  }
  // Relative slack for rounding in the ratio itself.
  rep.eps_beta_bound_holds = rep.max_eps_beta_ratio <= 1.0 + 1e-12;
  return rep;
}

}  // namespace dremnet
