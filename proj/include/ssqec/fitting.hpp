#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ssqec/montecarlo.hpp"

namespace ssqec {

struct FitParameter {
  std::string name;
  double value = 0.0;
  double stderr_ = 0.0;
};

struct FitResult {
  std::string kind;
  std::vector<FitParameter> params;
  double rss = 0.0;
  std::size_t points = 0;
  bool converged = false;
  std::vector<std::string> diagnostics;
  std::vector<std::string> flags;

  double value(const std::string& name) const;
  double stderr_of(const std::string& name) const;
  bool has_flag(const std::string& f) const;
};

nlohmann::json to_json(const FitResult& r);

/// Failure probability sample at (L, p); `sigma` is used only for CI weighting.
struct ThresholdPoint {
  double L = 0, p = 0, p_fail = 0, sigma = 0;
};

struct ThresholdFitConfig {
  /// Weight residuals by 1/sigma; zero sigmas take the smallest nonzero one.
  bool ci_weighted = false;
  double mu_min = 0.5, mu_max = 2.0;
  std::size_t grid_p = 41, grid_mu = 31;
  std::size_t max_iterations = 20000;
  double simplex_tolerance = 1e-13;
  std::size_t bootstrap = 1000;
  std::uint64_t seed = 1;
};

/// Fits a0 + a1 x + a2 x^2 with x = (p - p_th) L^(1/mu). Parameters:
/// p_th, mu, a0, a1, a2. Needs >= 3 distinct L and >= 3 distinct p.
FitResult fit_threshold(const std::vector<ThresholdPoint>& pts, const ThresholdFitConfig& cfg = {});
/// Uses the records with the given N (or the only N present).
FitResult fit_threshold(const ThresholdDataset& d, const ThresholdFitConfig& cfg = {},
                        std::optional<std::size_t> N = std::nullopt);

/// Residual sum of squares of the quadratic ansatz at fixed (p_th, mu),
/// with the a-coefficients solved exactly.
double threshold_rss(const std::vector<ThresholdPoint>& pts, double p_th, double mu, bool ci_weighted,
                     double* a_out = nullptr);

struct SustainableFitConfig {
  double gamma_min = 1e-3, gamma_max = 1e3;
  std::size_t grid = 241;
  std::size_t bootstrap = 1000;
  std::uint64_t seed = 1;
};

/// p_th(N) = p_sus [1 - (1 - p_th(0)/p_sus) e^(-gamma N)] with p_th(0) taken
/// from the N = 0 point. Parameters: p_sus, gamma. Flags "gamma_unidentifiable"
/// when the loss does not depend on gamma.
FitResult fit_sustainable(const std::vector<std::pair<double, double>>& pth_by_n, const SustainableFitConfig& cfg = {});

struct ScalingPoint {
  double L = 0, p = 0, p_fail = 0;
  std::size_t failures = 0;
};

struct ScalingFitConfig {
  double p_th = 0.0;
  bool odd_l_only = true;
  std::size_t min_failures = 25;
};

/// Per-L slope g(L) of log p_fail against log(p/p_th), then
/// log g = log alpha + beta log L. Parameters: alpha, beta, and g_L<L>.
FitResult fit_scaling(const std::vector<ScalingPoint>& pts, const ScalingFitConfig& cfg);
FitResult fit_scaling(const ThresholdDataset& d, const ScalingFitConfig& cfg,
                      std::optional<std::size_t> N = std::nullopt);

}  // namespace ssqec
