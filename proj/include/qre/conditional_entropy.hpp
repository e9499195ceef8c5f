#pragma once

#include <optional>
#include <string>

#include "qre/divergences.hpp"

namespace qre {

enum class DivergenceFamily { old_renyi, sandwiched };
enum class Arrow { down, up };

/// One of the four conditional Renyi entropy candidates.
struct EntropyKind {
  DivergenceFamily family;
  Arrow arrow;
  bool operator==(const EntropyKind& other) const = default;
};

enum class GradientMode { analytic, finite_difference };

struct OptimizerConfig {
  int max_iterations = 800;
  double tolerance = 1e-11;  // relative objective stall threshold
  int restarts = 3;
  std::string step_rule = "backtracking-armijo";
  GradientMode gradient = GradientMode::analytic;
};

struct EntropyResult {
  double value = 0.0;  // bits
  std::optional<DensityOperator> optimizer_sigma;
  std::optional<int> iterations;
  bool converged = true;
};

/// 1_target (x) sigma_cond arranged in the layout order of rho. rho's layout
/// must be exactly the {target, cond} bipartition.
HermitianOperator identity_tensor(const DensityOperator& rho, const std::string& target,
                                  const std::string& cond, const HermitianOperator& sigma_cond);

/// -D_alpha(rho_AB || 1_A (x) rho_B)
double h_down_old(const DensityOperator& rho, const std::string& target, const std::string& cond,
                  AlphaParam alpha);

/// sup_sigma -D_alpha(rho_AB || 1_A (x) sigma_B), evaluated in closed form:
/// (alpha/(1-alpha)) log2 tr((tr_A rho^alpha)^(1/alpha)) with the explicit
/// optimizer sigma* = normalize((tr_A rho^alpha)^(1/alpha)). alpha=0 uses the
/// Hartley form log2 lmax(tr_A Pi_rho); alpha=inf extrapolates the closed form
/// at orders 1e4 and 2e4 guarded by the monotone limit.
EntropyResult h_up_old(const DensityOperator& rho, const std::string& target, const std::string& cond,
                       AlphaParam alpha);

/// -D~_alpha(rho_AB || 1_A (x) rho_B)
double h_down_sandwiched(const DensityOperator& rho, const std::string& target, const std::string& cond,
                         AlphaParam alpha);

/// sup_sigma -D~_alpha(rho_AB || 1_A (x) sigma_B) by projected gradient descent
/// over the density simplex (convexity regime alpha >= 1/2; other alpha are
/// best-effort). alpha=inf maximizes -log2 lmax(sigma^-1/2 rho sigma^-1/2) with
/// subgradient steps. Never returns silently wrong values: non-convergence is
/// flagged and the reported value is the objective at the returned sigma.
EntropyResult h_up_sandwiched(const DensityOperator& rho, const std::string& target,
                              const std::string& cond, AlphaParam alpha,
                              const OptimizerConfig& config = {});

/// Dispatch over the four candidates.
EntropyResult entropy(EntropyKind kind, const DensityOperator& rho, const std::string& target,
                      const std::string& cond, AlphaParam alpha, const OptimizerConfig& config = {});

std::string kind_name(EntropyKind kind);
/// Parses "old-down", "old-up", "sandwiched-down", "sandwiched-up".
EntropyKind parse_kind(const std::string& name);

}  // namespace qre
