#pragma once

#include <string>

#include "qre/operator_core.hpp"

namespace qre {

/// Renyi order: a positive real different from 1, or one of the symbolic
/// limits ZERO, ONE, INFINITY. Finite values inside the alpha_one_window
/// around 1 are rejected with guidance to use the ONE limit.
struct AlphaParam {
  enum class Kind { finite, zero, one, infinity };
  Kind kind = Kind::one;
  double value = 0.0;  // meaningful iff kind == finite

  static AlphaParam finite(double a);
  static AlphaParam zero() { return {Kind::zero, 0.0}; }
  static AlphaParam one() { return {Kind::one, 1.0}; }
  static AlphaParam infinity();

  /// "0" -> ZERO, "1" -> ONE, "inf"/"infinity" -> INFINITY, otherwise finite.
  static AlphaParam parse(const std::string& text);
  /// Same mapping for numeric grids.
  static AlphaParam from_value(double a);

  /// Numeric order (0, 1 or +inf for the limits).
  double numeric() const;
  std::string str() const;
  bool operator==(const AlphaParam& other) const = default;
};

/// Positive semi-definite unit-trace operator with a subsystem layout.
struct DensityOperator {
  HermitianOperator op;
  SubsystemLayout layout;

  DensityOperator() = default;
  /// Validates PSD within tolerance, unit trace, layout consistency.
  DensityOperator(HermitianOperator o, SubsystemLayout l);
};

/// Marginal on the given labels (a density operator again).
DensityOperator marginal(const DensityOperator& rho, const std::vector<std::string>& keep);

/// -sum lambda log2 lambda over the support.
double von_neumann_entropy_bits(const HermitianOperator& m);

// Quantum Renyi relative entropy (1/(alpha-1)) log2 tr(rho^alpha sigma^(1-alpha)),
// with the standard limits at 0, 1 and infinity. sigma may be unnormalized.
// Requires rho << sigma for alpha >= 1; for alpha in (0,1) disjoint supports
// yield +infinity.
double d_old(const DensityOperator& rho, const HermitianOperator& sigma, AlphaParam alpha);

// Sandwiched Renyi relative entropy
// (1/(alpha-1)) log2 tr((sigma^((1-alpha)/2alpha) rho sigma^((1-alpha)/2alpha))^alpha)
// with its limits. The alpha -> 0 case runs an exhaustive subset search over
// the support eigenvectors of sigma (capped at rank subset_rank_cap).
double d_sandwiched(const DensityOperator& rho, const HermitianOperator& sigma, AlphaParam alpha);

// Two-parameter alpha-z family; z = 1 recovers d_old, z = alpha recovers
// d_sandwiched. Evaluated through the symmetrized product
// rho^(a/2z) sigma^((1-a)/z) rho^(a/2z).
double d_alpha_z(const DensityOperator& rho, const HermitianOperator& sigma, double alpha, double z);

}  // namespace qre
