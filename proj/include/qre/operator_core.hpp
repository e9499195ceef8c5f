#pragma once

#include <string>
#include <vector>

#include "qre/eig.hpp"
#include "qre/matrix.hpp"
#include "qre/tolerances.hpp"

namespace qre {

/// Ordered labeled tensor factorization of a Hilbert space.
struct SubsystemLayout {
  std::vector<std::string> labels;
  std::vector<int> dims;

  SubsystemLayout() = default;
  SubsystemLayout(std::vector<std::string> l, std::vector<int> d);

  int total_dim() const;
  int index_of(const std::string& label) const;
  bool has_label(const std::string& label) const;
  /// Sub-layout of the given labels, preserving this layout's order.
  SubsystemLayout keep(const std::vector<std::string>& labels_to_keep) const;
  bool operator==(const SubsystemLayout& other) const = default;
};

/// Square complex matrix declared Hermitian (checked within tolerance).
struct HermitianOperator {
  int dim = 0;
  ComplexMatrix matrix;

  HermitianOperator() = default;
  /// Validates squareness, finiteness and Hermiticity.
  explicit HermitianOperator(ComplexMatrix m);

  static HermitianOperator zero(int n) { return HermitianOperator(ComplexMatrix(n, n)); }
  static HermitianOperator identity(int n) { return HermitianOperator(ComplexMatrix::identity(n)); }
};

struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // descending
  ComplexMatrix eigenvectors;       // orthonormal columns
};

SpectralDecomposition eig_hermitian(const HermitianOperator& m);

/// Eigenvalues at or below support_cutoff_rel * max(eigenvalue) count as zero.
double support_cutoff(const std::vector<double>& eigenvalues);

/// V f(Lambda) V^dagger from a decomposition.
ComplexMatrix spectral_function(const SpectralDecomposition& d, const std::vector<double>& f_of_eig);

/// M^p on the support of M (f(0) = 0 for every p, including p < 0).
/// Negative eigenvalues within tolerance are clipped; beyond it they are an error.
HermitianOperator operator_power(const HermitianOperator& m, double p);

HermitianOperator support_projector(const HermitianOperator& m);

/// True iff the kernel of sigma lies inside the kernel of rho (rho << sigma).
bool dominates(const HermitianOperator& rho, const HermitianOperator& sigma);

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);

/// Trace out every subsystem not listed in `keep`; result factors follow the
/// layout order.
HermitianOperator partial_trace(const HermitianOperator& m, const SubsystemLayout& layout,
                                const std::vector<std::string>& keep);

/// Sum_k P_k M P_k over the eigenprojectors of basis_of, eigenvalues grouped
/// within degeneracy tolerance. Trace-preserving, output commutes with basis_of.
HermitianOperator pinch(const HermitianOperator& m, const HermitianOperator& basis_of);

/// tr |sqrt(rho) sqrt(sigma)|. sigma may be unnormalized.
double fidelity(const HermitianOperator& rho, const HermitianOperator& sigma);

enum class HolderDirection { leq, geq };

struct HolderCheck {
  double lhs;  // tr(A B)
  double rhs;  // (tr A^p)^(1/p) (tr B^q)^(1/q), q = p/(p-1)
  HolderDirection direction;
};

/// Evaluates both sides of the Hoelder (p > 1, lhs <= rhs) or reverse Hoelder
/// (0 < p < 1, needs B >> A, lhs >= rhs) trace inequality.
HolderCheck holder_pair_check(const HermitianOperator& a, const HermitianOperator& b, double p);

/// Groups of indices of (descending) eigenvalues that lie within degeneracy
/// tolerance of each other.
std::vector<std::vector<int>> degenerate_groups(const std::vector<double>& eigenvalues);

/// Sum of f over eigenvalues above the support cutoff.
double trace_spectral_function(const std::vector<double>& eigenvalues, double (*f)(double));

}  // namespace qre
