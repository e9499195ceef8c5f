#pragma once

// Central numerical tolerances. All matrix tolerances are absolute for
// unit-normalized inputs and are scaled by max(1, |input|_max) at the call
// sites that accept larger operators.
namespace qre::tol {

// Eigenvalues at or below support_cutoff_rel * lambda_max count as zero.
inline constexpr double support_cutoff_rel = 1e-10;

inline constexpr double hermiticity = 1e-9;
inline constexpr double reconstruction = 1e-9;
inline constexpr double domination = 1e-9;
inline constexpr double psd = 1e-9;
inline constexpr double trace_one = 1e-9;

// Eigenvalues within this relative distance share a pinching block.
inline constexpr double degeneracy_rel = 1e-8;

// Finite Renyi orders this close to 1 are rejected; use the ONE limit.
inline constexpr double alpha_one_window = 1e-6;

// |P_j v_i| threshold for the eigenvector-overlap condition in the
// alpha -> infinity divergence.
inline constexpr double eigvec_overlap = 1e-8;

// Smallest singular value that still counts as linearly independent in the
// sandwiched alpha -> 0 subset search.
inline constexpr double subset_independence = 1e-8;

// Hard cap on the sigma rank for the exhaustive subset search.
inline constexpr int subset_rank_cap = 14;

inline constexpr double kraus_completeness = 1e-9;
inline constexpr double povm_completeness = 1e-9;
inline constexpr double pure_state_norm = 1e-12;

}  // namespace qre::tol
