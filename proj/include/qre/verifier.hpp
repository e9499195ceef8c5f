#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qre/conditional_entropy.hpp"
#include "qre/quantum_objects.hpp"

namespace qre::verify {

enum class Suite {
  duality1,
  duality2,
  duality3,
  ordering,
  monotone_alpha,
  dpi,
  holder,
  mosonyi,
  uncertainty1,
  uncertainty2,
  uncertainty3,
  maassen_uffink,
  classical_oracle,
};

Suite parse_suite(const std::string& name);
std::string suite_name(Suite s);
std::vector<Suite> all_suites();

struct SuiteSpec {
  Suite suite = Suite::duality1;
  std::vector<int> dims;                // tripartite, bipartite, table shape or dim list per suite
  std::vector<AlphaParam> alpha_grid;   // Renyi orders (Hoelder reuses it as the p grid)
  int trials = 1;
  uint64_t seed = 0;
  double tolerance = 1e-8;
  int threads = 1;
  std::string povm_m_path;              // uncertainty suites; empty -> qubit Z basis
  std::string povm_n_path;              // uncertainty suites; empty -> qubit X basis
};

/// Suite defaults (dims, grid, trials, tolerance).
SuiteSpec default_spec(Suite s);

/// Throws UsageError when the grid leaves the suite's validity range or the
/// dims do not fit the suite.
void validate(const SuiteSpec& spec);

struct TrialCheck {
  std::string check;
  std::string alpha;          // order (or pair / p) as text
  double lhs = 0.0;
  double rhs = 0.0;
  // Two-sided checks store |lhs - rhs|; one-sided checks store the signed
  // margin lhs - rhs (positive means toward violation).
  double residual = 0.0;
  bool violated = false;
  bool not_converged = false;  // excluded from residual stats, counted
};

struct TrialRecord {
  int index = 0;
  std::string input_digest;
  std::vector<TrialCheck> checks;
};

struct Summary {
  double max_residual = 0.0;
  double mean_residual = 0.0;
  int violations = 0;
  int not_converged = 0;
  double runtime_ms = 0.0;
};

struct VerificationReport {
  SuiteSpec spec;
  std::vector<TrialRecord> trials;
  Summary summary;
};

/// Runs the suite named in the spec (validates first).
VerificationReport run_suite(const SuiteSpec& spec);

VerificationReport run_duality(int which, const SuiteSpec& spec);
VerificationReport run_ordering(const SuiteSpec& spec);
VerificationReport run_sandwich_corollary(const SuiteSpec& spec);
VerificationReport run_dpi(const SuiteSpec& spec);
VerificationReport run_monotone_alpha(const SuiteSpec& spec);
VerificationReport run_holder(const SuiteSpec& spec);
VerificationReport run_mosonyi(const SuiteSpec& spec);
VerificationReport run_uncertainty(int which, const SuiteSpec& spec, const Povm& m, const Povm& n);
VerificationReport run_classical_oracle(const SuiteSpec& spec);

/// Stable schema-versioned report JSON.
std::string report_to_json(const VerificationReport& report);
/// Just the trial records (byte-identical across reruns with the same spec).
std::string trials_to_json(const VerificationReport& report);

/// CSV rows "alpha,kind,value" for entropy sweeps.
std::string sweep_csv(const DensityOperator& rho, const std::string& target, const std::string& cond,
                      const std::vector<EntropyKind>& kinds, const std::vector<AlphaParam>& alphas);

// Independent scalar-formula oracles on classical joint tables p(x, y), plus
// the direct collision-entropy path kept separate from the divergence code.
namespace oracle {

double h_down_classical(const std::vector<std::vector<double>>& p, AlphaParam alpha);
double h_up_classical(const std::vector<std::vector<double>>& p, AlphaParam alpha);

/// -log2 tr((rho_AB (1 (x) rho_B^-1/2))^2), the explicit collision form.
double collision_entropy_direct(const DensityOperator& rho, const std::string& target,
                                const std::string& cond);

/// H(rho_full) - H(rho_cond) from the two spectra (independent of the
/// relative-entropy route).
double vn_conditional_via_marginals(const DensityOperator& rho, const std::string& cond);

}  // namespace oracle

}  // namespace qre::verify
