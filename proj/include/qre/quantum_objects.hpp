#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "qre/divergences.hpp"

namespace qre {

/// Deterministic random stream: mt19937_64 with explicit uniform/gaussian
/// mappings so that the same seed reproduces the same bytes everywhere.
class SeededRng {
 public:
  explicit SeededRng(uint64_t seed) : gen_(seed) {}

  /// Stream for one trial; distinct trials are order-independent.
  static SeededRng for_trial(uint64_t seed, uint64_t trial_index);

  uint64_t next_u64() { return gen_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  /// Standard normal via Box-Muller (uses its own cache of the second draw).
  double gaussian();
  cxd complex_gaussian() { return cxd(gaussian(), gaussian()); }
  /// Uniform integer in [0, n) by rejection.
  int uniform_int(int n);

 private:
  std::mt19937_64 gen_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

/// Unit vector with a subsystem layout.
struct PureState {
  std::vector<cxd> vector;
  SubsystemLayout layout;

  PureState() = default;
  PureState(std::vector<cxd> v, SubsystemLayout l);

  int dim() const { return static_cast<int>(vector.size()); }
  /// |psi><psi| as a density operator.
  DensityOperator density() const;
};

/// Completely positive trace-preserving map as Kraus operators.
struct KrausChannel {
  std::vector<ComplexMatrix> kraus;
  int dim_in = 0;
  int dim_out = 0;

  KrausChannel() = default;
  /// Validates shapes and sum K^dagger K = 1 within tolerance.
  explicit KrausChannel(std::vector<ComplexMatrix> ops);
};

struct Povm {
  std::vector<HermitianOperator> elements;

  Povm() = default;
  /// Validates each element PSD and sum = identity within tolerance.
  explicit Povm(std::vector<HermitianOperator> els);

  int dim() const { return elements.empty() ? 0 : elements.front().dim; }
};

/// Haar-random unit vector (global phase fixed so results are reproducible
/// component-wise).
PureState random_pure_state(const SubsystemLayout& layout, SeededRng& rng);

/// Mixed state of the given rank: partial trace of a Haar pure state on
/// dim x rank. Layout is a single subsystem labeled "A" unless given.
DensityOperator random_density(int dim, int rank, SeededRng& rng);
DensityOperator random_density(const SubsystemLayout& layout, int rank, SeededRng& rng);

/// Pure state on system (x) environment whose marginal is rho; the
/// environment dimension equals the rank of rho.
PureState purify(const DensityOperator& rho, const std::string& env_label);

/// Channel from a Haar-random isometry dim_in -> dim_out x env.
KrausChannel random_channel(int dim_in, int dim_out, int env_dim, SeededRng& rng);

KrausChannel identity_channel(int dim);
/// Full depolarization to the maximally mixed state.
KrausChannel depolarizing_channel(int dim);

/// Applies the channel to the named subsystem; the layout dimension of that
/// subsystem becomes dim_out.
DensityOperator apply(const KrausChannel& ch, const DensityOperator& rho, const std::string& on_label);

/// Projective POVM from the eigenbasis of a Hermitian operator, or bases.
Povm computational_povm(int dim);
Povm hadamard_povm();  // qubit X basis
Povm random_povm(int dim, int n_elements, SeededRng& rng);

/// Post-measurement classical-quantum states of a tripartite pure state:
/// measure `measured` with M keeping keep_m, and with N keeping keep_n.
/// Classical registers are labeled "X" and "Y".
std::pair<DensityOperator, DensityOperator> post_measurement_states(const PureState& rho_abc,
                                                                    const Povm& m, const Povm& n,
                                                                    const std::string& measured,
                                                                    const std::string& keep_m,
                                                                    const std::string& keep_n);

/// c = max_xy |sqrt(M_x) sqrt(N_y)|_infty (largest singular value).
double overlap(const Povm& m, const Povm& n);

}  // namespace qre
