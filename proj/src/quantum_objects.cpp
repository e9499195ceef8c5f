#include "qre/quantum_objects.hpp"

#include <algorithm>
#include <cmath>

namespace qre {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

SeededRng SeededRng::for_trial(uint64_t seed, uint64_t trial_index) {
  return SeededRng(splitmix64(seed ^ splitmix64(trial_index + 1)));
}

double SeededRng::gaussian() {
  if (have_cached_) {
    have_cached_ = false;
    return cached_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * 3.14159265358979323846 * u2;
  cached_ = r * std::sin(a);
  have_cached_ = true;
  return r * std::cos(a);
}

int SeededRng::uniform_int(int n) {
  if (n <= 0) throw PreconditionError("uniform_int needs n > 0");
  const uint64_t bound = ~0ULL - (~0ULL % static_cast<uint64_t>(n));
  uint64_t x = next_u64();
  while (x >= bound) x = next_u64();
  return static_cast<int>(x % static_cast<uint64_t>(n));
}

PureState::PureState(std::vector<cxd> v, SubsystemLayout l) : vector(std::move(v)), layout(std::move(l)) {
  if (layout.total_dim() != static_cast<int>(vector.size()))
    throw PreconditionError("pure state layout does not match vector dimension");
  double norm2 = 0.0;
  for (const cxd& c : vector) norm2 += std::norm(c);
  if (std::abs(norm2 - 1.0) > 2.0 * tol::pure_state_norm)
    throw PreconditionError("pure state is not normalized");
}

DensityOperator PureState::density() const {
  const int n = dim();
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = vector[static_cast<size_t>(i)] * std::conj(vector[static_cast<size_t>(j)]);
  return DensityOperator(HermitianOperator(std::move(m)), layout);
}

KrausChannel::KrausChannel(std::vector<ComplexMatrix> ops) : kraus(std::move(ops)) {
  if (kraus.empty()) throw PreconditionError("Kraus channel needs at least one operator");
  dim_out = kraus.front().rows;
  dim_in = kraus.front().cols;
  for (const auto& k : kraus)
    if (k.rows != dim_out || k.cols != dim_in) throw PreconditionError("Kraus operators must share a shape");
  ComplexMatrix sum(dim_in, dim_in);
  for (const auto& k : kraus) sum = sum + adjoint_times(k, k);
  if (max_abs_diff(sum, ComplexMatrix::identity(dim_in)) > tol::kraus_completeness)
    throw PreconditionError("Kraus operators do not satisfy sum K^dagger K = 1");
}

Povm::Povm(std::vector<HermitianOperator> els) : elements(std::move(els)) {
  if (elements.empty()) throw PreconditionError("POVM needs at least one element");
  const int d = elements.front().dim;
  ComplexMatrix sum(d, d);
  for (const auto& e : elements) {
    if (e.dim != d) throw PreconditionError("POVM elements must share a dimension");
    SpectralDecomposition dec = eig_hermitian(e);
    if (!dec.eigenvalues.empty() && dec.eigenvalues.back() < -tol::psd)
      throw PreconditionError("POVM element is not PSD");
    sum = sum + e.matrix;
  }
  if (max_abs_diff(sum, ComplexMatrix::identity(d)) > tol::povm_completeness)
    throw PreconditionError("POVM elements do not sum to the identity");
}

PureState random_pure_state(const SubsystemLayout& layout, SeededRng& rng) {
  const int n = layout.total_dim();
  std::vector<cxd> v(static_cast<size_t>(n));
  for (auto& c : v) c = rng.complex_gaussian();
  double norm2 = 0.0;
  for (const cxd& c : v) norm2 += std::norm(c);
  const double norm = std::sqrt(norm2);
  // Fix the global phase: first component real nonnegative.
  cxd phase(1.0, 0.0);
  for (const cxd& c : v)
    if (std::abs(c) > 1e-12 * norm) {
      phase = std::conj(c) / std::abs(c);
      break;
    }
  for (auto& c : v) c = c * phase / norm;
  return PureState(std::move(v), layout);
}

DensityOperator random_density(const SubsystemLayout& layout, int rank, SeededRng& rng) {
  const int dim = layout.total_dim();
  if (rank < 1 || rank > dim) throw PreconditionError("random_density rank out of range");
  const SubsystemLayout big({"sys", "env"}, {dim, rank});
  const PureState psi = random_pure_state(big, rng);
  const HermitianOperator reduced = partial_trace(psi.density().op, big, {"sys"});
  return DensityOperator(reduced, layout);
}

DensityOperator random_density(int dim, int rank, SeededRng& rng) {
  return random_density(SubsystemLayout({"A"}, {dim}), rank, rng);
}

PureState purify(const DensityOperator& rho, const std::string& env_label) {
  SpectralDecomposition d = eig_hermitian(rho.op);
  const double cut = support_cutoff(d.eigenvalues);
  int rank = 0;
  for (double lam : d.eigenvalues)
    if (lam > cut) ++rank;
  if (rank == 0) throw PreconditionError("cannot purify the zero operator");
  const int n = rho.op.dim;
  std::vector<cxd> v(static_cast<size_t>(n) * rank);
  for (int k = 0; k < rank; ++k) {
    const double w = std::sqrt(std::max(0.0, d.eigenvalues[static_cast<size_t>(k)]));
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i) * rank + k] = w * d.eigenvectors.at(i, k);
  }
  // Renormalize away the clipped tail.
  double norm2 = 0.0;
  for (const cxd& c : v) norm2 += std::norm(c);
  for (auto& c : v) c /= std::sqrt(norm2);
  std::vector<std::string> labels = rho.layout.labels;
  std::vector<int> dims = rho.layout.dims;
  labels.push_back(env_label);
  dims.push_back(rank);
  return PureState(std::move(v), SubsystemLayout(std::move(labels), std::move(dims)));
}

KrausChannel random_channel(int dim_in, int dim_out, int env_dim, SeededRng& rng) {
  if (dim_in < 1 || dim_out < 1 || env_dim < 1) throw PreconditionError("channel dimensions must be positive");
  if (dim_out * env_dim < dim_in)
    throw PreconditionError("random_channel needs dim_out * env_dim >= dim_in for an isometry");
  const int rows = dim_out * env_dim;
  // Haar isometry by Gram-Schmidt on Gaussian columns.
  ComplexMatrix v(rows, dim_in);
  for (int c = 0; c < dim_in; ++c) {
    std::vector<cxd> col(static_cast<size_t>(rows));
    for (auto& x : col) x = rng.complex_gaussian();
    for (int prev = 0; prev < c; ++prev) {
      cxd overlap_pc = 0.0;
      for (int r = 0; r < rows; ++r) overlap_pc += std::conj(v.at(r, prev)) * col[static_cast<size_t>(r)];
      for (int r = 0; r < rows; ++r) col[static_cast<size_t>(r)] -= overlap_pc * v.at(r, prev);
    }
    double norm2 = 0.0;
    for (const cxd& x : col) norm2 += std::norm(x);
    const double inv = 1.0 / std::sqrt(norm2);
    for (int r = 0; r < rows; ++r) v.at(r, c) = col[static_cast<size_t>(r)] * inv;
  }
  std::vector<ComplexMatrix> kraus(static_cast<size_t>(env_dim), ComplexMatrix(dim_out, dim_in));
  for (int e = 0; e < env_dim; ++e)
    for (int o = 0; o < dim_out; ++o)
      for (int i = 0; i < dim_in; ++i) kraus[static_cast<size_t>(e)].at(o, i) = v.at(o * env_dim + e, i);
  return KrausChannel(std::move(kraus));
}

KrausChannel identity_channel(int dim) {
  return KrausChannel({ComplexMatrix::identity(dim)});
}

KrausChannel depolarizing_channel(int dim) {
  std::vector<ComplexMatrix> kraus;
  const double w = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      ComplexMatrix k(dim, dim);
      k.at(i, j) = w;
      kraus.push_back(std::move(k));
    }
  return KrausChannel(std::move(kraus));
}

DensityOperator apply(const KrausChannel& ch, const DensityOperator& rho, const std::string& on_label) {
  const int slot = rho.layout.index_of(on_label);
  if (rho.layout.dims[static_cast<size_t>(slot)] != ch.dim_in)
    throw PreconditionError("channel input dimension does not match subsystem " + on_label);
  int pre = 1, post = 1;
  for (int s = 0; s < slot; ++s) pre *= rho.layout.dims[static_cast<size_t>(s)];
  for (size_t s = static_cast<size_t>(slot) + 1; s < rho.layout.dims.size(); ++s) post *= rho.layout.dims[s];

  const int out_dim = pre * ch.dim_out * post;
  ComplexMatrix acc(out_dim, out_dim);
  const ComplexMatrix ident_pre = ComplexMatrix::identity(pre);
  const ComplexMatrix ident_post = ComplexMatrix::identity(post);
  for (const auto& k : ch.kraus) {
    const ComplexMatrix k_full = tensor_product(tensor_product(ident_pre, k), ident_post);
    const ComplexMatrix term = multiply(k_full, times_adjoint(rho.op.matrix, k_full));
    acc = acc + term;
  }
  std::vector<int> dims = rho.layout.dims;
  dims[static_cast<size_t>(slot)] = ch.dim_out;
  return DensityOperator(HermitianOperator(hermitian_part(acc)),
                         SubsystemLayout(rho.layout.labels, std::move(dims)));
}

Povm computational_povm(int dim) {
  std::vector<HermitianOperator> els;
  for (int i = 0; i < dim; ++i) {
    ComplexMatrix m(dim, dim);
    m.at(i, i) = 1.0;
    els.emplace_back(std::move(m));
  }
  return Povm(std::move(els));
}

Povm hadamard_povm() {
  ComplexMatrix plus(2, 2), minus(2, 2);
  plus.at(0, 0) = plus.at(0, 1) = plus.at(1, 0) = plus.at(1, 1) = 0.5;
  minus.at(0, 0) = minus.at(1, 1) = 0.5;
  minus.at(0, 1) = minus.at(1, 0) = -0.5;
  std::vector<HermitianOperator> els;
  els.emplace_back(std::move(plus));
  els.emplace_back(std::move(minus));
  return Povm(std::move(els));
}

Povm random_povm(int dim, int n_elements, SeededRng& rng) {
  if (n_elements < 1) throw PreconditionError("random_povm needs at least one element");
  // G_i = A_i A_i^dagger, elements S^-1/2 G_i S^-1/2 with S the sum.
  std::vector<ComplexMatrix> g;
  ComplexMatrix sum(dim, dim);
  for (int e = 0; e < n_elements; ++e) {
    ComplexMatrix a(dim, dim);
    for (auto& x : a.data) x = rng.complex_gaussian();
    ComplexMatrix gi = times_adjoint(a, a);
    sum = sum + gi;
    g.push_back(std::move(gi));
  }
  const HermitianOperator s_inv_half = operator_power(HermitianOperator(hermitian_part(sum)), -0.5);
  std::vector<HermitianOperator> els;
  for (auto& gi : g)
    els.emplace_back(hermitian_part(multiply(s_inv_half.matrix, multiply(gi, s_inv_half.matrix))));
  return Povm(std::move(els));
}

std::pair<DensityOperator, DensityOperator> post_measurement_states(const PureState& rho_abc,
                                                                    const Povm& m, const Povm& n,
                                                                    const std::string& measured,
                                                                    const std::string& keep_m,
                                                                    const std::string& keep_n) {
  const SubsystemLayout& layout = rho_abc.layout;
  const int slot = layout.index_of(measured);
  const int d_meas = layout.dims[static_cast<size_t>(slot)];
  if (m.dim() != d_meas || n.dim() != d_meas)
    throw PreconditionError("POVM dimension does not match the measured subsystem " + measured);

  int pre = 1, post = 1;
  for (int s = 0; s < slot; ++s) pre *= layout.dims[static_cast<size_t>(s)];
  for (size_t s = static_cast<size_t>(slot) + 1; s < layout.dims.size(); ++s) post *= layout.dims[s];
  const ComplexMatrix ident_pre = ComplexMatrix::identity(pre);
  const ComplexMatrix ident_post = ComplexMatrix::identity(post);
  const DensityOperator rho = rho_abc.density();

  auto build = [&](const Povm& povm, const std::string& keep, const std::string& reg_label) {
    const int d_keep = layout.dims[static_cast<size_t>(layout.index_of(keep))];
    const int n_out = static_cast<int>(povm.elements.size());
    ComplexMatrix block(n_out * d_keep, n_out * d_keep);
    for (int x = 0; x < n_out; ++x) {
      const ComplexMatrix m_full =
          tensor_product(tensor_product(ident_pre, povm.elements[static_cast<size_t>(x)].matrix), ident_post);
      const ComplexMatrix weighted = multiply(m_full, rho.op.matrix);
      const HermitianOperator cond =
          partial_trace(HermitianOperator(hermitian_part(weighted)), layout, {keep});
      for (int i = 0; i < d_keep; ++i)
        for (int j = 0; j < d_keep; ++j) block.at(x * d_keep + i, x * d_keep + j) = cond.matrix.at(i, j);
    }
    return DensityOperator(HermitianOperator(hermitian_part(block)),
                           SubsystemLayout({reg_label, keep}, {n_out, d_keep}));
  };
  return {build(m, keep_m, "X"), build(n, keep_n, "Y")};
}

double overlap(const Povm& m, const Povm& n) {
  if (m.dim() != n.dim()) throw PreconditionError("overlap: POVMs act on different spaces");
  std::vector<HermitianOperator> roots_m, roots_n;
  for (const auto& e : m.elements) roots_m.push_back(operator_power(e, 0.5));
  for (const auto& e : n.elements) roots_n.push_back(operator_power(e, 0.5));
  double best = 0.0;
  for (const auto& rm : roots_m)
    for (const auto& rn : roots_n) {
      const ComplexMatrix prod = multiply(rm.matrix, rn.matrix);
      const ComplexMatrix gram = adjoint_times(prod, prod);
      EigResult e = eig_hermitian_matrix(gram);
      best = std::max(best, std::sqrt(std::max(0.0, e.eigenvalues.front())));
    }
  return best;
}

}  // namespace qre
