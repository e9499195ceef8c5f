#include "qre/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qre {

SubsystemLayout::SubsystemLayout(std::vector<std::string> l, std::vector<int> d)
    : labels(std::move(l)), dims(std::move(d)) {
  if (labels.size() != dims.size()) throw PreconditionError("layout labels/dims size mismatch");
  if (labels.empty()) throw PreconditionError("layout must have at least one subsystem");
  std::set<std::string> seen;
  for (const auto& lab : labels)
    if (!seen.insert(lab).second) throw PreconditionError("layout labels must be distinct: " + lab);
  for (int dim : dims)
    if (dim <= 0) throw PreconditionError("layout dimensions must be positive");
}

int SubsystemLayout::total_dim() const {
  int d = 1;
  for (int x : dims) d *= x;
  return d;
}

int SubsystemLayout::index_of(const std::string& label) const {
  for (size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<int>(i);
  throw PreconditionError("unknown subsystem label: " + label);
}

bool SubsystemLayout::has_label(const std::string& label) const {
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

SubsystemLayout SubsystemLayout::keep(const std::vector<std::string>& labels_to_keep) const {
  std::vector<std::string> l;
  std::vector<int> d;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (std::find(labels_to_keep.begin(), labels_to_keep.end(), labels[i]) != labels_to_keep.end()) {
      l.push_back(labels[i]);
      d.push_back(dims[i]);
    }
  }
  if (l.size() != labels_to_keep.size()) throw PreconditionError("keep set contains unknown labels");
  return SubsystemLayout(std::move(l), std::move(d));
}

HermitianOperator::HermitianOperator(ComplexMatrix m) {
  if (!m.square()) throw PreconditionError("Hermitian operator must be square");
  if (!all_finite(m)) throw PreconditionError("Hermitian operator contains non-finite entries");
  const double scale = std::max(1.0, max_abs(m));
  double dev = 0.0;
  for (int i = 0; i < m.rows; ++i)
    for (int j = i; j < m.cols; ++j) dev = std::max(dev, std::abs(m.at(i, j) - std::conj(m.at(j, i))));
  if (dev > tol::hermiticity * scale)
    throw PreconditionError("matrix is not Hermitian (max deviation " + std::to_string(dev) + ")");
  dim = m.rows;
  matrix = std::move(m);
}

SpectralDecomposition eig_hermitian(const HermitianOperator& m) {
  EigResult r = eig_hermitian_matrix(m.matrix);
  return {std::move(r.eigenvalues), std::move(r.vectors)};
}

double support_cutoff(const std::vector<double>& eigenvalues) {
  double lam_max = 0.0;
  for (double v : eigenvalues) lam_max = std::max(lam_max, v);
  return tol::support_cutoff_rel * lam_max;
}

ComplexMatrix spectral_function(const SpectralDecomposition& d, const std::vector<double>& f) {
  const int n = d.eigenvectors.rows;
  ComplexMatrix scaled(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) scaled.at(i, j) = d.eigenvectors.at(i, j) * f[j];
  return times_adjoint(scaled, d.eigenvectors);
}

namespace {

// Negative eigenvalues in [-tol, 0) are rounding noise and clip to zero;
// anything below -tol is rejected.
void check_psd_spectrum(const std::vector<double>& eigenvalues, const char* what) {
  if (eigenvalues.empty()) return;
  const double scale = std::max(1.0, std::abs(eigenvalues.front()));
  if (eigenvalues.back() < -tol::psd * scale)
    throw PreconditionError(std::string(what) + ": negative eigenvalue " + std::to_string(eigenvalues.back()));
}

}  // namespace

HermitianOperator operator_power(const HermitianOperator& m, double p) {
  if (!std::isfinite(p)) throw PreconditionError("operator power exponent must be finite");
  SpectralDecomposition d = eig_hermitian(m);
  check_psd_spectrum(d.eigenvalues, "operator_power");
  const double cut = support_cutoff(d.eigenvalues);
  std::vector<double> f(d.eigenvalues.size());
  for (size_t i = 0; i < f.size(); ++i)
    f[i] = (d.eigenvalues[i] > cut) ? std::pow(d.eigenvalues[i], p) : 0.0;
  return HermitianOperator(hermitian_part(spectral_function(d, f)));
}

HermitianOperator support_projector(const HermitianOperator& m) {
  SpectralDecomposition d = eig_hermitian(m);
  check_psd_spectrum(d.eigenvalues, "support_projector");
  const double cut = support_cutoff(d.eigenvalues);
  std::vector<double> f(d.eigenvalues.size());
  for (size_t i = 0; i < f.size(); ++i) f[i] = (d.eigenvalues[i] > cut) ? 1.0 : 0.0;
  return HermitianOperator(hermitian_part(spectral_function(d, f)));
}

bool dominates(const HermitianOperator& rho, const HermitianOperator& sigma) {
  if (rho.dim != sigma.dim) throw PreconditionError("dominates: dimension mismatch");
  const HermitianOperator proj = support_projector(sigma);
  const ComplexMatrix compressed = multiply(proj.matrix, multiply(rho.matrix, proj.matrix));
  const double scale = std::max(1.0, max_abs(rho.matrix));
  return max_abs_diff(compressed, rho.matrix) <= tol::domination * scale;
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(tensor_product(a.matrix, b.matrix));
}

HermitianOperator partial_trace(const HermitianOperator& m, const SubsystemLayout& layout,
                                const std::vector<std::string>& keep) {
  if (layout.total_dim() != m.dim)
    throw PreconditionError("layout inconsistent with operator dimension");
  if (keep.empty()) throw PreconditionError("partial trace must keep at least one subsystem");
  const size_t nsub = layout.dims.size();
  std::vector<bool> kept(nsub, false);
  for (const auto& lab : keep) kept[static_cast<size_t>(layout.index_of(lab))] = true;

  // Row-major strides over the full space.
  std::vector<long> stride(nsub, 1);
  for (size_t s = nsub; s-- > 1;) stride[s - 1] = stride[s] * layout.dims[s];

  // Enumerate base offsets of the kept and traced multi-indices.
  auto offsets = [&](bool want_kept) {
    std::vector<long> out{0};
    for (size_t s = 0; s < nsub; ++s) {
      if (kept[s] != want_kept) continue;
      std::vector<long> next;
      next.reserve(out.size() * layout.dims[s]);
      for (long base : out)
        for (int digit = 0; digit < layout.dims[s]; ++digit) next.push_back(base + digit * stride[s]);
      out = std::move(next);
    }
    return out;
  };
  const std::vector<long> kept_off = offsets(true);
  const std::vector<long> traced_off = offsets(false);

  const int out_dim = static_cast<int>(kept_off.size());
  ComplexMatrix out(out_dim, out_dim);
  for (int a = 0; a < out_dim; ++a)
    for (int b = 0; b < out_dim; ++b) {
      cxd sum = 0.0;
      for (long t : traced_off)
        sum += m.matrix.data[static_cast<size_t>(kept_off[a] + t) * m.dim + (kept_off[b] + t)];
      out.at(a, b) = sum;
    }
  return HermitianOperator(hermitian_part(out));
}

std::vector<std::vector<int>> degenerate_groups(const std::vector<double>& eigenvalues) {
  std::vector<std::vector<int>> groups;
  double scale = 0.0;
  for (double v : eigenvalues) scale = std::max(scale, std::abs(v));
  const double abs_floor = 1e-14 * std::max(scale, 1e-300);
  for (size_t i = 0; i < eigenvalues.size(); ++i) {
    const double gap = groups.empty() ? 0.0 : eigenvalues[groups.back().back()] - eigenvalues[i];
    const double rel = tol::degeneracy_rel * std::max(std::abs(eigenvalues[i]),
                                                      groups.empty() ? 0.0 : std::abs(eigenvalues[groups.back().back()]));
    if (!groups.empty() && gap <= std::max(rel, abs_floor))
      groups.back().push_back(static_cast<int>(i));
    else
      groups.push_back({static_cast<int>(i)});
  }
  return groups;
}

HermitianOperator pinch(const HermitianOperator& m, const HermitianOperator& basis_of) {
  if (m.dim != basis_of.dim) throw PreconditionError("pinch: dimension mismatch");
  SpectralDecomposition d = eig_hermitian(basis_of);
  const auto groups = degenerate_groups(d.eigenvalues);
  std::vector<int> group_of(d.eigenvalues.size());
  for (size_t g = 0; g < groups.size(); ++g)
    for (int idx : groups[g]) group_of[static_cast<size_t>(idx)] = static_cast<int>(g);
  // Rotate to the eigenbasis, keep within-group blocks, rotate back.
  ComplexMatrix w = adjoint_times(d.eigenvectors, multiply(m.matrix, d.eigenvectors));
  for (int i = 0; i < w.rows; ++i)
    for (int j = 0; j < w.cols; ++j)
      if (group_of[static_cast<size_t>(i)] != group_of[static_cast<size_t>(j)]) w.at(i, j) = 0.0;
  return HermitianOperator(hermitian_part(multiply(d.eigenvectors, times_adjoint(w, d.eigenvectors))));
}

double fidelity(const HermitianOperator& rho, const HermitianOperator& sigma) {
  if (rho.dim != sigma.dim) throw PreconditionError("fidelity: dimension mismatch");
  const HermitianOperator root = operator_power(sigma, 0.5);
  const ComplexMatrix x = multiply(root.matrix, multiply(rho.matrix, root.matrix));
  EigResult e = eig_hermitian_matrix(x);
  double f = 0.0;
  for (double lam : e.eigenvalues) f += std::sqrt(std::max(0.0, lam));
  return f;
}

double trace_spectral_function(const std::vector<double>& eigenvalues, double (*f)(double)) {
  const double cut = support_cutoff(eigenvalues);
  double s = 0.0;
  for (double v : eigenvalues)
    if (v > cut) s += f(v);
  return s;
}

HolderCheck holder_pair_check(const HermitianOperator& a, const HermitianOperator& b, double p) {
  if (!(p > 0.0) || p == 1.0) throw PreconditionError("holder_pair_check needs p > 0, p != 1");
  SpectralDecomposition da = eig_hermitian(a);
  SpectralDecomposition db = eig_hermitian(b);
  check_psd_spectrum(da.eigenvalues, "holder_pair_check A");
  check_psd_spectrum(db.eigenvalues, "holder_pair_check B");
  if (p < 1.0 && !dominates(a, b))
    throw PreconditionError("reverse Hoelder requires B >> A (support of A inside support of B)");

  const double q = p / (p - 1.0);
  const double lhs = trace_product_hermitian(a.matrix, b.matrix).real();

  const double cut_a = support_cutoff(da.eigenvalues);
  const double cut_b = support_cutoff(db.eigenvalues);
  double tr_ap = 0.0, tr_bq = 0.0;
  for (double v : da.eigenvalues)
    if (v > cut_a) tr_ap += std::pow(v, p);
  for (double v : db.eigenvalues)
    if (v > cut_b) tr_bq += std::pow(v, q);

  HolderCheck out;
  out.lhs = lhs;
  out.direction = (p > 1.0) ? HolderDirection::leq : HolderDirection::geq;
  if (tr_ap == 0.0 || tr_bq == 0.0) {
    // Zero operator on either side: both sides vanish under the support convention.
    out.rhs = 0.0;
    return out;
  }
  out.rhs = std::pow(tr_ap, 1.0 / p) * std::pow(tr_bq, 1.0 / q);
  return out;
}

}  // namespace qre
