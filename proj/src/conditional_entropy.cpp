#include "qre/conditional_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qre/numeric.hpp"

namespace qre {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInteriorEps = 1e-12;  // sigma >> rho_B regularization for alpha > 1

void check_bipartition(const DensityOperator& rho, const std::string& target, const std::string& cond) {
  if (target == cond) throw PreconditionError("target and conditioning labels must differ");
  if (rho.layout.labels.size() != 2 || !rho.layout.has_label(target) || !rho.layout.has_label(cond))
    throw PreconditionError("conditional entropy expects the exact {target, cond} bipartition; trace out other subsystems first");
}

int label_dim(const DensityOperator& rho, const std::string& label) {
  return rho.layout.dims[static_cast<size_t>(rho.layout.index_of(label))];
}

}  // namespace

HermitianOperator identity_tensor(const DensityOperator& rho, const std::string& target,
                                  const std::string& cond, const HermitianOperator& sigma_cond) {
  check_bipartition(rho, target, cond);
  if (sigma_cond.dim != label_dim(rho, cond))
    throw PreconditionError("sigma dimension does not match the conditioning subsystem");
  const ComplexMatrix ident = ComplexMatrix::identity(label_dim(rho, target));
  if (rho.layout.labels.front() == target) return HermitianOperator(tensor_product(ident, sigma_cond.matrix));
  return HermitianOperator(tensor_product(sigma_cond.matrix, ident));
}

double h_down_old(const DensityOperator& rho, const std::string& target, const std::string& cond,
                  AlphaParam alpha) {
  check_bipartition(rho, target, cond);
  const HermitianOperator rho_c = partial_trace(rho.op, rho.layout, {cond});
  return -d_old(rho, identity_tensor(rho, target, cond, rho_c), alpha);
}

double h_down_sandwiched(const DensityOperator& rho, const std::string& target, const std::string& cond,
                         AlphaParam alpha) {
  check_bipartition(rho, target, cond);
  const HermitianOperator rho_c = partial_trace(rho.op, rho.layout, {cond});
  return -d_sandwiched(rho, identity_tensor(rho, target, cond, rho_c), alpha);
}

namespace {

DensityOperator as_cond_density(const DensityOperator& rho, const std::string& cond, ComplexMatrix m) {
  const cxd tr = trace(m);
  if (std::abs(tr) <= 0.0) throw Error("optimizer produced a zero-trace sigma");
  m = (1.0 / tr) * m;
  return DensityOperator(HermitianOperator(hermitian_part(m)), rho.layout.keep({cond}));
}

struct UpOldParts {
  double value;
  ComplexMatrix sigma_star;  // unnormalized (tr_A rho^alpha)^(1/alpha) direction
};

// Lemma-style closed form, evaluated in the log domain:
//   (alpha/(1-alpha)) [log2 nu_max + log2 tr((tr_A (rho/nu_max)^alpha)^(1/alpha))]
UpOldParts h_up_old_finite(const DensityOperator& rho, const std::string& target, const std::string& cond,
                           double alpha) {
  SpectralDecomposition d = eig_hermitian(rho.op);
  const double nu_max = d.eigenvalues.front();
  const double cut = support_cutoff(d.eigenvalues);
  std::vector<double> f(d.eigenvalues.size());
  for (size_t i = 0; i < f.size(); ++i)
    f[i] = (d.eigenvalues[i] > cut) ? std::pow(d.eigenvalues[i] / nu_max, alpha) : 0.0;
  const HermitianOperator rho_pow(hermitian_part(spectral_function(d, f)));
  const HermitianOperator m = partial_trace(rho_pow, rho.layout, {cond});

  SpectralDecomposition dm = eig_hermitian(m);
  const double m_max = dm.eigenvalues.front();
  const double m_cut = support_cutoff(dm.eigenvalues);
  if (!(m_max > 0.0)) throw Error("h_up_old: vanishing marginal of rho^alpha");
  std::vector<double> terms;
  std::vector<double> fpow(dm.eigenvalues.size());
  for (size_t k = 0; k < dm.eigenvalues.size(); ++k) {
    if (dm.eigenvalues[k] > m_cut) {
      terms.push_back(std::log(dm.eigenvalues[k] / m_max) / alpha);
      fpow[k] = std::pow(dm.eigenvalues[k] / m_max, 1.0 / alpha);
    }
  }
  const double log2_tr_m_pow = std::log2(m_max) / alpha + log2_sum_exp(terms);
  UpOldParts out;
  out.value = alpha / (1.0 - alpha) * (std::log2(nu_max) + log2_tr_m_pow);
  out.sigma_star = spectral_function(dm, fpow);
  return out;
}

}  // namespace

EntropyResult h_up_old(const DensityOperator& rho, const std::string& target, const std::string& cond,
                       AlphaParam alpha) {
  check_bipartition(rho, target, cond);
  EntropyResult res;
  switch (alpha.kind) {
    case AlphaParam::Kind::one: {
      res.value = h_down_old(rho, target, cond, AlphaParam::one());
      res.optimizer_sigma = as_cond_density(rho, cond, partial_trace(rho.op, rho.layout, {cond}).matrix);
      return res;
    }
    case AlphaParam::Kind::zero: {
      // Hartley case: log2 lmax(tr_A Pi_rho); the supremum over sigma of a
      // linear objective sits on the top eigenspace.
      const HermitianOperator proj = support_projector(rho.op);
      const HermitianOperator k = partial_trace(proj, rho.layout, {cond});
      SpectralDecomposition dk = eig_hermitian(k);
      const double lmax = dk.eigenvalues.front();
      res.value = std::log2(lmax);
      const auto groups = degenerate_groups(dk.eigenvalues);
      std::vector<double> f(dk.eigenvalues.size(), 0.0);
      for (int idx : groups.front()) f[static_cast<size_t>(idx)] = 1.0;
      res.optimizer_sigma = as_cond_density(rho, cond, spectral_function(dk, f));
      return res;
    }
    case AlphaParam::Kind::finite: {
      const UpOldParts parts = h_up_old_finite(rho, target, cond, alpha.value);
      res.value = parts.value;
      res.optimizer_sigma = as_cond_density(rho, cond, parts.sigma_star);
      return res;
    }
    case AlphaParam::Kind::infinity: {
      // No explicit alpha=inf form for this family; evaluate the closed form
      // at two large orders and Richardson-extrapolate. Monotonicity in alpha
      // keeps the extrapolant below the smaller-order value.
      const UpOldParts lo = h_up_old_finite(rho, target, cond, 1e4);
      const UpOldParts hi = h_up_old_finite(rho, target, cond, 2e4);
      res.value = 2.0 * hi.value - lo.value;
      res.converged = std::abs(lo.value - hi.value) <= 1e-4;
      res.optimizer_sigma = as_cond_density(rho, cond, hi.sigma_star);
      return res;
    }
  }
  throw Error("unreachable alpha kind");
}

// ---------------------------------------------------------------------------
// Optimizer for the sandwiched up-entropy.

namespace {

// Projection of a Hermitian matrix onto the density simplex (PSD, trace one)
// in Frobenius norm: project the spectrum onto the probability simplex.
ComplexMatrix project_to_density(const ComplexMatrix& h) {
  EigResult e = eig_hermitian_matrix(h);
  std::vector<double>& lam = e.eigenvalues;  // descending
  const int n = static_cast<int>(lam.size());
  double cumsum = 0.0;
  double theta = 0.0;
  int support = 0;
  for (int k = 0; k < n; ++k) {
    cumsum += lam[static_cast<size_t>(k)];
    const double cand = (cumsum - 1.0) / (k + 1);
    if (lam[static_cast<size_t>(k)] - cand > 0.0) {
      theta = cand;
      support = k + 1;
    }
  }
  (void)support;
  std::vector<double> f(lam.size());
  for (size_t k = 0; k < lam.size(); ++k) f[k] = std::max(0.0, lam[k] - theta);
  SpectralDecomposition d{std::move(e.eigenvalues), std::move(e.vectors)};
  return spectral_function(d, f);
}

ComplexMatrix mix_identity(const ComplexMatrix& sigma, double eps) {
  const int n = sigma.rows;
  ComplexMatrix out = (1.0 / (1.0 + n * eps)) * sigma;
  for (int i = 0; i < n; ++i) out.at(i, i) += eps / (1.0 + n * eps);
  return out;
}

// D~_alpha(rho || 1_target (x) sigma) in bits as a function of sigma on the
// conditioning system, with enough intermediates kept for the analytic
// gradient. Mirrors the d_sandwiched finite-alpha path.
class SandwichedObjective {
 public:
  SandwichedObjective(const DensityOperator& rho, const std::string& target, const std::string& cond,
                      double alpha)
      : rho_(rho), target_(target), cond_(cond), alpha_(alpha), exp_((1.0 - alpha) / (2.0 * alpha)) {
    dim_cond_ = label_dim(rho, cond);
    cond_first_ = (rho.layout.labels.front() == cond);
    dim_other_ = rho.op.dim / dim_cond_;
  }

  double alpha() const { return alpha_; }
  int dim_cond() const { return dim_cond_; }

  ComplexMatrix embed(const ComplexMatrix& on_cond) const {
    const ComplexMatrix ident = ComplexMatrix::identity(dim_other_);
    return cond_first_ ? tensor_product(on_cond, ident) : tensor_product(ident, on_cond);
  }

  double value(const ComplexMatrix& sigma) const {
    SpectralDecomposition ds = eig_hermitian(HermitianOperator(hermitian_part(sigma)));
    return value_from_spectrum(ds);
  }

  // Gradient as a Hermitian matrix on the conditioning system; valid at
  // interior sigma. Returns the objective value as well.
  double value_and_gradient(const ComplexMatrix& sigma, ComplexMatrix& grad) const {
    SpectralDecomposition ds = eig_hermitian(HermitianOperator(hermitian_part(sigma)));
    const double cut = support_cutoff(ds.eigenvalues);
    std::vector<double> spow(ds.eigenvalues.size());
    for (size_t j = 0; j < spow.size(); ++j)
      spow[j] = (ds.eigenvalues[j] > cut) ? std::pow(ds.eigenvalues[j], exp_) : 0.0;
    const ComplexMatrix s_cond = spectral_function(ds, spow);
    const ComplexMatrix s_full = embed(s_cond);
    const ComplexMatrix x = hermitian_part(multiply(s_full, multiply(rho_.op.matrix, s_full)));
    EigResult ex = eig_hermitian_matrix(x);
    const double xi_cut = support_cutoff(ex.eigenvalues);
    const double xi_max = ex.eigenvalues.front();
    if (!(xi_max > 0.0)) throw Error("sandwiched objective: vanishing operator");

    std::vector<double> terms;
    double t_hat = 0.0;
    std::vector<double> ppow(ex.eigenvalues.size(), 0.0);
    for (size_t k = 0; k < ex.eigenvalues.size(); ++k) {
      const double xi = ex.eigenvalues[k];
      if (xi <= xi_cut) continue;
      terms.push_back(alpha_ * std::log(xi));
      t_hat += std::pow(xi / xi_max, alpha_);
      ppow[k] = std::pow(xi / xi_max, alpha_ - 1.0);
    }
    const double fval = log_sum_exp(terms) / ((alpha_ - 1.0) * ln2);

    SpectralDecomposition dx{std::move(ex.eigenvalues), std::move(ex.vectors)};
    const ComplexMatrix p_hat = spectral_function(dx, ppow);
    const ComplexMatrix y = hermitian_part(multiply(rho_.op.matrix, multiply(s_full, p_hat)));
    const HermitianOperator y_cond = partial_trace(HermitianOperator(y), rho_.layout, {cond_});
    // Pull back through the Frechet derivative of x -> x^exp_ at sigma.
    ComplexMatrix w = adjoint_times(ds.eigenvectors, multiply(y_cond.matrix, ds.eigenvectors));
    for (int k = 0; k < w.rows; ++k)
      for (int l = 0; l < w.cols; ++l) w.at(k, l) *= divided_difference(ds.eigenvalues[static_cast<size_t>(k)], ds.eigenvalues[static_cast<size_t>(l)], cut);
    const ComplexMatrix pulled = multiply(ds.eigenvectors, times_adjoint(w, ds.eigenvectors));
    const double coeff = 2.0 * alpha_ / ((alpha_ - 1.0) * ln2 * xi_max * t_hat);
    grad = coeff * pulled;
    grad = hermitian_part(grad);
    return fval;
  }

  double value_and_gradient_fd(const ComplexMatrix& sigma, ComplexMatrix& grad) const {
    const int n = sigma.rows;
    grad = ComplexMatrix(n, n);
    const double h = 1e-6;
    for (int k = 0; k < n; ++k)
      for (int l = k; l < n; ++l) {
        ComplexMatrix d1(n, n);
        if (k == l) {
          d1.at(k, k) = 1.0;
          const double der = central_diff(sigma, d1, h);
          grad.at(k, k) = der;
        } else {
          d1.at(k, l) = 1.0;
          d1.at(l, k) = 1.0;
          const double re = central_diff(sigma, d1, h) / 2.0;
          ComplexMatrix d2(n, n);
          d2.at(k, l) = cxd(0.0, 1.0);
          d2.at(l, k) = cxd(0.0, -1.0);
          const double im = central_diff(sigma, d2, h) / 2.0;
          grad.at(k, l) = cxd(re, im);
          grad.at(l, k) = cxd(re, -im);
        }
      }
    return value(sigma);
  }

 private:
  double central_diff(const ComplexMatrix& sigma, const ComplexMatrix& delta, double h) const {
    ComplexMatrix plus = sigma, minus = sigma;
    for (size_t i = 0; i < sigma.size(); ++i) {
      plus.data[i] += h * delta.data[i];
      minus.data[i] -= h * delta.data[i];
    }
    return (value(plus) - value(minus)) / (2.0 * h);
  }

  double divided_difference(double a, double b, double cut) const {
    const bool sa = a > cut, sb = b > cut;
    if (!sa && !sb) return 0.0;
    if (sa && sb) {
      if (std::abs(a - b) <= 1e-10 * std::max(a, b)) return exp_ * std::pow(0.5 * (a + b), exp_ - 1.0);
      return (std::pow(a, exp_) - std::pow(b, exp_)) / (a - b);
    }
    const double live = sa ? a : b;
    return std::pow(live, exp_) / live;
  }

  double value_from_spectrum(const SpectralDecomposition& ds) const {
    const double cut = support_cutoff(ds.eigenvalues);
    const double mu_max = ds.eigenvalues.front();
    if (!(mu_max > 0.0)) return kInf;
    std::vector<double> f(ds.eigenvalues.size());
    for (size_t j = 0; j < f.size(); ++j)
      f[j] = (ds.eigenvalues[j] > cut) ? std::pow(ds.eigenvalues[j] / mu_max, exp_) : 0.0;
    const ComplexMatrix s_full = embed(spectral_function(ds, f));
    const ComplexMatrix x = hermitian_part(multiply(s_full, multiply(rho_.op.matrix, s_full)));
    EigResult ex = eig_hermitian_matrix(x);
    const double xi_cut = support_cutoff(ex.eigenvalues);
    std::vector<double> terms;
    for (double xi : ex.eigenvalues)
      if (xi > xi_cut) terms.push_back(alpha_ * std::log(xi));
    if (terms.empty()) return kInf;
    return ((1.0 - alpha_) * std::log(mu_max) + log_sum_exp(terms)) / ((alpha_ - 1.0) * ln2);
  }

  const DensityOperator& rho_;
  std::string target_;
  std::string cond_;
  double alpha_;
  double exp_;
  int dim_cond_;
  int dim_other_;
  bool cond_first_;
};

struct DescentOutcome {
  ComplexMatrix sigma;
  double fval = kInf;
  int iterations = 0;
  bool converged = false;
};

// Projected gradient descent with backtracking line search on
// sigma -> D~_alpha(rho || 1 (x) sigma) over the density simplex.
DescentOutcome descend(const SandwichedObjective& obj, ComplexMatrix sigma, const OptimizerConfig& cfg) {
  const bool interior = obj.alpha() > 1.0;
  if (interior) sigma = mix_identity(sigma, kInteriorEps);
  DescentOutcome out;
  double fval = obj.value(sigma);
  if (std::isinf(fval)) {
    // Infeasible start (support mismatch at alpha < 1); nudge to the interior.
    sigma = mix_identity(sigma, 1e-6);
    fval = obj.value(sigma);
    if (std::isinf(fval)) {
      out.sigma = sigma;
      return out;
    }
  }
  double eta = 1.0;
  int stall = 0;
  const double c1 = 1e-4;
  int it = 0;
  bool converged = false;
  for (; it < cfg.max_iterations; ++it) {
    ComplexMatrix grad;
    const double f0 = (cfg.gradient == GradientMode::analytic)
                          ? obj.value_and_gradient(sigma, grad)
                          : obj.value_and_gradient_fd(sigma, grad);
    fval = f0;
    bool accepted = false;
    ComplexMatrix sigma_next;
    double f_next = fval;
    for (int ls = 0; ls < 60 && !accepted; ++ls) {
      ComplexMatrix step = sigma;
      for (size_t i = 0; i < step.size(); ++i) step.data[i] -= eta * grad.data[i];
      sigma_next = project_to_density(step);
      if (interior) sigma_next = mix_identity(sigma_next, kInteriorEps);
      const double dist2 = [&] {
        double s = 0.0;
        for (size_t i = 0; i < sigma.size(); ++i) s += std::norm(sigma_next.data[i] - sigma.data[i]);
        return s;
      }();
      if (dist2 <= 1e-32) break;  // stationary: projection returns the same point
      f_next = obj.value(sigma_next);
      if (f_next <= fval - c1 * dist2 / eta + 1e-15 * std::abs(fval)) {
        accepted = true;
        const double pg_norm = std::sqrt(dist2) / eta;
        sigma = sigma_next;
        if (std::abs(fval - f_next) <= cfg.tolerance * std::max(1.0, std::abs(f_next)))
          ++stall;
        else
          stall = 0;
        fval = f_next;
        eta = std::min(eta * 2.0, 1e4);
        if (pg_norm <= 1e-9 || stall >= 3) converged = true;
      } else {
        eta *= 0.5;
      }
    }
    if (!accepted) {
      converged = true;  // no admissible descent direction left at this precision
      break;
    }
    if (converged) break;
  }
  out.sigma = sigma;
  out.fval = fval;
  out.iterations = it + 1;
  out.converged = converged;
  return out;
}

// lim_{alpha->inf} of normalize[(tr_target rho^alpha)^(1/alpha)]: eigenvalue
// flag construction. Used as the third restart of the alpha=inf optimizer;
// for classical states it is the exact minimizer.
ComplexMatrix infinity_order_guess(const DensityOperator& rho, const std::string& cond) {
  SpectralDecomposition d = eig_hermitian(rho.op);
  const double cut = support_cutoff(d.eigenvalues);
  const int dc = rho.layout.keep({cond}).total_dim();
  ComplexMatrix accum_proj(dc, dc);   // projector onto the flag built so far
  ComplexMatrix limit(dc, dc);
  double covered = 0.0;
  for (const auto& group : degenerate_groups(d.eigenvalues)) {
    const double nu = d.eigenvalues[static_cast<size_t>(group.front())];
    if (nu <= cut) break;
    std::vector<double> sel(d.eigenvalues.size(), 0.0);
    for (int idx : group) sel[static_cast<size_t>(idx)] = 1.0;
    const HermitianOperator marg(hermitian_part(ComplexMatrix(spectral_function(d, sel))));
    const HermitianOperator r = partial_trace(marg, rho.layout, {cond});
    // Compress onto the orthogonal complement of the flag.
    ComplexMatrix comp = ComplexMatrix::identity(dc) - accum_proj;
    ComplexMatrix c = hermitian_part(multiply(comp, multiply(r.matrix, comp)));
    EigResult ec = eig_hermitian_matrix(c);
    const double ccut = support_cutoff(ec.eigenvalues);
    std::vector<double> f(ec.eigenvalues.size(), 0.0);
    int added = 0;
    for (size_t k = 0; k < ec.eigenvalues.size(); ++k)
      if (ec.eigenvalues[k] > std::max(ccut, 1e-12)) {
        f[k] = 1.0;
        ++added;
      }
    if (added > 0) {
      SpectralDecomposition dc_spec{std::move(ec.eigenvalues), std::move(ec.vectors)};
      const ComplexMatrix q = spectral_function(dc_spec, f);
      accum_proj = accum_proj + q;
      limit = limit + nu * q;
      covered += added;
    }
    if (covered >= dc - 0.5) break;
  }
  if (trace(limit).real() <= 0.0) {
    // Degenerate fallback: maximally mixed.
    ComplexMatrix mixed = ComplexMatrix::identity(dc);
    return (1.0 / dc) * mixed;
  }
  return (1.0 / trace(limit).real()) * limit;
}

struct InfObjective {
  const DensityOperator& rho;
  std::string cond;
  ComplexMatrix root;        // rho^(1/2) on the full space
  HermitianOperator rho_cond;
  const SandwichedObjective* embedder;

  // -H = log2 lmax(rho^1/2 (1 (x) sigma)^-1 rho^1/2). Uses the exact
  // pseudo-inverse when sigma dominates rho_cond, otherwise mixes in eps*1.
  double value(const ComplexMatrix& sigma, ComplexMatrix* top_uu = nullptr) const {
    ComplexMatrix sig = sigma;
    HermitianOperator sig_op(hermitian_part(sig));
    if (!dominates(rho_cond, sig_op)) {
      sig = mix_identity(sig, kInteriorEps);
      sig_op = HermitianOperator(hermitian_part(sig));
    }
    SpectralDecomposition ds = eig_hermitian(sig_op);
    const double cut = support_cutoff(ds.eigenvalues);
    std::vector<double> inv(ds.eigenvalues.size());
    for (size_t j = 0; j < inv.size(); ++j)
      inv[j] = (ds.eigenvalues[j] > cut) ? 1.0 / ds.eigenvalues[j] : 0.0;
    const ComplexMatrix s_inv = embedder->embed(spectral_function(ds, inv));
    const ComplexMatrix x = hermitian_part(multiply(root, multiply(s_inv, root)));
    EigResult ex = eig_hermitian_matrix(x);
    const double lmax = ex.eigenvalues.front();
    if (!(lmax > 0.0)) return kInf;
    if (top_uu) {
      // u = (1 (x) sigma)^-1 rho^1/2 w for the top eigenvector w; the
      // subgradient of lmax with respect to sigma is -tr_target(u u^dagger).
      ComplexMatrix w(x.rows, 1);
      for (int i = 0; i < x.rows; ++i) w.at(i, 0) = ex.vectors.at(i, 0);
      const ComplexMatrix u = multiply(s_inv, multiply(root, w));
      ComplexMatrix uu(x.rows, x.rows);
      for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.rows; ++j) uu.at(i, j) = u.at(i, 0) * std::conj(u.at(j, 0));
      const HermitianOperator pulled = partial_trace(HermitianOperator(hermitian_part(uu)), rho.layout, {cond});
      *top_uu = (-1.0 / (lmax * ln2)) * pulled.matrix;
    }
    return std::log2(lmax);
  }
};

EntropyResult h_up_sandwiched_infinity(const DensityOperator& rho, const std::string& target,
                                       const std::string& cond, const OptimizerConfig& cfg) {
  const SandwichedObjective embedder(rho, target, cond, 2.0);  // only for embed()
  InfObjective obj{rho, cond, operator_power(rho.op, 0.5).matrix,
                   partial_trace(rho.op, rho.layout, {cond}), &embedder};

  const int dc = obj.rho_cond.dim;
  std::vector<ComplexMatrix> starts;
  starts.push_back(obj.rho_cond.matrix);
  starts.push_back((1.0 / dc) * ComplexMatrix::identity(dc));
  starts.push_back(infinity_order_guess(rho, cond));

  ComplexMatrix best_sigma = starts.front();
  double best_f = kInf;
  for (const auto& s : starts) {
    const double f = obj.value(s);
    if (f < best_f) {
      best_f = f;
      best_sigma = s;
    }
  }

  // Subgradient descent on the lmax objective from the best start.
  ComplexMatrix sigma = mix_identity(best_sigma, kInteriorEps);
  const int iters = std::max(cfg.max_iterations, 400);
  double best_recent = best_f;
  int last_improvement = 0;
  for (int k = 0; k < iters; ++k) {
    ComplexMatrix g;
    const double f = obj.value(sigma, &g);
    if (f < best_f - 1e-14) {
      best_f = f;
      best_sigma = sigma;
      last_improvement = k;
    }
    const double gnorm = frobenius_norm(g);
    if (gnorm <= 1e-14) break;
    const double eta = 0.1 / ((1.0 + gnorm) * std::sqrt(k + 1.0));
    ComplexMatrix step = sigma;
    for (size_t i = 0; i < step.size(); ++i) step.data[i] -= eta * g.data[i];
    sigma = mix_identity(project_to_density(step), kInteriorEps);
    (void)best_recent;
  }

  EntropyResult res;
  res.value = -best_f;
  res.iterations = iters;
  res.converged = (iters - last_improvement) > iters / 4;
  res.optimizer_sigma = as_cond_density(rho, cond, best_sigma);
  return res;
}

}  // namespace

EntropyResult h_up_sandwiched(const DensityOperator& rho, const std::string& target,
                              const std::string& cond, AlphaParam alpha, const OptimizerConfig& cfg) {
  check_bipartition(rho, target, cond);
  EntropyResult res;
  const HermitianOperator rho_cond = partial_trace(rho.op, rho.layout, {cond});
  const int dc = rho_cond.dim;

  switch (alpha.kind) {
    case AlphaParam::Kind::one:
      res.value = h_down_old(rho, target, cond, AlphaParam::one());
      res.optimizer_sigma = as_cond_density(rho, cond, rho_cond.matrix);
      return res;
    case AlphaParam::Kind::infinity:
      return h_up_sandwiched_infinity(rho, target, cond, cfg);
    case AlphaParam::Kind::zero: {
      // Best-effort numeric alpha -> 0 limit; no closed form is adopted here.
      EntropyResult a = h_up_sandwiched(rho, target, cond, AlphaParam::finite(1e-2), cfg);
      EntropyResult b = h_up_sandwiched(rho, target, cond, AlphaParam::finite(5e-3), cfg);
      res.value = b.value;
      res.converged = a.converged && b.converged && std::abs(a.value - b.value) <= 1e-3;
      res.optimizer_sigma = b.optimizer_sigma;
      res.iterations = (a.iterations ? *a.iterations : 0) + (b.iterations ? *b.iterations : 0);
      return res;
    }
    case AlphaParam::Kind::finite:
      break;
  }

  const double a = alpha.value;
  const SandwichedObjective obj(rho, target, cond, a);

  if (dc == 1) {
    ComplexMatrix one(1, 1);
    one.at(0, 0) = 1.0;
    res.value = -obj.value(one);
    res.optimizer_sigma = as_cond_density(rho, cond, one);
    res.iterations = 0;
    return res;
  }

  std::vector<ComplexMatrix> starts;
  starts.push_back(rho_cond.matrix);
  starts.push_back((1.0 / dc) * ComplexMatrix::identity(dc));
  {
    // Lemma-style guess normalize((tr_target rho^alpha)^(1/alpha)); exact for
    // commuting states, a strong warm start elsewhere.
    const UpOldParts guess = h_up_old_finite(rho, target, cond, a);
    const cxd tr = trace(guess.sigma_star);
    if (tr.real() > 0.0) starts.push_back((1.0 / tr.real()) * guess.sigma_star);
  }
  const int nrestarts = std::min<int>(cfg.restarts, static_cast<int>(starts.size()));

  DescentOutcome best;
  int total_iters = 0;
  bool any_converged = false;
  for (int r = 0; r < nrestarts; ++r) {
    DescentOutcome out = descend(obj, starts[static_cast<size_t>(r)], cfg);
    total_iters += out.iterations;
    any_converged = any_converged || out.converged;
    if (out.fval < best.fval) best = std::move(out);
  }
  if (std::isinf(best.fval)) throw Error("h_up_sandwiched: optimizer found no feasible sigma");

  res.value = -best.fval;
  res.iterations = total_iters;
  res.converged = any_converged;
  res.optimizer_sigma = as_cond_density(rho, cond, best.sigma);

  if (std::abs(a - 0.5) < 1e-12) {
    // Cross-check through the fidelity form of the conditional max-entropy.
    const double via_fid =
        2.0 * std::log2(fidelity(rho.op, identity_tensor(rho, target, cond,
                                                         HermitianOperator(hermitian_part(best.sigma)))));
    if (std::abs(via_fid - res.value) > 1e-8) res.converged = false;
  }
  return res;
}

EntropyResult entropy(EntropyKind kind, const DensityOperator& rho, const std::string& target,
                      const std::string& cond, AlphaParam alpha, const OptimizerConfig& config) {
  EntropyResult res;
  if (kind.arrow == Arrow::down) {
    res.value = (kind.family == DivergenceFamily::old_renyi)
                    ? h_down_old(rho, target, cond, alpha)
                    : h_down_sandwiched(rho, target, cond, alpha);
    return res;
  }
  return (kind.family == DivergenceFamily::old_renyi) ? h_up_old(rho, target, cond, alpha)
                                                      : h_up_sandwiched(rho, target, cond, alpha, config);
}

std::string kind_name(EntropyKind kind) {
  const std::string fam = (kind.family == DivergenceFamily::old_renyi) ? "old" : "sandwiched";
  return fam + ((kind.arrow == Arrow::down) ? "-down" : "-up");
}

EntropyKind parse_kind(const std::string& name) {
  if (name == "old-down") return {DivergenceFamily::old_renyi, Arrow::down};
  if (name == "old-up") return {DivergenceFamily::old_renyi, Arrow::up};
  if (name == "sandwiched-down") return {DivergenceFamily::sandwiched, Arrow::down};
  if (name == "sandwiched-up") return {DivergenceFamily::sandwiched, Arrow::up};
  throw UsageError("unknown entropy kind: " + name +
                   " (expected old-down|old-up|sandwiched-down|sandwiched-up)");
}

}  // namespace qre
