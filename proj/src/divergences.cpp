#include "qre/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qre/numeric.hpp"

namespace qre {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

AlphaParam AlphaParam::finite(double a) {
  if (!std::isfinite(a)) throw UsageError("alpha must be finite here");
  if (a <= 0.0) throw UsageError("finite alpha must be positive (use alpha=0 for the limit)");
  if (std::abs(a - 1.0) < tol::alpha_one_window)
    throw UsageError("alpha too close to 1; use alpha=1 (the alpha->1 limit) instead");
  return {Kind::finite, a};
}

AlphaParam AlphaParam::infinity() { return {Kind::infinity, std::numeric_limits<double>::infinity()}; }

AlphaParam AlphaParam::from_value(double a) {
  if (std::isnan(a)) throw UsageError("alpha is NaN");
  if (std::isinf(a)) {
    if (a < 0.0) throw UsageError("alpha must be nonnegative");
    return infinity();
  }
  if (a == 0.0) return zero();
  if (a == 1.0) return one();
  if (a < 0.0) throw UsageError("alpha must be nonnegative");
  return finite(a);
}

AlphaParam AlphaParam::parse(const std::string& text) {
  std::string t = text;
  for (char& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "inf" || t == "infinity" || t == "+inf") return infinity();
  size_t pos = 0;
  double v;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw UsageError("cannot parse alpha value: " + text);
  }
  if (pos != t.size()) throw UsageError("cannot parse alpha value: " + text);
  return from_value(v);
}

double AlphaParam::numeric() const {
  switch (kind) {
    case Kind::zero: return 0.0;
    case Kind::one: return 1.0;
    case Kind::infinity: return std::numeric_limits<double>::infinity();
    case Kind::finite: return value;
  }
  return value;
}

std::string AlphaParam::str() const {
  switch (kind) {
    case Kind::zero: return "0";
    case Kind::one: return "1";
    case Kind::infinity: return "inf";
    case Kind::finite: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.12g", value);
      return buf;
    }
  }
  return "?";
}

DensityOperator::DensityOperator(HermitianOperator o, SubsystemLayout l) : op(std::move(o)), layout(std::move(l)) {
  if (layout.total_dim() != op.dim)
    throw PreconditionError("density operator layout does not match dimension");
  const double tr = trace(op.matrix).real();
  if (std::abs(tr - 1.0) > tol::trace_one)
    throw PreconditionError("density operator trace differs from 1 by " + std::to_string(tr - 1.0));
  SpectralDecomposition d = eig_hermitian(op);
  const double scale = std::max(1.0, d.eigenvalues.empty() ? 0.0 : std::abs(d.eigenvalues.front()));
  if (!d.eigenvalues.empty() && d.eigenvalues.back() < -tol::psd * scale)
    throw PreconditionError("density operator has negative eigenvalue " + std::to_string(d.eigenvalues.back()));
}

DensityOperator marginal(const DensityOperator& rho, const std::vector<std::string>& keep) {
  return DensityOperator(partial_trace(rho.op, rho.layout, keep), rho.layout.keep(keep));
}

double von_neumann_entropy_bits(const HermitianOperator& m) {
  SpectralDecomposition d = eig_hermitian(m);
  const double cut = support_cutoff(d.eigenvalues);
  double h = 0.0;
  for (double lam : d.eigenvalues)
    if (lam > cut) h -= lam * std::log2(lam);
  return h;
}

namespace {

struct Spectra {
  SpectralDecomposition rho;
  SpectralDecomposition sigma;
  double rho_cut = 0.0;
  double sigma_cut = 0.0;
  ComplexMatrix overlap_sq;  // |<v_i | w_j>|^2 as real parts
};

Spectra decompose_pair(const DensityOperator& rho, const HermitianOperator& sigma) {
  if (rho.op.dim != sigma.dim) throw PreconditionError("divergence: dimension mismatch");
  if (max_abs(sigma.matrix) == 0.0) throw PreconditionError("divergence: sigma is the zero operator");
  Spectra s;
  s.rho = eig_hermitian(rho.op);
  s.sigma = eig_hermitian(sigma);
  if (!s.sigma.eigenvalues.empty()) {
    const double scale = std::max(1.0, std::abs(s.sigma.eigenvalues.front()));
    if (s.sigma.eigenvalues.back() < -tol::psd * scale)
      throw PreconditionError("divergence: sigma has negative eigenvalue");
  }
  s.rho_cut = support_cutoff(s.rho.eigenvalues);
  s.sigma_cut = support_cutoff(s.sigma.eigenvalues);
  ComplexMatrix o = adjoint_times(s.rho.eigenvectors, s.sigma.eigenvectors);
  s.overlap_sq = ComplexMatrix(o.rows, o.cols);
  for (size_t i = 0; i < o.size(); ++i) s.overlap_sq.data[i] = std::norm(o.data[i]);
  return s;
}

void require_domination(const DensityOperator& rho, const HermitianOperator& sigma, const char* where) {
  if (!dominates(rho.op, sigma))
    throw PreconditionError(std::string(where) + ": sigma does not dominate rho (rho << sigma violated)");
}

// log2 tr(rho^alpha sigma^(1-alpha)) via pairwise eigenvalue terms in the log
// domain; stable for alpha far from 1 in both directions.
double log2_trace_old_power(const Spectra& s, double alpha) {
  std::vector<double> terms;
  terms.reserve(s.rho.eigenvalues.size() * s.sigma.eigenvalues.size());
  for (size_t i = 0; i < s.rho.eigenvalues.size(); ++i) {
    const double nu = s.rho.eigenvalues[i];
    if (nu <= s.rho_cut) continue;
    for (size_t j = 0; j < s.sigma.eigenvalues.size(); ++j) {
      const double mu = s.sigma.eigenvalues[j];
      if (mu <= s.sigma_cut) continue;
      const double o = s.overlap_sq.at(static_cast<int>(i), static_cast<int>(j)).real();
      if (o <= 1e-300) continue;
      terms.push_back(alpha * std::log(nu) + (1.0 - alpha) * std::log(mu) + std::log(o));
    }
  }
  return log2_sum_exp(terms);
}

double relative_entropy_bits(const Spectra& s) {
  double acc = 0.0;
  for (size_t i = 0; i < s.rho.eigenvalues.size(); ++i) {
    const double nu = s.rho.eigenvalues[i];
    if (nu <= s.rho_cut) continue;
    acc += nu * std::log2(nu);
    for (size_t j = 0; j < s.sigma.eigenvalues.size(); ++j) {
      const double mu = s.sigma.eigenvalues[j];
      if (mu <= s.sigma_cut) continue;
      const double o = s.overlap_sq.at(static_cast<int>(i), static_cast<int>(j)).real();
      acc -= nu * o * std::log2(mu);
    }
  }
  return acc;
}

// log2 max over eigenvalue ratios nu_i/mu_j restricted to pairs whose
// eigenvectors overlap: |P_j v_i| above the overlap cutoff, with P_j the
// projector onto the (degeneracy-grouped) mu_j eigenspace.
double d_old_infinity(const Spectra& s) {
  const auto groups = degenerate_groups(s.sigma.eigenvalues);
  double best = 0.0;
  for (size_t i = 0; i < s.rho.eigenvalues.size(); ++i) {
    const double nu = s.rho.eigenvalues[i];
    if (nu <= s.rho_cut) continue;
    for (const auto& g : groups) {
      const double mu = s.sigma.eigenvalues[static_cast<size_t>(g.front())];
      if (mu <= s.sigma_cut) continue;
      double w = 0.0;
      for (int j : g) w += s.overlap_sq.at(static_cast<int>(i), j).real();
      if (w > tol::eigvec_overlap * tol::eigvec_overlap) best = std::max(best, nu / mu);
    }
  }
  if (best <= 0.0) throw Error("d_old infinity: no overlapping eigenvalue pair found");
  return std::log2(best);
}

// Eq.(4)-style maximization: over all size-s subsets of the support
// eigenvectors of sigma whose projections onto supp(rho) stay linearly
// independent, maximize the eigenvalue sum. Kernel eigenvectors of sigma can
// never improve the maximum, so only support eigenvectors are enumerated.
double d_sandwiched_zero(const DensityOperator& rho, const HermitianOperator& sigma, const Spectra& s) {
  const HermitianOperator proj = support_projector(rho.op);
  const ComplexMatrix proj_sigma = multiply(proj.matrix, sigma.matrix);
  const std::vector<double> sv = singular_values(proj_sigma);
  const double sv_cut = sv.empty() ? 0.0 : tol::support_cutoff_rel * sv.front();
  int rank_s = 0;
  for (double v : sv)
    if (v > sv_cut) ++rank_s;
  if (rank_s == 0) return kInf;

  std::vector<int> candidates;
  for (size_t j = 0; j < s.sigma.eigenvalues.size(); ++j)
    if (s.sigma.eigenvalues[j] > s.sigma_cut) candidates.push_back(static_cast<int>(j));
  if (static_cast<int>(candidates.size()) > tol::subset_rank_cap)
    throw CapabilityError("sandwiched alpha->0 subset search supports sigma rank up to " +
                          std::to_string(tol::subset_rank_cap) + ", got " + std::to_string(candidates.size()));

  const int dim = rho.op.dim;
  const int r = static_cast<int>(candidates.size());
  // Projected candidate columns.
  ComplexMatrix projected(dim, r);
  for (int c = 0; c < r; ++c) {
    for (int row = 0; row < dim; ++row) {
      cxd acc = 0.0;
      for (int k = 0; k < dim; ++k) acc += proj.matrix.at(row, k) * s.sigma.eigenvectors.at(k, candidates[static_cast<size_t>(c)]);
      projected.at(row, c) = acc;
    }
  }

  double best = -1.0;
  std::vector<int> pick(static_cast<size_t>(rank_s));
  for (int i = 0; i < rank_s; ++i) pick[static_cast<size_t>(i)] = i;
  while (true) {
    ComplexMatrix sub(dim, rank_s);
    double lam_sum = 0.0;
    for (int c = 0; c < rank_s; ++c) {
      const int cand = pick[static_cast<size_t>(c)];
      lam_sum += s.sigma.eigenvalues[static_cast<size_t>(candidates[static_cast<size_t>(cand)])];
      for (int row = 0; row < dim; ++row) sub.at(row, c) = projected.at(row, cand);
    }
    if (lam_sum > best) {
      const std::vector<double> ssv = singular_values(sub);
      if (ssv.back() > tol::subset_independence) best = lam_sum;
    }
    // Next combination in lexicographic order.
    int k = rank_s - 1;
    while (k >= 0 && pick[static_cast<size_t>(k)] == r - rank_s + k) --k;
    if (k < 0) break;
    ++pick[static_cast<size_t>(k)];
    for (int j = k + 1; j < rank_s; ++j) pick[static_cast<size_t>(j)] = pick[static_cast<size_t>(j - 1)] + 1;
  }
  if (best < 0.0) throw Error("sandwiched alpha->0: no linearly independent subset of size rank(P sigma)");
  return -std::log2(best);
}

}  // namespace

double d_old(const DensityOperator& rho, const HermitianOperator& sigma, AlphaParam alpha) {
  Spectra s = decompose_pair(rho, sigma);
  switch (alpha.kind) {
    case AlphaParam::Kind::zero: {
      // -log2 tr(Pi_rho sigma)
      double t = 0.0;
      for (size_t i = 0; i < s.rho.eigenvalues.size(); ++i) {
        if (s.rho.eigenvalues[i] <= s.rho_cut) continue;
        for (size_t j = 0; j < s.sigma.eigenvalues.size(); ++j) {
          const double mu = s.sigma.eigenvalues[j];
          if (mu <= s.sigma_cut) continue;
          t += mu * s.overlap_sq.at(static_cast<int>(i), static_cast<int>(j)).real();
        }
      }
      if (t <= 0.0) return kInf;
      return -std::log2(t);
    }
    case AlphaParam::Kind::one:
      require_domination(rho, sigma, "d_old (alpha=1)");
      return relative_entropy_bits(s);
    case AlphaParam::Kind::infinity:
      require_domination(rho, sigma, "d_old (alpha=inf)");
      return d_old_infinity(s);
    case AlphaParam::Kind::finite: {
      const double a = alpha.value;
      if (a > 1.0) require_domination(rho, sigma, "d_old (alpha>1)");
      const double log2_t = log2_trace_old_power(s, a);
      if (std::isinf(log2_t) && log2_t < 0.0) return kInf;  // disjoint supports
      return log2_t / (a - 1.0);
    }
  }
  throw Error("unreachable alpha kind");
}

double d_sandwiched(const DensityOperator& rho, const HermitianOperator& sigma, AlphaParam alpha) {
  Spectra s = decompose_pair(rho, sigma);
  switch (alpha.kind) {
    case AlphaParam::Kind::zero:
      return d_sandwiched_zero(rho, sigma, s);
    case AlphaParam::Kind::one:
      require_domination(rho, sigma, "d_sandwiched (alpha=1)");
      return relative_entropy_bits(s);
    case AlphaParam::Kind::infinity: {
      require_domination(rho, sigma, "d_sandwiched (alpha=inf)");
      std::vector<double> f(s.sigma.eigenvalues.size());
      for (size_t j = 0; j < f.size(); ++j)
        f[j] = (s.sigma.eigenvalues[j] > s.sigma_cut) ? 1.0 / std::sqrt(s.sigma.eigenvalues[j]) : 0.0;
      const ComplexMatrix root_inv = spectral_function(s.sigma, f);
      const ComplexMatrix x = hermitian_part(multiply(root_inv, multiply(rho.op.matrix, root_inv)));
      EigResult e = eig_hermitian_matrix(x);
      const double lam = e.eigenvalues.empty() ? 0.0 : e.eigenvalues.front();
      if (lam <= 0.0) return kInf;
      return std::log2(lam);
    }
    case AlphaParam::Kind::finite: {
      const double a = alpha.value;
      if (a > 1.0) require_domination(rho, sigma, "d_sandwiched (alpha>1)");
      const double mu_max = s.sigma.eigenvalues.front();
      const double e = (1.0 - a) / (2.0 * a);
      std::vector<double> f(s.sigma.eigenvalues.size());
      for (size_t j = 0; j < f.size(); ++j)
        f[j] = (s.sigma.eigenvalues[j] > s.sigma_cut) ? std::pow(s.sigma.eigenvalues[j] / mu_max, e) : 0.0;
      const ComplexMatrix sand = spectral_function(s.sigma, f);
      const ComplexMatrix x = hermitian_part(multiply(sand, multiply(rho.op.matrix, sand)));
      EigResult ex = eig_hermitian_matrix(x);
      const double cut = support_cutoff(ex.eigenvalues);
      std::vector<double> terms;
      for (double xi : ex.eigenvalues)
        if (xi > cut) terms.push_back(a * std::log(xi));
      if (terms.empty()) return kInf;
      const double ln_t = (1.0 - a) * std::log(mu_max) + log_sum_exp(terms);
      return ln_t / ((a - 1.0) * ln2);
    }
  }
  throw Error("unreachable alpha kind");
}

double d_alpha_z(const DensityOperator& rho, const HermitianOperator& sigma, double alpha, double z) {
  if (!(z > 0.0)) throw PreconditionError("d_alpha_z requires z > 0");
  if (!(alpha > 0.0)) throw PreconditionError("d_alpha_z requires alpha > 0");
  if (std::abs(alpha - 1.0) < tol::alpha_one_window)
    throw UsageError("d_alpha_z: alpha too close to 1");
  Spectra s = decompose_pair(rho, sigma);
  if (alpha > 1.0) require_domination(rho, sigma, "d_alpha_z (alpha>1)");

  const double nu_max = s.rho.eigenvalues.front();
  const double mu_max = s.sigma.eigenvalues.front();
  const double a_exp = alpha / (2.0 * z);
  const double b_exp = (1.0 - alpha) / z;
  std::vector<double> fr(s.rho.eigenvalues.size()), fs(s.sigma.eigenvalues.size());
  for (size_t i = 0; i < fr.size(); ++i)
    fr[i] = (s.rho.eigenvalues[i] > s.rho_cut) ? std::pow(s.rho.eigenvalues[i] / nu_max, a_exp) : 0.0;
  for (size_t j = 0; j < fs.size(); ++j)
    fs[j] = (s.sigma.eigenvalues[j] > s.sigma_cut) ? std::pow(s.sigma.eigenvalues[j] / mu_max, b_exp) : 0.0;
  const ComplexMatrix a_half = spectral_function(s.rho, fr);
  const ComplexMatrix b_mid = spectral_function(s.sigma, fs);
  const ComplexMatrix x = hermitian_part(multiply(a_half, multiply(b_mid, a_half)));
  EigResult ex = eig_hermitian_matrix(x);
  const double cut = support_cutoff(ex.eigenvalues);
  std::vector<double> terms;
  for (double xi : ex.eigenvalues)
    if (xi > cut) terms.push_back(z * std::log(xi));
  if (terms.empty()) return kInf;
  const double ln_t = alpha * std::log(nu_max) + (1.0 - alpha) * std::log(mu_max) + log_sum_exp(terms);
  return ln_t / ((alpha - 1.0) * ln2);
}

}  // namespace qre
