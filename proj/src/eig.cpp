#include "qre/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qre/kernels.hpp"

namespace qre {

namespace {

// Rotation diagonalizing the Hermitian 2x2 block [[app, apq], [conj(apq), aqq]].
// Returns c (real), phase (unit modulus) and s (real) with the convention
//   new_p = phase*c * p - s * q,  new_q = phase*s * p + c * q   (columns).
struct JacobiRotation {
  double c;
  double s;
  cxd phase;
};

JacobiRotation make_rotation(double app, double aqq, cxd apq) {
  const double h = std::abs(apq);
  const cxd phase = apq / h;
  const double tau = (aqq - app) / (2.0 * h);
  double t;
  if (tau >= 0.0)
    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
  else
    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  return {c, t * c, phase};
}

}  // namespace

EigResult eig_hermitian_matrix(const ComplexMatrix& m_in) {
  if (!m_in.square()) throw PreconditionError("eigendecomposition needs a square matrix");
  const int n = m_in.rows;
  ComplexMatrix a = hermitian_part(m_in);
  // Vt rows are the columns of the accumulated unitary V.
  ComplexMatrix vt = ComplexMatrix::identity(n);

  const double scale = std::max(max_abs(a), 1e-300);
  const double conv_tol = 1e-15 * scale;
  const double rotate_tol = 1e-18 * scale;
  const int max_sweeps = 60;
  auto& kn = kern::active();

  bool converged = (n == 1);
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    double off_max = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off_max = std::max(off_max, std::abs(a.at(p, q)));
    if (off_max <= conv_tol) {
      converged = true;
      break;
    }
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cxd apq = a.at(p, q);
        if (std::abs(apq) <= rotate_tol) continue;
        const JacobiRotation r = make_rotation(a.at(p, p).real(), a.at(q, q).real(), apq);
        const cxd pc = r.phase * r.c, ps = r.phase * r.s;
        // a <- J^dagger a J with J embedding [[pc, ps], [-s, c]] at (p, q).
        kn.rot2(&a.data[static_cast<size_t>(p) * n], &a.data[static_cast<size_t>(q) * n], n,
                std::conj(pc), cxd(-r.s), std::conj(ps), cxd(r.c));
        for (int i = 0; i < n; ++i) {
          const cxd x = a.at(i, p), y = a.at(i, q);
          a.at(i, p) = pc * x - r.s * y;
          a.at(i, q) = ps * x + r.c * y;
        }
        a.at(p, q) = 0.0;
        a.at(q, p) = 0.0;
        a.at(p, p).imag(0.0);
        a.at(q, q).imag(0.0);
        kn.rot2(&vt.data[static_cast<size_t>(p) * n], &vt.data[static_cast<size_t>(q) * n], n,
                pc, cxd(-r.s), ps, cxd(r.c));
      }
    }
  }
  if (!converged)
    throw ConvergenceError("Jacobi eigensolver did not converge for dimension " + std::to_string(n), n);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a.at(i, i).real() > a.at(j, j).real(); });

  EigResult res;
  res.eigenvalues.resize(n);
  res.vectors = ComplexMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    res.eigenvalues[j] = a.at(order[j], order[j]).real();
    for (int i = 0; i < n; ++i) res.vectors.at(i, j) = vt.at(order[j], i);
  }
  return res;
}

std::vector<double> singular_values(const ComplexMatrix& m) {
  // Work on T = transpose(m): rows of T are the (unconjugated) columns of m,
  // so column inner products become contiguous dot_conj calls.
  ComplexMatrix t = transpose(m);
  const int ncols = t.rows;
  const int len = t.cols;
  auto& kn = kern::active();

  const int max_sweeps = 60;
  bool converged = (ncols == 1);
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    bool rotated = false;
    for (int i = 0; i < ncols; ++i) {
      for (int j = i + 1; j < ncols; ++j) {
        cxd* ri = &t.data[static_cast<size_t>(i) * len];
        cxd* rj = &t.data[static_cast<size_t>(j) * len];
        const double a = kn.dot_conj(ri, ri, len).real();
        const double b = kn.dot_conj(rj, rj, len).real();
        const cxd g = kn.dot_conj(ri, rj, len);
        if (a <= 0.0 || b <= 0.0) continue;
        if (std::abs(g) <= 1e-15 * std::sqrt(a * b)) continue;
        rotated = true;
        const JacobiRotation r = make_rotation(a, b, g);
        const cxd pc = r.phase * r.c, ps = r.phase * r.s;
        kn.rot2(ri, rj, len, pc, cxd(-r.s), ps, cxd(r.c));
      }
    }
    if (!rotated) converged = true;
  }
  if (!converged)
    throw ConvergenceError("one-sided Jacobi SVD did not converge for " + std::to_string(ncols) + " columns", ncols);

  std::vector<double> sv(ncols);
  for (int i = 0; i < ncols; ++i)
    sv[i] = std::sqrt(std::max(0.0, kn.dot_conj(&t.data[static_cast<size_t>(i) * len], &t.data[static_cast<size_t>(i) * len], len).real()));
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

}  // namespace qre
