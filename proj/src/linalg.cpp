#include "isores/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "isores/error.hpp"
#include "isores/parallel.hpp"

namespace isores {

namespace {

void require_square(const CMatrix& a, const char* who) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::invalid_parameter, std::string(who) + ": matrix is not square");
  }
}

void check_finite(const CMatrix& a, const char* who) {
  if (!a.allFinite()) {
    throw Error(ErrorKind::non_convergence, std::string(who) + ": matrix has non-finite entries");
  }
}

}  // namespace

EigenResult eigen_all(const CMatrix& a, bool want_right, bool want_left) {
  require_square(a, "eigen_all");
  check_finite(a, "eigen_all");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  EigenResult out;
  if (n == 0) return out;

  CMatrix work = a;
  std::vector<cplx> w(n);
  CMatrix vl(want_left ? n : 1, want_left ? n : 1);
  CMatrix vr(want_right ? n : 1, want_right ? n : 1);
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, want_left ? 'V' : 'N', want_right ? 'V' : 'N', n, work.data(),
                    n, w.data(), vl.data(), vl.rows(), vr.data(), vr.rows());
  if (info != 0) {
    throw Error(ErrorKind::non_convergence, "zgeev failed, info = " + std::to_string(info));
  }
  out.values = std::move(w);
  if (want_right) out.right = std::move(vr);
  if (want_left) out.left = std::move(vl);
  return out;
}

std::vector<cplx> SchurForm::eigenvalues() const {
  std::vector<cplx> ev(static_cast<std::size_t>(t.rows()));
  for (Eigen::Index i = 0; i < t.rows(); ++i) ev[static_cast<std::size_t>(i)] = t(i, i);
  return ev;
}

SchurForm schur(const CMatrix& a, bool want_vectors) {
  require_square(a, "schur");
  check_finite(a, "schur");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  SchurForm out;
  out.t = a;
  if (n == 0) return out;
  std::vector<cplx> w(n);
  CMatrix vs(want_vectors ? n : 1, want_vectors ? n : 1);
  lapack_int sdim = 0;
  const lapack_int info =
      LAPACKE_zgees(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'N', nullptr, n, out.t.data(), n,
                    &sdim, w.data(), vs.data(), vs.rows());
  if (info != 0) {
    throw Error(ErrorKind::non_convergence, "zgees failed, info = " + std::to_string(info));
  }
  // zgees leaves the strictly lower triangle unreferenced but not necessarily zero.
  out.t.triangularView<Eigen::StrictlyLower>().setZero();
  if (want_vectors) out.q = std::move(vs);
  return out;
}

std::vector<double> singular_values(const CMatrix& a) {
  check_finite(a, "singular_values");
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);
  std::vector<double> s(static_cast<std::size_t>(k));
  if (k == 0) return s;
  CMatrix work = a;
  cplx dummy{};
  const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(), m, s.data(),
                                         &dummy, 1, &dummy, 1);
  if (info != 0) {
    throw Error(ErrorKind::non_convergence, "zgesdd failed, info = " + std::to_string(info));
  }
  return s;
}

int rank_numeric(const CMatrix& a, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::invalid_parameter, "rank_numeric: tol must be positive");
  const auto s = singular_values(a);
  if (s.empty() || s.front() == 0.0) return 0;
  const double thr = tol * s.front();
  return static_cast<int>(std::count_if(s.begin(), s.end(), [thr](double v) { return v > thr; }));
}

double norm2(const CMatrix& a) {
  const auto s = singular_values(a);
  return s.empty() ? 0.0 : s.front();
}

JordanReport jordan_structure(const CMatrix& a, cplx lambda0, double tol, double scale) {
  require_square(a, "jordan_structure");
  if (!(tol > 0.0)) throw Error(ErrorKind::invalid_parameter, "jordan_structure: tol must be positive");
  const Eigen::Index n = a.rows();
  if (scale <= 0.0) scale = std::max(1.0, norm2(a));
  const double thr = tol * scale;

  CMatrix shifted = a;
  shifted.diagonal().array() -= lambda0;

  JordanReport rep;
  rep.location = lambda0;

  // ker(M^k) = ker(P_{k-1} M), P_{k-1} the orthogonal projector off ker(M^{k-1}).
  // Each step works with orthonormal kernel bases instead of explicit powers.
  CMatrix kernel(n, 0);
  int previous_dim = 0;
  for (Eigen::Index k = 1; k <= n + 1; ++k) {
    CMatrix x = shifted;
    if (kernel.cols() > 0) x -= kernel * (kernel.adjoint() * shifted);
    Eigen::BDCSVD<CMatrix> svd(x, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    int kept = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) > thr) ++kept;
    }
    if (kept > 0 && kept < s.size()) {
      const double smallest_kept = s(kept - 1);
      const double largest_dropped = s(kept);
      if (largest_dropped > 0.0 && smallest_kept / largest_dropped < 10.0) {
        throw Error(ErrorKind::ambiguous_cluster,
                    "rank of (A - lambda0 I)^" + std::to_string(k) + " is ill-defined: singular values " +
                        std::to_string(smallest_kept) + " and " + std::to_string(largest_dropped) +
                        " straddle the threshold " + std::to_string(thr));
      }
    }
    const int dim = static_cast<int>(n) - kept;
    rep.rank_sequence.push_back(kept);
    if (k == 1 && dim == 0) {
      throw Error(ErrorKind::invalid_parameter,
                  "jordan_structure: lambda0 is not an eigenvalue within the rank tolerance");
    }
    if (k == 1) rep.geometric_multiplicity = dim;
    if (dim == previous_dim) {
      rep.order = static_cast<int>(k) - 1;
      rep.algebraic_multiplicity = dim;
      return rep;
    }
    previous_dim = dim;
    kernel = svd.matrixV().rightCols(dim);
  }
  throw Error(ErrorKind::non_convergence, "jordan_structure: kernel chain did not stabilize");
}

CMatrix apply_spectral_projector(const ShiftedSolver& solve, const CMatrix& probes,
                                 const Circle& contour, int q_nodes) {
  if (q_nodes < 64) throw Error(ErrorKind::invalid_parameter, "spectral projector needs q_nodes >= 64");
  if (!(contour.radius > 0.0)) throw Error(ErrorKind::invalid_parameter, "contour radius must be positive");
  std::vector<CMatrix> terms(static_cast<std::size_t>(q_nodes));
  for_each_index(terms.size(), [&](std::size_t k) {
    const double phi = 2.0 * pi * static_cast<double>(k) / q_nodes;
    const cplx e = std::polar(1.0, phi);
    const cplx z = contour.center + contour.radius * e;
    // (z - A)^{-1} = -(A - z)^{-1}; dz = i r e dphi, and 1/(2 pi i) * i * 2 pi / q = 1/q.
    terms[k] = (-contour.radius / q_nodes) * e * solve(z, probes);
  });
  CMatrix sum = CMatrix::Zero(probes.rows(), probes.cols());
  for (const auto& t : terms) sum += t;
  return sum;
}

CMatrix spectral_projector(const CMatrix& a, const Circle& contour, int q_nodes) {
  require_square(a, "spectral_projector");
  const auto ev = eigen_all(a).values;
  const double scale = std::max(1.0, std::abs(contour.center) + contour.radius);
  for (const auto& l : ev) {
    if (std::abs(std::abs(l - contour.center) - contour.radius) < 1e-8 * scale) {
      throw Error(ErrorKind::eigenvalue_on_contour, "an eigenvalue lies on the projector contour");
    }
  }
  const Eigen::Index n = a.rows();
  ShiftedSolver solve = [&a, n](cplx z, const CMatrix& rhs) -> CMatrix {
    CMatrix shifted = a;
    shifted.diagonal().array() -= z;
    return Eigen::PartialPivLU<CMatrix>(shifted).solve(rhs);
  };
  return apply_spectral_projector(solve, CMatrix::Identity(n, n), contour, q_nodes);
}

CMatrix range_basis(const CMatrix& a, double tol) {
  Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return CMatrix(a.rows(), 0);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > tol * s(0)) ++r;
  return svd.matrixU().leftCols(r);
}

}  // namespace isores
