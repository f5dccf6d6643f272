#include "isores/determinants.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include <Eigen/LU>

#include "isores/error.hpp"
#include "isores/linalg.hpp"
#include "isores/parallel.hpp"

namespace isores {

cplx det_reg(std::span<const cplx> eigenvalues, int p) {
  if (p < 1) throw Error(ErrorKind::invalid_parameter, "determinant order p must be >= 1");
  cplx det = 1.0;
  for (const cplx& l : eigenvalues) {
    if (l == 0.0) continue;  // exact factor 1
    cplx corr = 0.0;
    cplx power = 1.0;
    for (int k = 1; k < p; ++k) {
      power *= l;
      corr += ((k % 2 == 0) ? 1.0 : -1.0) * power / static_cast<double>(k);
    }
    det *= (1.0 + l) * std::exp(corr);
  }
  return det;
}

cplx det_reg(const CMatrix& k, int p) {
  const auto ev = eigen_all(k).values;
  return det_reg(std::span<const cplx>(ev), p);
}

cplx det_reg_trace(const CMatrix& k, int p) {
  if (p < 1) throw Error(ErrorKind::invalid_parameter, "determinant order p must be >= 1");
  if (k.rows() != k.cols()) throw Error(ErrorKind::invalid_parameter, "kernel must be square");
  CMatrix shifted = k;
  shifted.diagonal().array() += 1.0;
  const cplx det = shifted.partialPivLu().determinant();
  cplx corr = 0.0;
  CMatrix power = CMatrix::Identity(k.rows(), k.cols());
  for (int j = 1; j < p; ++j) {
    power = power * k;
    corr += ((j % 2 == 0) ? 1.0 : -1.0) * power.trace() / static_cast<double>(j);
  }
  return det * std::exp(corr);
}

DetFunction::DetFunction(int p, Spectrum spectrum) : p_(p), spectrum_(std::move(spectrum)) {
  if (p < 1) throw Error(ErrorKind::invalid_parameter, "determinant order p must be >= 1");
}

DetFunction DetFunction::from_kernel(int p, std::function<CMatrix(cplx)> kernel) {
  return DetFunction(p, [kernel = std::move(kernel)](cplx l) { return eigen_all(kernel(l)).values; });
}

cplx DetFunction::operator()(cplx lambda) const {
  const auto ev = spectrum_(lambda);
  return det_reg(std::span<const cplx>(ev), p_);
}

LsKernel::LsKernel(const ModelSurface& model, int j_min, int j_max, const PotentialSum& v, const Discretization& d,
                   const std::optional<ScalingContour>& contour)
    : model_(model), op_(assemble_coupled(model, contour, j_min, j_max, v, d)) {
  std::vector<std::pair<int, int>> edges;
  for (const auto& c : op_.couplings) edges.emplace_back(c.source - j_min, c.target - j_min);
  groups_ = ordered_components(op_.mode_count(), edges);
  for (auto& g : groups_) {
    for (int& m : g) m += j_min;
  }
  std::vector<std::vector<cplx>> per_mode(static_cast<std::size_t>(op_.mode_count()));
  for_each_index(per_mode.size(), [&](std::size_t i) {
    per_mode[i] = eigen_all(op_.diagonal[i]).values;
  });
  for (const auto& ev : per_mode) free_eigenvalues_.insert(free_eigenvalues_.end(), ev.begin(), ev.end());
}

void LsKernel::check_admissible(cplx sigma) const {
  const cplx z = model_.spectral_value(sigma);
  for (const cplx& l : free_eigenvalues_) {
    if (std::abs(l - z) < 1e-8 * std::max(1.0, std::abs(z))) {
      throw Error(ErrorKind::singular_resolvent, "sigma is a free eigenvalue of the discretization");
    }
  }
}

CMatrix LsKernel::resolvent_block(int j, cplx z) const {
  CMatrix shifted = op_.diagonal_block(j);
  shifted.diagonal().array() -= z;
  return shifted.partialPivLu().inverse();
}

CMatrix LsKernel::group_kernel(const std::vector<int>& modes, cplx z) const {
  const Eigen::Index nb = op_.block_size;
  const auto k = static_cast<Eigen::Index>(modes.size());
  std::map<int, Eigen::Index> pos;
  for (Eigen::Index i = 0; i < k; ++i) pos[modes[static_cast<std::size_t>(i)]] = i;
  std::vector<CMatrix> res(modes.size());
  for_each_index(modes.size(), [&](std::size_t i) { res[i] = resolvent_block(modes[i], z); });
  CMatrix out = CMatrix::Zero(nb * k, nb * k);
  for (const auto& c : op_.couplings) {
    auto it = pos.find(c.target);
    auto is = pos.find(c.source);
    if (it == pos.end() || is == pos.end()) continue;
    out.block(it->second * nb, is->second * nb, nb, nb) +=
        c.values.asDiagonal() * res[static_cast<std::size_t>(is->second)];
  }
  return out;
}

std::vector<cplx> LsKernel::eigenvalues(cplx sigma) const {
  check_admissible(sigma);
  const cplx z = model_.spectral_value(sigma);
  std::vector<cplx> out;
  for (const auto& g : groups_) {
    if (g.size() == 1) {
      // No weight-0 components: the diagonal kernel block is zero.
      out.insert(out.end(), static_cast<std::size_t>(op_.block_size), cplx(0.0));
      continue;
    }
    const auto ev = eigen_all(group_kernel(g, z)).values;
    out.insert(out.end(), ev.begin(), ev.end());
  }
  return out;
}

CMatrix LsKernel::dense(cplx sigma) const {
  check_admissible(sigma);
  std::vector<int> all;
  for (int j = op_.j_min; j <= op_.j_max; ++j) all.push_back(j);
  return group_kernel(all, model_.spectral_value(sigma));
}

cplx ls_determinant(const ModelSurface& model, int j_min, int j_max, const PotentialSum& v, cplx sigma,
                    const Discretization& d, int p, const std::optional<ScalingContour>& contour) {
  const LsKernel k(model, j_min, j_max, v, d, contour);
  const auto ev = k.eigenvalues(sigma);
  return det_reg(std::span<const cplx>(ev), p);
}

int count_zeros(const std::function<cplx(cplx)>& f, const Circle& contour, int q_nodes) {
  if (q_nodes < 8) throw Error(ErrorKind::invalid_parameter, "count_zeros needs at least 8 nodes");
  if (!(contour.radius > 0.0)) throw Error(ErrorKind::invalid_parameter, "contour radius must be positive");
  const double h = 1e-5 * contour.radius;
  std::vector<cplx> terms(static_cast<std::size_t>(q_nodes));
  std::vector<char> tiny(static_cast<std::size_t>(q_nodes), 0);
  for_each_index(terms.size(), [&](std::size_t k) {
    const cplx e = std::polar(1.0, 2.0 * pi * static_cast<double>(k) / q_nodes);
    const cplx s = contour.center + contour.radius * e;
    const cplx fs = f(s);
    if (std::abs(fs) <= 1e-10) {
      tiny[k] = 1;
      return;
    }
    const cplx df = (f(s + h) - f(s - h)) / (2.0 * h);
    terms[k] = df / fs * contour.radius * e / static_cast<double>(q_nodes);
  });
  if (std::any_of(tiny.begin(), tiny.end(), [](char c) { return c != 0; })) {
    throw Error(ErrorKind::non_integer_winding, "|F| <= 1e-10 on the contour");
  }
  cplx sum = 0.0;
  for (const cplx& t : terms) sum += t;
  const double w = sum.real();
  const double rounded = std::round(w);
  if (std::abs(w - rounded) > 0.1 || std::abs(sum.imag()) > 0.1) {
    throw Error(ErrorKind::non_integer_winding,
                "winding " + std::to_string(w) + " is not resolved; refine the quadrature");
  }
  return static_cast<int>(rounded);
}

}  // namespace isores
