#include "isores/grid.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <string>

#include <Eigen/LU>

#include "isores/error.hpp"
#include "isores/linalg.hpp"

namespace isores {

namespace {

using PotentialFn = std::function<cplx(cplx)>;

// Chebyshev points on [a, b] in increasing order with the matching
// differentiation matrix and Clenshaw-Curtis weights (N + 1 points).
struct ChebPanel {
  std::vector<double> x;
  RMatrix d;
  std::vector<double> w;
};

ChebPanel cheb_panel(int n, double a, double b) {
  ChebPanel p;
  p.x.resize(n + 1);
  for (int k = 0; k <= n; ++k) p.x[k] = -std::cos(pi * k / n);  // increasing
  RMatrix d(n + 1, n + 1);
  auto c = [n](int k) { return (k == 0 || k == n) ? 2.0 : 1.0; };
  for (int i = 0; i <= n; ++i) {
    double row = 0.0;
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      const double sgn = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = c(i) / c(j) * sgn / (p.x[i] - p.x[j]);
      row += d(i, j);
    }
    d(i, i) = -row;
  }
  // Clenshaw-Curtis weights on [-1, 1]
  p.w.assign(n + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    const double th = pi * k / n;
    double s = 0.0;
    for (int m = 1; m <= n / 2; ++m) {
      const double bm = (2 * m == n) ? 1.0 : 2.0;
      s += bm * std::cos(2.0 * m * th) / (4.0 * m * m - 1.0);
    }
    const double ck = (k == 0 || k == n) ? 1.0 : 2.0;
    p.w[k] = ck / n * (1.0 - s);
  }
  const double half = 0.5 * (b - a);
  for (int k = 0; k <= n; ++k) {
    p.x[k] = 0.5 * (a + b) + half * p.x[k];
    p.w[k] *= half;
  }
  p.d = d / half;
  return p;
}

bool folded(const Discretization& d) { return d.scheme == Scheme::chebyshev_collocation && d.t_min >= 0.0; }

void validate(const Discretization& d) {
  if (d.n < 16) throw Error(ErrorKind::invalid_parameter, "discretization needs n >= 16");
  if (!(d.t_max > d.t_min)) throw Error(ErrorKind::invalid_parameter, "empty truncation box");
  for (double b : d.breakpoints) {
    if (!(b > d.t_min && b < d.t_max)) {
      throw Error(ErrorKind::invalid_parameter, "breakpoint outside the truncation box");
    }
  }
  if (!std::is_sorted(d.breakpoints.begin(), d.breakpoints.end())) {
    throw Error(ErrorKind::invalid_parameter, "breakpoints must increase");
  }
}

std::vector<int> panel_sizes(const Discretization& d, int panels, int interior) {
  std::vector<double> w = d.panel_weights;
  if (w.empty()) {
    w.assign(static_cast<std::size_t>(panels), panels >= 3 ? 2.0 : 1.0);
    if (panels >= 3) w.front() = w.back() = 1.0;
  }
  if (static_cast<int>(w.size()) != panels) {
    throw Error(ErrorKind::invalid_parameter, "panel_weights must have one entry per panel");
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<int> sizes(static_cast<std::size_t>(panels));
  int used = 0;
  for (int k = 0; k < panels; ++k) {
    sizes[k] = std::max(4, static_cast<int>(std::lround(interior * w[k] / total)));
    used += sizes[k];
  }
  sizes[static_cast<std::size_t>(panels / 2)] += interior - used;
  if (sizes[static_cast<std::size_t>(panels / 2)] < 4) {
    throw Error(ErrorKind::invalid_parameter, "too few nodes for the requested panels");
  }
  return sizes;
}

// Multi-panel collocation with the interface values eliminated. Returns the
// interior nodes/weights and, when a potential is given, the operator matrix.
struct Collocation {
  std::vector<double> t;
  std::vector<double> w;
  CMatrix a;
};

Collocation multipanel(const Discretization& d, const ScalingContour& contour, const PotentialFn* pot) {
  std::vector<double> b{d.t_min};
  b.insert(b.end(), d.breakpoints.begin(), d.breakpoints.end());
  b.push_back(d.t_max);
  const int panels = static_cast<int>(b.size()) - 1;
  const std::vector<int> sizes = panel_sizes(d, panels, d.n);

  // Global unknowns: interior nodes of each panel, then the interface values.
  std::vector<ChebPanel> cp;
  std::vector<int> first(panels);
  int cnt = 0;
  for (int k = 0; k < panels; ++k) {
    cp.push_back(cheb_panel(sizes[k] + 1, b[k], b[k + 1]));
    first[k] = cnt;
    cnt += sizes[k];
  }
  const int n_int = cnt;
  auto global = [&](int k, int i) -> int {
    const int last = sizes[k] + 1;
    if (i == 0) return k == 0 ? -1 : n_int + (k - 1);
    if (i == last) return k == panels - 1 ? -1 : n_int + k;
    return first[k] + i - 1;
  };

  Collocation out;
  out.t.reserve(n_int);
  for (int k = 0; k < panels; ++k) {
    for (int i = 1; i <= sizes[k]; ++i) {
      out.t.push_back(cp[k].x[i]);
      out.w.push_back(cp[k].w[i]);
    }
  }
  if (!pot) return out;

  const int nf = panels - 1;
  CMatrix full = CMatrix::Zero(n_int, n_int + nf);
  for (int k = 0; k < panels; ++k) {
    const int m = sizes[k] + 2;
    CVector inv(m);
    for (int i = 0; i < m; ++i) inv(i) = 1.0 / contour.derivative(cp[k].x[i]);
    const CMatrix dk = cp[k].d.cast<cplx>();
    const CMatrix first_d = inv.asDiagonal() * dk;
    const CMatrix op = -(first_d * first_d);
    for (int i = 1; i < m - 1; ++i) {
      const int gi = global(k, i);
      for (int c = 0; c < m; ++c) {
        const int gc = global(k, c);
        if (gc >= 0) full(gi, gc) += op(i, c);
      }
      full(gi, gi) += (*pot)(contour.point(cp[k].x[i]));
    }
  }
  if (nf == 0) {
    out.a = full;
    return out;
  }
  // Flux continuity D_left w(b_k) = D_right w(b_k) (r' is continuous at the kinks).
  CMatrix con = CMatrix::Zero(nf, n_int + nf);
  for (int k = 0; k < nf; ++k) {
    const int ml = sizes[k] + 1;
    for (int c = 0; c <= ml; ++c) {
      const int g = global(k, c);
      if (g >= 0) con(k, g) += cp[k].d(ml, c);
    }
    const int mr = sizes[k + 1] + 1;
    for (int c = 0; c <= mr; ++c) {
      const int g = global(k + 1, c);
      if (g >= 0) con(k, g) -= cp[k + 1].d(0, c);
    }
  }
  const CMatrix elim = -con.rightCols(nf).partialPivLu().solve(con.leftCols(n_int));
  out.a = full.leftCols(n_int) + full.rightCols(nf) * elim;
  return out;
}

// Chebyshev on [-R, R] with an odd number of intervals, folded onto r > 0 by the
// parity of v = w / sqrt(r) ~ r^{|omega|}.
Collocation folded_cheb(const Discretization& d, const ScalingContour& contour, const PotentialFn* pot, int parity) {
  const int nn = 2 * d.n + 1;
  const ChebPanel p = cheb_panel(nn, -d.t_max, d.t_max);
  Collocation out;
  for (int i = d.n + 1; i < nn; ++i) {
    out.t.push_back(p.x[i]);
    out.w.push_back(p.w[i]);
  }
  if (!pot) return out;
  if (!contour.is_identity()) {
    throw Error(ErrorKind::invalid_parameter, "folded half-line collocation is only available unscaled");
  }
  const RMatrix d2 = p.d * p.d;
  out.a = CMatrix::Zero(d.n, d.n);
  for (int a = 0; a < d.n; ++a) {
    const int i = d.n + 1 + a;
    const double r = p.x[i];
    for (int b = 0; b < d.n; ++b) {
      const int j = d.n + 1 + b;
      const int jm = nn - j;  // mirror node -x_j
      const double d2v = d2(i, j) + parity * d2(i, jm);
      const double d1v = p.d(i, j) + parity * p.d(i, jm);
      out.a(a, b) = -d2v - d1v / r;
    }
    out.a(a, a) += (*pot)(r) + 0.25 / (r * r);
  }
  return out;
}

CMatrix finite_difference(const Discretization& d, const ScalingContour& contour, const PotentialFn& pot) {
  const int n = d.n;
  const double h = (d.t_max - d.t_min) / (n + 1);
  CMatrix a = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double t = d.t_min + (i + 1) * h;
    const cplx inv = 1.0 / contour.derivative(t);
    const cplx lo = 1.0 / contour.derivative(t - 0.5 * h);
    const cplx hi = 1.0 / contour.derivative(t + 0.5 * h);
    a(i, i) = inv * (lo + hi) / (h * h) + pot(contour.point(t));
    if (i > 0) a(i, i - 1) = -inv * lo / (h * h);
    if (i + 1 < n) a(i, i + 1) = -inv * hi / (h * h);
  }
  return a;
}

CMatrix discretize_impl(const RadialOperator& op, const ScalingContour& contour, const Discretization& d) {
  validate(d);
  const PotentialFn& pot = op.potential_fn();
  const bool half = op.model().domain() == RadialDomain::half_line_with_pole;
  if (half && d.t_min < 0.0) throw Error(ErrorKind::invalid_parameter, "half-line model needs a half-line box");
  if (d.scheme == Scheme::finite_difference_2nd) return finite_difference(d, contour, pot);
  if (folded(d)) {
    const int parity = (std::abs(op.mode()) % 2 == 0) ? 1 : -1;
    return folded_cheb(d, contour, &pot, parity).a;
  }
  return multipanel(d, contour, &pot).a;
}

}  // namespace

Discretization Discretization::full_line(Scheme scheme, int n, double r_max) {
  Discretization d;
  d.scheme = scheme;
  d.n = n;
  d.t_min = -r_max;
  d.t_max = r_max;
  return d;
}

Discretization Discretization::half_line(Scheme scheme, int n, double r_max, double r_min) {
  Discretization d;
  d.scheme = scheme;
  d.n = n;
  d.t_min = scheme == Scheme::chebyshev_collocation ? 0.0 : r_min;
  d.t_max = r_max;
  return d;
}

GridGeometry grid_geometry(const Discretization& d, const ScalingContour& contour) {
  validate(d);
  GridGeometry g;
  std::vector<double> w;
  if (d.scheme == Scheme::finite_difference_2nd) {
    const double h = (d.t_max - d.t_min) / (d.n + 1);
    for (int i = 0; i < d.n; ++i) g.t.push_back(d.t_min + (i + 1) * h);
    w.assign(static_cast<std::size_t>(d.n), h);
  } else {
    const Collocation c = folded(d) ? folded_cheb(d, contour, nullptr, 1) : multipanel(d, contour, nullptr);
    g.t = c.t;
    w = c.w;
  }
  g.r.resize(g.t.size());
  g.weights.resize(static_cast<Eigen::Index>(g.t.size()));
  for (std::size_t i = 0; i < g.t.size(); ++i) {
    g.r[i] = contour.point(g.t[i]);
    g.weights(static_cast<Eigen::Index>(i)) = w[i] * contour.derivative(g.t[i]);
  }
  return g;
}

CMatrix discretize(const ScaledOperator& op, const Discretization& d) {
  return discretize_impl(op.base(), op.contour(), d);
}

CMatrix discretize(const RadialOperator& op, const Discretization& d) {
  return discretize_impl(op, identity_contour(), d);
}

CMatrix BlockOperator::block(int target, int source) const {
  if (target == source) return diagonal_block(target);
  CMatrix out = CMatrix::Zero(block_size, block_size);
  for (const auto& c : couplings) {
    if (c.target == target && c.source == source) out.diagonal() += c.values;
  }
  return out;
}

CMatrix BlockOperator::dense() const {
  std::vector<int> modes(static_cast<std::size_t>(mode_count()));
  std::iota(modes.begin(), modes.end(), j_min);
  return dense_submatrix(modes);
}

CMatrix BlockOperator::dense_submatrix(const std::vector<int>& modes) const {
  const Eigen::Index nb = block_size;
  const auto k = static_cast<Eigen::Index>(modes.size());
  CMatrix out = CMatrix::Zero(nb * k, nb * k);
  std::map<int, Eigen::Index> pos;
  for (Eigen::Index i = 0; i < k; ++i) pos[modes[static_cast<std::size_t>(i)]] = i;
  for (const auto& [j, i] : pos) out.block(i * nb, i * nb, nb, nb) = diagonal_block(j);
  for (const auto& c : couplings) {
    auto it = pos.find(c.target);
    auto is = pos.find(c.source);
    if (it == pos.end() || is == pos.end()) continue;
    out.block(it->second * nb, is->second * nb, nb, nb).diagonal() += c.values;
  }
  return out;
}

CMatrix BlockOperator::apply(const CMatrix& x, Exec exec) const {
  CMatrix y(x.rows(), x.cols());
  const Eigen::Index nb = block_size;
  for_each_index(
      static_cast<std::size_t>(mode_count()),
      [&](std::size_t idx) {
        const int j = j_min + static_cast<int>(idx);
        CMatrix yj = diagonal_block(j) * x.middleRows(offset(j), nb);
        for (const auto& c : couplings) {
          if (c.target == j) yj += c.values.asDiagonal() * x.middleRows(offset(c.source), nb);
        }
        y.middleRows(offset(j), nb) = yj;
      },
      exec);
  return y;
}

BlockOperator assemble_coupled(const ModelSurface& model, const std::optional<ScalingContour>& contour, int j_min,
                               int j_max, const PotentialSum& v, const Discretization& d, Exec exec) {
  if (j_max < j_min) throw Error(ErrorKind::mode_range, "empty mode range");
  const ScalingContour path = contour ? *contour : identity_contour();
  const int span = j_max - j_min;

  std::vector<ModePotential> comps = v.components();
  if (v.tail()) {
    // Weights beyond the mode span can never couple two modes in range.
    const auto extra = v.materialized(span);
    comps.clear();
    for (const auto& c : extra) comps.push_back(c);
  }

  BlockOperator b;
  b.j_min = j_min;
  b.j_max = j_max;
  b.grid = grid_geometry(d, path);
  b.block_size = static_cast<Eigen::Index>(b.grid.t.size());
  b.diagonal.resize(static_cast<std::size_t>(b.mode_count()));

  for (const auto& c : comps) {
    if (std::abs(c.weight()) > span) {
      throw Error(ErrorKind::mode_range, "weight " + std::to_string(c.weight()) + " does not fit in modes [" +
                                             std::to_string(j_min) + ", " + std::to_string(j_max) + "]");
    }
  }

  // Per-mode diagonal blocks and per-component samples are independent.
  for_each_index(
      static_cast<std::size_t>(b.mode_count()),
      [&](std::size_t i) {
        const RadialOperator op = mode_operator(model, j_min + static_cast<int>(i));
        b.diagonal[i] = contour ? discretize(scaled_operator(op, path), d) : discretize(op, d);
      },
      exec);

  std::vector<CVector> samples(comps.size());
  for_each_index(
      comps.size(),
      [&](std::size_t k) {
        CVector s(b.block_size);
        for (Eigen::Index i = 0; i < b.block_size; ++i) s(i) = comps[k](b.grid.r[static_cast<std::size_t>(i)]);
        samples[k] = std::move(s);
      },
      exec);

  for (std::size_t k = 0; k < comps.size(); ++k) {
    const int m = comps[k].weight();
    for (int j = j_min; j <= j_max; ++j) {
      const int target = j + m;
      if (target < j_min || target > j_max) {
        b.dropped.push_back({j, m});
        continue;
      }
      b.couplings.push_back({target, j, samples[k]});
    }
  }
  std::sort(b.couplings.begin(), b.couplings.end(), [](const Coupling& x, const Coupling& y) {
    return std::pair(x.source, x.target) < std::pair(y.source, y.target);
  });
  return b;
}

double triangularity_check(const BlockOperator& b) {
  double worst = 0.0;
  for (const auto& c : b.couplings) {
    if (c.target < c.source && c.values.size() > 0) worst = std::max(worst, c.values.cwiseAbs().maxCoeff());
  }
  return worst;
}

std::vector<std::vector<int>> ordered_components(int nodes, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(nodes));
  for (const auto& [s, t] : edges) {
    if (s != t) adj[static_cast<std::size_t>(s)].push_back(t);
  }
  // Iterative Tarjan; components come out in reverse topological order.
  std::vector<int> index(static_cast<std::size_t>(nodes), -1), low(static_cast<std::size_t>(nodes), 0);
  std::vector<char> on_stack(static_cast<std::size_t>(nodes), 0);
  std::vector<int> stack;
  std::vector<std::vector<int>> comps;
  int counter = 0;
  for (int root = 0; root < nodes; ++root) {
    if (index[root] >= 0) continue;
    std::vector<std::pair<int, std::size_t>> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      if (next < adj[v].size()) {
        const int w = adj[v][next++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<int> comp;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
      const int done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  std::reverse(comps.begin(), comps.end());
  return comps;
}

BlockSchur::BlockSchur(const BlockOperator& op, bool want_vectors, Exec exec) : op_(&op) {
  std::vector<std::pair<int, int>> edges;
  for (const auto& c : op.couplings) edges.emplace_back(c.source - op.j_min, c.target - op.j_min);
  groups_ = ordered_components(op.mode_count(), edges);
  group_of_mode_.assign(static_cast<std::size_t>(op.mode_count()), 0);
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    for (int& m : groups_[g]) {
      group_of_mode_[static_cast<std::size_t>(m)] = static_cast<int>(g);
      m += op.j_min;
    }
  }
  forms_.resize(groups_.size());
  for_each_index(
      groups_.size(),
      [&](std::size_t g) {
        const auto& modes = groups_[g];
        forms_[g] = modes.size() == 1 ? schur(op.diagonal_block(modes[0]), want_vectors)
                                      : schur(op.dense_submatrix(modes), want_vectors);
      },
      exec);
}

std::vector<cplx> BlockSchur::eigenvalues() const {
  std::vector<cplx> out;
  for (const auto& f : forms_) {
    const auto ev = f.eigenvalues();
    out.insert(out.end(), ev.begin(), ev.end());
  }
  return out;
}

CMatrix BlockSchur::solve_shifted(cplx z, const CMatrix& rhs) const {
  const BlockOperator& op = *op_;
  const Eigen::Index nb = op.block_size;
  CMatrix x = CMatrix::Zero(rhs.rows(), rhs.cols());
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    const auto& modes = groups_[g];
    const SchurForm& f = forms_[g];
    if (f.q.size() == 0) throw Error(ErrorKind::invalid_parameter, "BlockSchur built without Schur vectors");
    const Eigen::Index k = static_cast<Eigen::Index>(modes.size());
    CMatrix b(nb * k, rhs.cols());
    for (Eigen::Index i = 0; i < k; ++i) {
      const int j = modes[static_cast<std::size_t>(i)];
      CMatrix bj = rhs.middleRows(op.offset(j), nb);
      // Couplings from earlier groups are already solved for.
      for (const auto& c : op.couplings) {
        if (c.target == j && group_of_mode_[static_cast<std::size_t>(c.source - op.j_min)] != static_cast<int>(g)) {
          bj -= c.values.asDiagonal() * x.middleRows(op.offset(c.source), nb);
        }
      }
      b.middleRows(i * nb, nb) = bj;
    }
    CMatrix shifted = f.t;
    shifted.diagonal().array() -= z;
    for (Eigen::Index i = 0; i < shifted.rows(); ++i) {
      if (std::abs(shifted(i, i)) == 0.0) throw Error(ErrorKind::singular_resolvent, "shift hits an eigenvalue");
    }
    const CMatrix y = shifted.triangularView<Eigen::Upper>().solve(f.q.adjoint() * b);
    const CMatrix sol = f.q * y;
    for (Eigen::Index i = 0; i < k; ++i) {
      x.middleRows(op.offset(modes[static_cast<std::size_t>(i)]), nb) = sol.middleRows(i * nb, nb);
    }
  }
  return x;
}

}  // namespace isores
