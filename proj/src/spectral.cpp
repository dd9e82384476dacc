#include "bloch/spectral.hpp"

#include <algorithm>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace bloch {
namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Orthonormal frame of span(cluster) built from P e_i, smallest usable index first.
Eigen::MatrixXcd deterministic_frame(const Eigen::MatrixXcd& cluster) {
  const Eigen::Index n = cluster.rows(), r = cluster.cols();
  Eigen::MatrixXcd frame(n, r);
  // Column i of the projector is cluster * cluster.row(i)^*.
  Eigen::MatrixXcd candidates = cluster * cluster.adjoint();
  for (Eigen::Index got = 0; got < r; ++got) {
    Eigen::VectorXd norms = candidates.colwise().squaredNorm().transpose();
    const double best = norms.maxCoeff();
    Eigen::Index pick = 0;
    while (norms(pick) < 0.5 * best) ++pick;
    Eigen::VectorXcd v = candidates.col(pick) / std::sqrt(norms(pick));
    // Second pass keeps the frame orthonormal to working precision.
    for (Eigen::Index k = 0; k < got; ++k) v -= frame.col(k) * frame.col(k).dot(v);
    v.normalize();
    frame.col(got) = v;
    candidates -= v * (v.adjoint() * candidates);
  }
  return frame;
}

void fix_phase(Eigen::Ref<Eigen::VectorXcd> v) {
  const double cut = 1e-3 * v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > cut) {
      v *= std::conj(v(i)) / std::abs(v(i));
      return;
    }
}

}  // namespace

EigenSystem eig_hermitian(const FiberMatrix& a) {
  if (!a.hermitian) throw NotHermitian("fiber matrix is not flagged Hermitian");
  return eig_hermitian(a.entries);
}

EigenSystem eig_hermitian(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) throw ValidationError("eigensolver needs a square matrix");
  const int n = static_cast<int>(a.rows());
  EigenSystem out;
  if (n == 0) return out;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if (hermitian_defect(a) > 1e-12 * scale) throw NotHermitian("matrix fails A == A* check");

  UnionFind uf(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (a(i, j) != cplx{} || a(j, i) != cplx{}) uf.join(i, j);
  std::vector<std::vector<int>> blocks(n);
  for (int i = 0; i < n; ++i) blocks[uf.find(i)].push_back(i);

  Eigen::VectorXd values(n);
  Eigen::MatrixXcd vectors = Eigen::MatrixXcd::Zero(n, n);
  int col = 0;
  for (const auto& idx : blocks) {
    if (idx.empty()) continue;
    const int m = static_cast<int>(idx.size());
    if (m == 1) {
      values(col) = a(idx[0], idx[0]).real();
      vectors(idx[0], col++) = 1.0;
      continue;
    }
    Eigen::MatrixXcd sub(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) sub(i, j) = a(idx[i], idx[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sub);
    if (es.info() != Eigen::Success) throw ConvergenceFailure("Hermitian eigensolver did not converge");
    for (int k = 0; k < m; ++k, ++col) {
      values(col) = es.eigenvalues()(k);
      for (int i = 0; i < m; ++i) vectors(idx[i], col) = es.eigenvectors()(i, k);
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return values(x) < values(y); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.values(k) = values(order[k]);
    out.vectors.col(k) = vectors.col(order[k]);
  }

  const double vscale = std::max(1.0, out.values.cwiseAbs().maxCoeff());
  const double tie = 1e-10 * vscale;
  for (int start = 0; start < n;) {
    int end = start + 1;
    while (end < n && out.values(end) - out.values(end - 1) <= tie) ++end;
    if (end - start == 1) {
      fix_phase(out.vectors.col(start));
    } else {
      out.vectors.middleCols(start, end - start) =
          deterministic_frame(out.vectors.middleCols(start, end - start));
    }
    start = end;
  }
  return out;
}

std::vector<Quasimomentum> theta_grid(int dim, int grid) {
  if (grid < 1) throw ValidationError("grid must have at least one point per axis");
  std::vector<Quasimomentum> out;
  for (const auto& g : box_indices(dim, 0, grid - 1)) {
    Quasimomentum q{std::vector<double>(dim)};
    for (int i = 0; i < dim; ++i) q.theta[i] = -kPi + kTwoPi * g[i] / grid;
    out.push_back(std::move(q));
  }
  return out;
}

BandStructure band_sweep(const OperatorSpec& spec, int grid, int cutoff, int n_max, Exec exec) {
  if (!spec.self_adjoint()) throw NotSelfAdjoint("band sweeps need a self-adjoint operator");
  if (n_max < 0) throw ValidationError("n_max must be non-negative");
  BandStructure bs;
  bs.dimension = spec.dimension();
  bs.grid = grid;
  bs.cutoff = cutoff;
  bs.thetas = theta_grid(spec.dimension(), grid);
  const long basis_size = static_cast<long>(std::pow(2 * cutoff + 1, spec.dimension()));
  if (n_max + 1 > basis_size) throw ValidationError("n_max exceeds the plane-wave basis size");
  const long points = static_cast<long>(bs.thetas.size());
  bs.bands.resize(points, n_max + 1);

  // Exceptions may not cross the OpenMP region; the first one is rethrown.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
  for (long g = 0; g < points; ++g) {
    try {
      const EigenSystem es = eig_hermitian(assemble(spec, bs.thetas[g], cutoff));
      bs.bands.row(g) = es.values.head(n_max + 1).transpose();
    } catch (...) {
#pragma omp critical(bloch_band_sweep)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return bs;
}

BandReport band_report(const BandStructure& bs) {
  BandReport r;
  const int nb = bs.band_count();
  for (int n = 0; n < nb; ++n) r.intervals.emplace_back(bs.bands.col(n).minCoeff(), bs.bands.col(n).maxCoeff());
  for (int n = 0; n + 1 < nb; ++n) {
    BandGap g;
    g.n = n;
    g.lower = r.intervals[n].second;
    g.upper = r.intervals[n + 1].first;
    const double tol = 1e-9 * std::max(1.0, std::abs(g.lower));
    const double raw = g.upper - g.lower;
    g.length = raw > tol ? raw : 0.0;
    g.overlap = raw < -tol;
    r.gaps.push_back(g);
  }
  return r;
}

OperatorSpec schrodinger_spec(const CoefficientField& v) {
  const int d = v.dimension();
  for (const auto& [k, amp] : v.terms()) {
    MultiIndex neg(k);
    for (int& x : neg) x = -x;
    if (std::abs(v[neg] - std::conj(amp)) > 1e-12) throw ValidationError("potential must be real");
  }
  std::vector<CoefficientField> principal;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      principal.push_back(i == j ? CoefficientField::constant(d, 1.0) : CoefficientField(d));
  const CoefficientField real_v = CoefficientField::from_terms(d, v.terms(), true);
  return OperatorSpec(d, std::move(principal), std::vector<CoefficientField>(d, CoefficientField(d)),
                      std::vector<CoefficientField>(d, CoefficientField(d)), real_v, true);
}

}  // namespace bloch
