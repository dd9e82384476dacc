#include "bloch/homog.hpp"

#include <Eigen/LU>

namespace bloch {
namespace {

// g[a] = sum_l (i 2 pi a_l) field(l, j)[a] for every basis index a.
template <class Field>
Eigen::VectorXcd divergence_rhs(const PlaneWaveBasis& basis, int dim, Field field) {
  Eigen::VectorXcd g(basis.size());
  for (std::size_t a = 0; a < basis.size(); ++a) {
    cplx v{};
    for (int l = 0; l < dim; ++l)
      v += cplx(0.0, kTwoPi * basis.index(a)[l]) * field(l)[basis.index(a)];
    g(a) = v;
  }
  return g;
}

}  // namespace

CellSolution cell_solve(const OperatorSpec& spec, int cutoff) {
  const int d = spec.dimension();
  const PlaneWaveBasis basis = PlaneWaveBasis::cube(d, cutoff, Quasimomentum::zero(d));
  const FiberMatrix fm = assemble(spec, basis);
  const std::size_t n = basis.size();
  const bool reduced = spec.pure_second_order();
  const std::size_t zero = *basis.position(MultiIndex(d, 0));

  std::vector<Eigen::Index> keep;
  for (std::size_t a = 0; a < n; ++a)
    if (!reduced || a != zero) keep.push_back(static_cast<Eigen::Index>(a));
  const Eigen::Index m = static_cast<Eigen::Index>(keep.size());

  Eigen::MatrixXcd rhs(n, d);
  for (int j = 0; j < d; ++j)
    rhs.col(j) = divergence_rhs(basis, d, [&](int l) -> const CoefficientField& { return spec.principal(l, j); });

  CellSolution sol{basis, Eigen::MatrixXcd::Zero(n, d), Eigen::VectorXd::Zero(d), reduced};
  if (m == 0) return sol;
  Eigen::MatrixXcd a(m, m);
  Eigen::MatrixXcd b(m, d);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index k = 0; k < m; ++k) a(i, k) = fm.entries(keep[i], keep[k]);
    b.row(i) = rhs.row(keep[i]);
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible())
    throw SingularCellProblem("cell matrix is singular (rank " + std::to_string(lu.rank()) + " of " +
                              std::to_string(m) + ")");
  const Eigen::MatrixXcd w = lu.solve(b);
  for (int j = 0; j < d; ++j) {
    const double gn = b.col(j).norm();
    sol.residuals(j) = gn == 0.0 ? 0.0 : (a * w.col(j) - b.col(j)).norm() / gn;
    for (Eigen::Index i = 0; i < m; ++i) sol.w(keep[i], j) = w(i, j);
  }
  return sol;
}

HomogenizedOperator homogenize(const OperatorSpec& spec, int cutoff, bool symmetrize) {
  const int d = spec.dimension();
  const CellSolution cell = cell_solve(spec, cutoff);
  const PlaneWaveBasis& basis = cell.basis;

  HomogenizedOperator h;
  h.C_hat.resize(d, d);
  for (int i = 0; i < d; ++i) {
    const Eigen::VectorXcd f =
        divergence_rhs(basis, d, [&](int k) -> const CoefficientField& { return spec.principal(i, k); });
    for (int j = 0; j < d; ++j) h.C_hat(i, j) = spec.principal(i, j).mean() - f.dot(cell.w.col(j));
  }
  const Eigen::VectorXcd hvec =
      divergence_rhs(basis, d, [&](int k) -> const CoefficientField& { return spec.first_order(k); });
  h.c_hat.resize(d);
  h.drift.resize(d);
  for (int i = 0; i < d; ++i) {
    h.c_hat(i) = spec.first_order_prime(i).mean() + spec.first_order(i).mean() - hvec.dot(cell.w.col(i));
    h.drift(i) = spec.first_order(i).mean() - spec.first_order_prime(i).mean();
  }
  h.c0_hat = spec.zeroth().mean();
  h.self_adjoint = spec.self_adjoint();
  if (h.self_adjoint) h.c0_hat.imag(0.0);
  if (symmetrize) {
    h.C_hat = (0.5 * (h.C_hat + h.C_hat.transpose())).eval();
    h.symmetrized = true;
  }
  return h;
}

OperatorSpec homogenized_spec(const HomogenizedOperator& h) {
  const int d = h.dimension();
  if (h.drift.cwiseAbs().maxCoeff() != 0.0 || h.c0_hat != cplx{})
    throw NotPureSecondOrder("homogenized operator has lower-order terms");
  std::vector<CoefficientField> principal;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) principal.push_back(CoefficientField::constant(d, h.C_hat(i, j)));
  if (!h.self_adjoint) return OperatorSpec::pure(d, std::move(principal), false);
  // Exact Hermitian symmetry keeps the fiber check at the 1e-12 level.
  std::vector<CoefficientField> sym;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const cplx v = 0.5 * (h.C_hat(i, j) + std::conj(h.C_hat(j, i)));
      sym.push_back(CoefficientField::constant(d, i == j ? cplx(v.real(), 0.0) : v));
    }
  return OperatorSpec::pure(d, std::move(sym), true);
}

}  // namespace bloch
