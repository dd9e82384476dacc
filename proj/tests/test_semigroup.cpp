#include <doctest.h>

#include <random>

#include "bloch/bloch.hpp"
#include "oracles.hpp"

using namespace bloch;

namespace {
EigenSystem cos_fiber(double th, int cutoff = 10) {
  return eig_hermitian(assemble(preset("cos-1d"), Quasimomentum{{th}}, cutoff));
}
}  // namespace

TEST_CASE("semigroup law and spectral vs exponential evaluation") {
  const OperatorSpec s = preset("mathieu");
  const FiberMatrix a = assemble(s, Quasimomentum{{0.8}}, 8);
  const EigenSystem es = eig_hermitian(a);
  const Eigen::MatrixXcd p = heat_fiber(es, 0.03).matrix * heat_fiber(es, 0.05).matrix;
  CHECK((p - heat_fiber(es, 0.08).matrix).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((heat_fiber_general(a, 0.05).matrix - heat_fiber(es, 0.05).matrix).cwiseAbs().maxCoeff() < 1e-9);
  CHECK_THROWS_AS(heat_fiber(es, 0.0), NonpositiveTime);
}

TEST_CASE("constants are conserved at theta = 0 for divergence-form operators") {
  const EigenSystem es = cos_fiber(0.0, 6);
  const Eigen::MatrixXcd s = heat_fiber(es, 0.7).matrix;
  Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(13);
  e0(6) = 1.0;
  CHECK((s * e0 - e0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Schatten norms of simple matrices") {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
  d.diagonal() << 3.0, -4.0, cplx(0.0, 1.0);
  CHECK(trace_norm(d) == doctest::Approx(8.0));
  CHECK(hs_norm(d) == doctest::Approx(std::sqrt(26.0)));
  CHECK(operator_norm(d) == doctest::Approx(4.0));
}

TEST_CASE("trace and Hilbert-Schmidt inequalities hold on random fibers") {
  const OperatorSpec s = preset("cos-1d");
  const HomogenizedOperator h = homogenize(s, 12);
  for (double th : {-2.0, 0.1, 1.5}) {
    const Quasimomentum q{{th}};
    const EigenSystem es = eig_hermitian(assemble(s, q, 12));
    const EigenSystem eh = eig_hermitian(assemble_homogenized(h, q, 12));
    for (double t : {0.01, 0.2}) {
      const TraceHsReport r = check_trace_hs_inequalities(heat_fiber(es, t).matrix, heat_fiber(es, t / 2).matrix,
                                                          heat_fiber(eh, t).matrix, heat_fiber(eh, t / 2).matrix);
      CHECK(r.holds());
    }
  }
}

TEST_CASE("fiber kernel is Hermitian and satisfies Parseval") {
  const int cutoff = 4, res = 24;  // res > 4 cutoff makes the rule exact
  const FiberMatrix a = assemble(preset("cos-1d"), Quasimomentum{{0.4}}, cutoff);
  const EigenSystem es = eig_hermitian(a);
  const double t = 0.01;
  const KernelGrid k = kernel_fiber(es, a.basis, t, res);
  CHECK((k.values - k.values.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  const double lhs = k.values.squaredNorm() / (res * res);
  const double rhs = (-2.0 * t * es.values.array()).exp().sum();
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("free line kernel matches the Gaussian and converges in Q") {
  const LineKernel k(preset("free-1d"), 0.5, 64, 16);
  for (double x : {-0.7, 0.0, 0.35})
    for (double y : {-1.1, 0.2, 0.9}) {
      const std::vector<double> xv{x}, yv{y};
      CHECK(std::abs(k(xv, yv) - oracle::free_heat_kernel(x, y, 0.5)) < 1e-12);
    }
  // Q-doubling: the cos-1d kernel at separation 2 barely changes.
  const std::vector<double> x{0.1}, y{2.3};
  const cplx k16 = LineKernel(preset("cos-1d"), 0.3, 16, 12)(x, y);
  const cplx k32 = LineKernel(preset("cos-1d"), 0.3, 32, 12)(x, y);
  CHECK(std::abs(k16 - k32) < 1e-8 * std::abs(k32));
}

TEST_CASE("line kernel guards and serial/parallel agreement") {
  CHECK_THROWS_AS(kernel_line(preset("cos-1d"), 0.3, 4, 8, 4, 6), AliasingWindow);
  CHECK_THROWS_AS(LineKernel(preset("cos-1d"), -1.0, 8, 6), NonpositiveTime);
  const KernelGrid a = kernel_line(preset("cos-1d"), 0.3, 1, 8, 4, 6, Exec::Serial);
  const KernelGrid b = kernel_line(preset("cos-1d"), 0.3, 1, 8, 4, 6, Exec::Parallel);
  CHECK(a.values == b.values);
  CHECK(gaussian_bound_fit(a, 0.3, 0.25) > 0.0);
}

TEST_CASE("semigroup distance to the homogenized fiber eventually shrinks in m") {
  const auto rows = homog_convergence(preset("cos-1d"), Quasimomentum{{0.7}}, 1.0, {2, 4, 8}, 32);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].trace_distance < rows[0].trace_distance);
  CHECK(rows[2].trace_distance < rows[1].trace_distance);
  for (const auto& r : rows) CHECK(InequalityCheck{r.eigen_sum, r.trace_distance}.holds());
}

TEST_CASE("line kernels approach the homogenized kernel") {
  KernelConvergenceOptions opts;
  opts.cutoff = 8;
  opts.disc_samples = 9;
  opts.cell_samples = 4;
  opts.dy = 0.1;
  opts.tail = 6.0;
  const auto rows = kernel_convergence(preset("cos-1d"), 1.0, {{1, 1.0}, {2, 1.0}, {4, 1.0}}, opts);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].sup_distance < rows[0].sup_distance);
  CHECK(rows[2].sup_distance < rows[1].sup_distance);
  CHECK(rows[2].l1_distance < rows[0].l1_distance);
}
