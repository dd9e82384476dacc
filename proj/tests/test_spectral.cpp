#include <doctest.h>

#include <random>

#include "bloch/bloch.hpp"
#include "oracles.hpp"

using namespace bloch;

TEST_CASE("eigenvalues agree with the bisection oracle, including split blocks") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 11;
    const Eigen::MatrixXcd a = oracle::random_hermitian(rng, n, trial % 3 == 0 ? 0.85 : 0.0);
    const EigenSystem es = eig_hermitian(a);
    const auto ref = oracle::hermitian_eigenvalues(oracle::to_rows(a));
    for (int i = 0; i < n; ++i) CHECK(std::abs(es.values(i) - ref[i]) < 1e-10 * (1.0 + std::abs(ref[i])));
    CHECK((a * es.vectors - es.vectors * es.values.asDiagonal()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((es.vectors.adjoint() * es.vectors - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("degenerate clusters still produce an orthonormal eigenbasis") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(4, 4);
  a.diagonal() << 1.0, 1.0, 1.0, 2.0;
  a(0, 1) = a(1, 0) = 1e-14;
  const EigenSystem es = eig_hermitian(a);
  CHECK((es.vectors.adjoint() * es.vectors - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
  const EigenSystem again = eig_hermitian(a);
  CHECK(es.vectors == again.vectors);
}

TEST_CASE("non-Hermitian fibers are rejected") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(2, 2);
  a(0, 1) = 1.0;
  CHECK_THROWS_AS(eig_hermitian(a), NotHermitian);
}

TEST_CASE("fiber spectra: shift invariance, time reversal and trace consistency") {
  const OperatorSpec s = preset("mathieu");
  for (double th : {-2.5, 0.0, 0.9}) {
    const FiberMatrix a = assemble(s, Quasimomentum{{th}}, 10);
    const EigenSystem es = eig_hermitian(a);
    const EigenSystem sh = eig_hermitian(assemble(shift_zeroth(s, -2.25), Quasimomentum{{th}}, 10));
    CHECK((sh.values - es.values + Eigen::VectorXd::Constant(es.size(), 2.25)).cwiseAbs().maxCoeff() < 1e-9);
    const EigenSystem rev = eig_hermitian(assemble(s, Quasimomentum{{-th}}, 10));
    CHECK((rev.values - es.values).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(std::abs(es.values.sum() - a.entries.trace().real()) < 1e-9 * a.entries.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("Galerkin eigenvalues decrease as the basis grows") {
  const OperatorSpec s = preset("checkerboard-2d");
  const Quasimomentum q{{0.3, 1.1}};
  const EigenSystem small = eig_hermitian(assemble(s, q, 2));
  const EigenSystem big = eig_hermitian(assemble(s, q, 3));
  for (std::size_t n = 0; n < small.size(); ++n) CHECK(big.values(n) <= small.values(n) + 1e-9);
}

TEST_CASE("free bands and the Schrodinger gap structure") {
  const BandStructure bs = band_sweep(preset("free-1d"), 16, 8, 4);
  const BandReport r = band_report(bs);
  // Free bands touch: every gap closes.
  for (const auto& g : r.gaps) CHECK(g.length == 0.0);
  CHECK(r.intervals.front().first == doctest::Approx(0.0));
  CHECK(r.intervals.front().second == doctest::Approx(kPi * kPi));

  const BandReport m = band_report(band_sweep(preset("mathieu"), 32, 12, 4));
  CHECK(m.gaps.front().length > 0.5);
}

TEST_CASE("serial and parallel sweeps agree bitwise") {
  const OperatorSpec s = preset("checkerboard-2d");
  const BandStructure a = band_sweep(s, 6, 3, 5, Exec::Serial);
  const BandStructure b = band_sweep(s, 6, 3, 5, Exec::Parallel);
  CHECK(a.bands == b.bands);
}

TEST_CASE("band sweeps reject invalid input") {
  CHECK_THROWS_AS(band_sweep(preset("cos-1d"), 0, 4, 2), ValidationError);
  CHECK_THROWS_AS(schrodinger_spec(CoefficientField::from_terms(1, {{{1}, cplx(0, 1)}}, false)),
                  ValidationError);
}
