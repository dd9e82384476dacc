#include <doctest.h>

#include <random>

#include "bloch/bloch.hpp"
#include "oracles.hpp"

using namespace bloch;

TEST_CASE("free operator fibers are diagonal with eigenvalues |theta + 2 pi k|^2") {
  const OperatorSpec free1 = preset("free-1d");
  const FiberMatrix a = assemble(free1, Quasimomentum{{0.4}}, 3);
  REQUIRE(a.entries.rows() == 7);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) {
      const double xi = 0.4 + kTwoPi * (i - 3);
      CHECK(std::abs(a.entries(i, j) - (i == j ? cplx(xi * xi) : cplx(0.0))) < 1e-12);
    }
}

TEST_CASE("constant potential adds a multiple of the identity") {
  const FiberMatrix a = assemble(preset("constant-v-1d"), Quasimomentum{{-1.0}}, 2);
  for (int i = 0; i < 5; ++i) {
    const double xi = -1.0 + kTwoPi * (i - 2);
    CHECK(a.entries(i, i).real() == doctest::Approx(xi * xi + 5.0));
  }
}

TEST_CASE("cos coefficient couples neighbouring plane waves") {
  // -d/du (2 + cos 2 pi u) d/du: off-diagonal xi_a xi_b / 2.
  const FiberMatrix a = assemble(preset("cos-1d"), Quasimomentum{{0.3}}, 2);
  const double x1 = 0.3 - kTwoPi, x2 = 0.3;
  CHECK(a.entries(1, 2).real() == doctest::Approx(0.5 * x1 * x2));
  CHECK(a.entries(2, 2).real() == doctest::Approx(2.0 * x2 * x2));
  CHECK(std::abs(a.entries(0, 2)) == 0.0);
}

TEST_CASE("assembled fibers are Hermitian for self-adjoint specs") {
  const CoefficientField c = CoefficientField::from_terms(1, {{{1}, cplx(0.2, 0.1)}, {{-1}, cplx(0.2, -0.1)}}, true);
  const CoefficientField c1 = CoefficientField::from_terms(1, {{{0}, 0.3}, {{2}, cplx(0.0, 0.4)}}, false);
  const OperatorSpec s(1, {CoefficientField::constant(1, 2.0).plus(c)}, {c1}, {c1.conjugated()},
                       CoefficientField::from_terms(1, {{{1}, 0.7}, {{-1}, 0.7}}, true), true);
  for (double th : {-3.0, -0.2, 1.9}) {
    const FiberMatrix a = assemble(s, Quasimomentum{{th}}, 6, AssemblyOptions{false});
    CHECK(hermitian_defect(a.entries) < 1e-12 * a.entries.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("fiber relabelling: theta + 2 pi e_j equals a shifted index set") {
  const OperatorSpec s = preset("checkerboard-2d");
  const std::vector<double> th{0.5, -1.2};
  std::vector<MultiIndex> shifted;
  for (auto k : box_indices(2, -2, 2)) {
    k[1] += 1;
    shifted.push_back(k);
  }
  const FiberMatrix a = assemble(s, PlaneWaveBasis(2, box_indices(2, -2, 2), {0.5, -1.2 + kTwoPi}));
  const FiberMatrix b = assemble(s, PlaneWaveBasis(2, shifted, th));
  CHECK((a.entries - b.entries).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("rescaled operator fibers decouple into N interlaced blocks") {
  const OperatorSpec s = rescale(preset("cos-1d"), 3);
  const FiberMatrix a = assemble(s, Quasimomentum{{0.2}}, 7);
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 15; ++j)
      if ((i - j) % 3 != 0) CHECK(a.entries(i, j) == cplx(0.0));
}

TEST_CASE("plane-wave basis validation and evaluation") {
  CHECK_THROWS_AS(PlaneWaveBasis(1, {{0}, {0}}, {0.0}), ValidationError);
  CHECK_THROWS_AS(PlaneWaveBasis(1, {}, {0.0}), ValidationError);
  const PlaneWaveBasis b = PlaneWaveBasis::cube(1, 2, Quasimomentum{{0.25}});
  CHECK(*b.position(MultiIndex{1}) == 3);
  CHECK_FALSE(b.position(MultiIndex{3}).has_value());
  Eigen::MatrixXd pts(2, 1);
  pts << 0.0, 1.0;
  const Eigen::MatrixXcd e = b.evaluate(pts);
  // Floquet condition e_k(u + 1) = z e_k(u).
  for (int i = 0; i < 5; ++i) CHECK(std::abs(e(1, i) - std::polar(1.0, 0.25) * e(0, i)) < 1e-12);
  CHECK(Quasimomentum::canonical({kPi}).theta[0] == doctest::Approx(-kPi));
  CHECK(Quasimomentum::canonical({7.0}).is_canonical());
}
