#include <doctest.h>

#include <random>

#include "bloch/bloch.hpp"
#include "oracles.hpp"

using namespace bloch;

namespace {

CoefficientField random_real_field(std::mt19937_64& rng, int dim, int cutoff) {
  std::normal_distribution<double> g;
  std::vector<CoefficientField::Term> terms;
  for (const auto& k : box_indices(dim, -cutoff, cutoff)) {
    MultiIndex neg(k);
    for (int& x : neg) x = -x;
    if (neg < k) continue;
    const cplx v = neg == k ? cplx(g(rng)) : cplx(g(rng), g(rng));
    terms.emplace_back(k, v);
    if (neg != k) terms.emplace_back(neg, std::conj(v));
  }
  return CoefficientField::from_terms(dim, terms, true);
}

}  // namespace

TEST_CASE("real fields have conjugate-symmetric amplitudes") {
  std::mt19937_64 rng(11);
  const CoefficientField g = random_real_field(rng, 2, 2);
  CHECK(g.is_real());
  for (const auto& k : box_indices(2, -2, 2)) {
    const MultiIndex neg{-k[0], -k[1]};
    CHECK(std::abs(g[k] - std::conj(g[neg])) < 1e-15);
  }
  const std::vector<double> u{0.3, -0.45};
  CHECK(std::abs(g.evaluate(u).imag()) < 1e-13);
}

TEST_CASE("terms round-trip and out-of-box amplitudes vanish") {
  const CoefficientField g = CoefficientField::from_terms(1, {{{2}, cplx(1.0, 0.5)}, {{-1}, 3.0}}, false);
  const CoefficientField h = CoefficientField::from_terms(1, g.terms(), false);
  for (int k = -4; k <= 4; ++k) CHECK(g[MultiIndex{k}] == h[MultiIndex{k}]);
  CHECK(g[MultiIndex{7}] == cplx(0.0));
  CHECK(g.mean() == cplx(0.0));
}

TEST_CASE("pointwise evaluation matches the Fourier series") {
  const CoefficientField g = CoefficientField::from_terms(1, {{{0}, 2.0}, {{1}, 0.5}, {{-1}, 0.5}}, true);
  for (double u : {0.0, 0.125, 0.4, 0.77}) {
    const std::vector<double> x{u};
    CHECK(std::abs(g.evaluate(x) - cplx(2.0 + std::cos(kTwoPi * u))) < 1e-14);
  }
}

TEST_CASE("dilation places amplitudes on the dilated lattice") {
  std::mt19937_64 rng(3);
  const CoefficientField g = random_real_field(rng, 1, 3);
  const CoefficientField g3 = g.dilated(scaled_identity(1, 3));
  for (int k = -9; k <= 9; ++k) {
    const cplx expect = k % 3 == 0 ? g[MultiIndex{k / 3}] : cplx(0.0);
    CHECK(g3[MultiIndex{k}] == expect);
  }
  // g(3u) pointwise
  const std::vector<double> u{0.21}, u3{0.63};
  CHECK(std::abs(g3.evaluate(u) - g.evaluate(u3)) < 1e-12);
}

TEST_CASE("rescaling composes multiplicatively") {
  const OperatorSpec s = preset("checkerboard-2d");
  IntMatrix a(2, 2), b(2, 2);
  a << 1, 1, -1, 1;
  b << 2, 0, 1, 1;
  const OperatorSpec lhs = rescale(rescale(s, a), b);
  const OperatorSpec rhs = rescale(s, IntMatrix(a * b));
  const std::vector<double> u{0.17, 0.61};
  CHECK((lhs.principal_at(u) - rhs.principal_at(u)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(rescale(s, IntMatrix::Zero(2, 2)), SingularMatrix);
}

TEST_CASE("validation rejects degenerate and non-self-adjoint input") {
  const CoefficientField bad = CoefficientField::from_terms(1, {{{0}, 1.0}, {{1}, 1.0}, {{-1}, 1.0}}, true);  // 1 + 2cos
  CHECK_THROWS_AS(validate(OperatorSpec::isotropic(1, bad, true)), NotElliptic);
  const EllipticityReport r = validate(preset("cos-1d"));
  CHECK(r.lambda_c == doctest::Approx(1.0).epsilon(1e-3));

  const CoefficientField one = CoefficientField::constant(1, 1.0);
  const CoefficientField drift = CoefficientField::constant(1, cplx(0.0, 1.0));
  const OperatorSpec skew(1, {one}, {drift}, {drift}, CoefficientField::constant(1, 0.0), true);
  CHECK(self_adjoint_defect(skew) > 1.0);
  CHECK_THROWS_AS(check_self_adjoint(skew), SelfAdjointViolation);
}

TEST_CASE("lattice residues agree with brute-force class counting") {
  std::vector<IntMatrix> ms;
  IntMatrix m(2, 2);
  m << 1, 1, -1, 1;
  ms.push_back(m);
  m << 2, 1, 0, 3;
  ms.push_back(m);
  m << 3, -1, 2, 4;
  ms.push_back(m);
  ms.push_back(scaled_identity(3, 2));
  for (const auto& mm : ms) {
    const ResidueSystem rs(mm);
    CHECK(rs.size() == std::abs(determinant(mm)));
    CHECK(rs.size() == oracle::brute_force_class_count(mm));
    for (long i = 0; i < rs.size(); ++i) {
      CHECK(rs.index_of(rs[i]) == i);
      for (long j = i + 1; j < rs.size(); ++j) CHECK_FALSE(congruent(rs[i], rs[j], mm));
      // Shifting by a lattice vector keeps the class.
      const IntVector shifted = rs[i] + mm.col(0) - 2 * mm.col(mm.cols() - 1);
      CHECK(rs.index_of(shifted) == i);
    }
  }
  CHECK(lattice_exponent(scaled_identity(2, 4)) == 4);
  m << 1, 1, -1, 1;
  CHECK(lattice_exponent(m) == 2);
}
