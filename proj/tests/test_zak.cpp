#include <doctest.h>

#include <random>

#include "bloch/bloch.hpp"
#include "oracles.hpp"

using namespace bloch;

namespace {
IntMatrix quincunx() {
  IntMatrix m(2, 2);
  m << 1, 1, -1, 1;
  return m;
}
}  // namespace

TEST_CASE("plain Zak transform matches direct summation") {
  std::mt19937_64 rng(7);
  for (int d : {1, 2}) {
    const SampledSignal f = oracle::random_signal(rng, d, 3, 1);
    const ZakArray z = zak_forward(f, 4);
    for (std::size_t i = 0; i < z.nodes.size(); ++i) {
      const auto ref = oracle::zak_direct(f, z.theta(i));
      for (long p = 0; p < f.cell_size(); ++p) CHECK(std::abs(z.values(i, p) - ref[p]) < 1e-12);
    }
  }
}

TEST_CASE("M-Zak transform matches direct summation") {
  std::mt19937_64 rng(8);
  const std::vector<IntMatrix> lattices = {scaled_identity(1, 3), scaled_identity(2, 2), quincunx()};
  for (const auto& m : lattices) {
    const int d = static_cast<int>(m.rows());
    const SampledSignal f = oracle::random_signal(rng, d, 2 * static_cast<int>(lattice_exponent(m)), 1);
    const ZakArray z = zak_forward_general(f, m, 3);
    for (std::size_t i = 0; i < z.nodes.size(); i += 3)
      for (long p = 0; p < f.cell_size(); ++p)
        CHECK(std::abs(z.values(i, p) - oracle::zak_general_direct(f, m, z.theta(i), p)) < 1e-12);
  }
}

TEST_CASE("Zak transforms are unitary and invertible") {
  std::mt19937_64 rng(9);
  const SampledSignal f = oracle::random_signal(rng, 2, 4, 2);
  const ZakArray z = zak_forward(f, 5);
  CHECK(std::abs(zak_norm(z) - f.norm()) < 1e-12);
  const SampledSignal back = zak_inverse(z, 2);
  for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(std::abs(back.values[i] - f.values[i]) < 1e-12);
  const ZakArray zm = zak_forward_general(f, quincunx(), 5);
  CHECK(std::abs(zak_norm_general(zm, quincunx()) - f.norm()) < 1e-12);
}

TEST_CASE("translation multiplies the Zak transform by a character") {
  std::mt19937_64 rng(10);
  const SampledSignal f = oracle::random_signal(rng, 1, 4, 1);
  const MultiIndex s{2};
  const SampledSignal g = translated(f, s);
  const ZakArray zf = zak_forward(f, 8), zg = zak_forward(g, 8);
  for (std::size_t i = 0; i < zf.nodes.size(); ++i) {
    const cplx phase = std::polar(1.0, zf.theta(i)[0] * s[0]);
    for (long p = 0; p < f.cell_size(); ++p) CHECK(std::abs(zg.values(i, p) - phase * zf.values(i, p)) < 1e-12);
  }
}

TEST_CASE("refinement identities between Z and Z_M") {
  std::mt19937_64 rng(12);
  const IntMatrix m = quincunx();
  const SampledSignal f = oracle::random_signal(rng, 2, 4, 1);
  const ZakArray z = zak_forward(f, 3);
  const ZakArray zm = zak_forward_general(f, m, 3);
  CHECK((zak_refine_mean(zm, m).values - z.values).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((zak_embed_all(z, m).values - zm.values).cwiseAbs().maxCoeff() < 1e-12);

  const std::size_t i = 4;
  const std::vector<double> tz = z.theta(i);
  const Eigen::VectorXcd data = z.values.row(i).transpose();
  const auto roots = root_thetas(m, tz);
  CHECK(roots.size() == 2);
  Eigen::VectorXcd total = Eigen::VectorXcd::Zero(data.size());
  for (const auto& w : roots) {
    const Eigen::VectorXcd pw = zak_project(data, 2, 4, tz, m, w);
    CHECK((zak_project(pw, 2, 4, tz, m, w) - pw).cwiseAbs().maxCoeff() < 1e-12);
    total += pw;
  }
  CHECK((total - data).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("grid guards") {
  std::mt19937_64 rng(13);
  const SampledSignal f = oracle::random_signal(rng, 1, 3, 2);
  CHECK_THROWS_AS(zak_forward(f, 4), AliasingWindow);
  CHECK_THROWS_AS(zak_forward_general(f, scaled_identity(1, 2), 6), GridIncompatible);
}
