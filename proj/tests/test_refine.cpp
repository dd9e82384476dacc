#include <doctest.h>

#include <algorithm>

#include "bloch/bloch.hpp"

using namespace bloch;

TEST_CASE("root quasimomenta solve w^N = z and are distinct") {
  const std::vector<double> th{0.9, -2.0};
  const auto roots = root_thetas(scaled_identity(2, 3), th);
  REQUIRE(roots.size() == 9);
  for (std::size_t a = 0; a < roots.size(); ++a) {
    for (int i = 0; i < 2; ++i) {
      const double r = std::remainder(3.0 * roots[a][i] - th[i], kTwoPi);
      CHECK(std::abs(r) < 1e-12);
    }
    for (std::size_t b = a + 1; b < roots.size(); ++b) CHECK(roots[a] != roots[b]);
  }
}

TEST_CASE("refined spectrum is the sorted union of the root fibers") {
  const RefinedSpectrum rs = refined_spectrum(preset("cos-1d"), {0.4}, 3, 6);
  REQUIRE(rs.root_values.size() == 3);
  std::vector<double> all;
  for (const auto& v : rs.root_values) all.insert(all.end(), v.data(), v.data() + v.size());
  std::sort(all.begin(), all.end());
  REQUIRE(static_cast<Eigen::Index>(all.size()) == rs.merged.size());
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == rs.merged(i));
  CHECK(std::is_sorted(rs.merged.data(), rs.merged.data() + rs.merged.size()));
}

TEST_CASE("refined spectrum equals the spectrum of the rescaled operator") {
  CHECK(refinement_check(preset("cos-1d"), {0.7}, 4, 8) < 1e-8);
  CHECK(refinement_check(preset("checkerboard-2d"), {0.3, -1.0}, 2, 3) < 1e-8);
}

TEST_CASE("refined low spectrum approaches the homogenized one for large N") {
  const auto rows = refinement_limit(preset("cos-1d"), {0.0}, {8, 16, 32}, 6, 8);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].deviation < rows[0].deviation);
  CHECK(rows[2].deviation < rows[1].deviation);
  for (const auto& r : rows) CHECK(r.refined.size() == 6);
}

TEST_CASE("refinement rejects operators with lower-order terms") {
  CHECK_THROWS_AS(refined_spectrum(preset("mathieu"), {0.0}, 2, 4), NotPureSecondOrder);
}
