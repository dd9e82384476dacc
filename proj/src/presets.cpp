#include "bloch/presets.hpp"

#include "bloch/spectral.hpp"

namespace bloch {
namespace {

CoefficientField two_plus_cos_1d() {
  return CoefficientField::from_terms(1, {{{0}, 2.0}, {{1}, 0.5}, {{-1}, 0.5}}, true);
}

CoefficientField checkerboard_field() {
  std::vector<CoefficientField::Term> terms;
  const double amp[3] = {0.5, 2.0, 0.5};
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) terms.emplace_back(MultiIndex{a, b}, amp[a + 1] * amp[b + 1]);
  return CoefficientField::from_terms(2, terms, true);
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"free-1d", "cos-1d", "mathieu", "checkerboard-2d", "constant-v-1d"};
}

OperatorSpec preset(const std::string& name) {
  if (name == "free-1d") return OperatorSpec::isotropic(1, CoefficientField::constant(1, 1.0), true);
  if (name == "cos-1d") return OperatorSpec::isotropic(1, two_plus_cos_1d(), true);
  if (name == "mathieu")
    return schrodinger_spec(CoefficientField::from_terms(1, {{{1}, 1.0}, {{-1}, 1.0}}, true));
  if (name == "checkerboard-2d") return OperatorSpec::isotropic(2, checkerboard_field(), true);
  if (name == "constant-v-1d") return schrodinger_spec(CoefficientField::constant(1, 5.0));
  throw ValidationError("unknown preset '" + name + "'");
}

}  // namespace bloch
