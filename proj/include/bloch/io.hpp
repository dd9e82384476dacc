#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "bloch/fiber.hpp"
#include "bloch/homog.hpp"
#include "bloch/spectral.hpp"
#include "bloch/zak.hpp"

// Serialization. Floats are written with 15 significant digits so identical
// runs give byte-identical files.
namespace bloch {

using json = nlohmann::ordered_json;

std::string format_double(double v);
// Every floating-point leaf rounded to 15 significant digits.
json rounded(const json& j);
json complex_json(cplx v);  // [re, im]
cplx complex_from_json(const json& j);

// Field: a number (constant) or a list of [[k...], re, im] triples. Fields
// whose amplitudes are conjugate-symmetric are stored as real.
CoefficientField field_from_json(const json& j, int dim);
json field_to_json(const CoefficientField& g);

// {"dimension", "principal" (d x d nested), "first_order", "first_order_prime",
//  "zeroth", "self_adjoint"}; missing lower-order keys mean zero.
OperatorSpec spec_from_json(const json& j);
json spec_to_json(const OperatorSpec& spec);

json homogenized_to_json(const HomogenizedOperator& h);
json band_report_to_json(const BandReport& r);

// Header "row,col,re,im", one line per entry, row-major.
void write_fiber_csv(std::ostream& os, const FiberMatrix& a);
// "BZFM", uint32 version 1, uint64 rows, uint64 cols, rows*cols (re, im)
// little-endian float64 pairs, row-major.
void write_fiber_binary(std::ostream& os, const FiberMatrix& a);
Eigen::MatrixXcd read_fiber_binary(std::istream& is);

// Header "theta_0,...,theta_{d-1},n,lambda".
void write_bands_csv(std::ostream& os, const BandStructure& bs);

// Comment line "# dim= resolution= window=", then header "n_0,...,p_0,...,re,im".
void write_signal_csv(std::ostream& os, const SampledSignal& f);
// Header "r_0,...,p_0,...,re,im"; the first comment line records the grid.
void write_zak_csv(std::ostream& os, const ZakArray& f);

}  // namespace bloch
