#include "bloch/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>

namespace bloch {
namespace {

constexpr char kMagic[4] = {'B', 'Z', 'F', 'M'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw ValidationError("truncated fiber dump");
  return v;
}

bool conjugate_symmetric(const std::vector<CoefficientField::Term>& terms, int dim) {
  CoefficientField g = CoefficientField::from_terms(dim, terms, false);
  for (const auto& [k, v] : terms) {
    MultiIndex neg(k);
    for (int& x : neg) x = -x;
    if (std::abs(g[neg] - std::conj(g[k])) > 1e-12 * std::max(1.0, std::abs(g[k]))) return false;
  }
  return true;
}

}  // namespace

std::string format_double(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

json rounded(const json& j) {
  if (j.is_number_float()) return std::stod(format_double(j.get<double>()));
  if (j.is_array() || j.is_object()) {
    json out = j;
    for (auto it = out.begin(); it != out.end(); ++it) *it = rounded(*it);
    return out;
  }
  return j;
}

json complex_json(cplx v) { return json::array({v.real(), v.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw ValidationError("complex value must be a number or [re, im]");
}

CoefficientField field_from_json(const json& j, int dim) {
  if (j.is_number()) return CoefficientField::constant(dim, j.get<double>());
  if (!j.is_array()) throw ValidationError("coefficient field must be a number or a list of terms");
  std::vector<CoefficientField::Term> terms;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 3 || !t[0].is_array())
      throw ValidationError("coefficient term must be [[k...], re, im]");
    MultiIndex k = t[0].get<MultiIndex>();
    if (static_cast<int>(k.size()) != dim) throw ValidationError("coefficient index has wrong dimension");
    terms.emplace_back(std::move(k), cplx(t[1].get<double>(), t[2].get<double>()));
  }
  return CoefficientField::from_terms(dim, terms, conjugate_symmetric(terms, dim));
}

json field_to_json(const CoefficientField& g) {
  json out = json::array();
  for (const auto& [k, v] : g.terms()) out.push_back(json::array({k, v.real(), v.imag()}));
  return out;
}

OperatorSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("operator spec must be a JSON object");
  const int d = j.value("dimension", 0);
  if (d < 1) throw ValidationError("operator spec needs a positive 'dimension'");
  if (!j.contains("principal") || !j["principal"].is_array() || static_cast<int>(j["principal"].size()) != d)
    throw ValidationError("'principal' must be a d x d nested array");
  std::vector<CoefficientField> principal;
  for (const auto& row : j["principal"]) {
    if (!row.is_array() || static_cast<int>(row.size()) != d)
      throw ValidationError("'principal' must be a d x d nested array");
    for (const auto& f : row) principal.push_back(field_from_json(f, d));
  }
  auto vec = [&](const char* key) {
    std::vector<CoefficientField> out(d, CoefficientField(d));
    if (!j.contains(key)) return out;
    if (!j[key].is_array() || static_cast<int>(j[key].size()) != d)
      throw ValidationError(std::string("'") + key + "' must have d entries");
    for (int i = 0; i < d; ++i) out[i] = field_from_json(j[key][i], d);
    return out;
  };
  const CoefficientField zeroth = j.contains("zeroth") ? field_from_json(j["zeroth"], d) : CoefficientField(d);
  return OperatorSpec(d, std::move(principal), vec("first_order"), vec("first_order_prime"), zeroth,
                      j.value("self_adjoint", true));
}

json spec_to_json(const OperatorSpec& spec) {
  const int d = spec.dimension();
  json principal = json::array();
  for (int i = 0; i < d; ++i) {
    json row = json::array();
    for (int k = 0; k < d; ++k) row.push_back(field_to_json(spec.principal(i, k)));
    principal.push_back(row);
  }
  json first = json::array(), prime = json::array();
  for (int i = 0; i < d; ++i) {
    first.push_back(field_to_json(spec.first_order(i)));
    prime.push_back(field_to_json(spec.first_order_prime(i)));
  }
  json out;
  out["dimension"] = d;
  out["principal"] = principal;
  out["first_order"] = first;
  out["first_order_prime"] = prime;
  out["zeroth"] = field_to_json(spec.zeroth());
  out["self_adjoint"] = spec.self_adjoint();
  return out;
}

json homogenized_to_json(const HomogenizedOperator& h) {
  const int d = h.dimension();
  json c = json::array();
  for (int i = 0; i < d; ++i) {
    json row = json::array();
    for (int k = 0; k < d; ++k) row.push_back(complex_json(h.C_hat(i, k)));
    c.push_back(row);
  }
  json first = json::array(), drift = json::array();
  for (int i = 0; i < d; ++i) {
    first.push_back(complex_json(h.c_hat(i)));
    drift.push_back(complex_json(h.drift(i)));
  }
  json out;
  out["C_hat"] = c;
  out["c_hat"] = first;
  out["drift"] = drift;
  out["c0_hat"] = complex_json(h.c0_hat);
  out["symmetrized"] = h.symmetrized;
  out["self_adjoint"] = h.self_adjoint;
  return out;
}

json band_report_to_json(const BandReport& r) {
  json intervals = json::array();
  for (std::size_t n = 0; n < r.intervals.size(); ++n)
    intervals.push_back({{"n", n}, {"min", r.intervals[n].first}, {"max", r.intervals[n].second}});
  json gaps = json::array();
  for (const auto& g : r.gaps)
    gaps.push_back({{"n", g.n}, {"lower", g.lower}, {"upper", g.upper}, {"length", g.length}, {"overlap", g.overlap}});
  return {{"intervals", intervals}, {"gaps", gaps}};
}

void write_fiber_csv(std::ostream& os, const FiberMatrix& a) {
  os << "row,col,re,im\n";
  for (Eigen::Index r = 0; r < a.entries.rows(); ++r)
    for (Eigen::Index c = 0; c < a.entries.cols(); ++c)
      os << r << ',' << c << ',' << format_double(a.entries(r, c).real()) << ','
         << format_double(a.entries(r, c).imag()) << '\n';
}

void write_fiber_binary(std::ostream& os, const FiberMatrix& a) {
  static_assert(sizeof(double) == 8);
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint64_t>(os, static_cast<std::uint64_t>(a.entries.rows()));
  put<std::uint64_t>(os, static_cast<std::uint64_t>(a.entries.cols()));
  for (Eigen::Index r = 0; r < a.entries.rows(); ++r)
    for (Eigen::Index c = 0; c < a.entries.cols(); ++c) {
      put<double>(os, a.entries(r, c).real());
      put<double>(os, a.entries(r, c).imag());
    }
}

Eigen::MatrixXcd read_fiber_binary(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw ValidationError("not a fiber dump");
  if (get<std::uint32_t>(is) != kVersion) throw ValidationError("unsupported fiber dump version");
  const auto rows = get<std::uint64_t>(is), cols = get<std::uint64_t>(is);
  Eigen::MatrixXcd m(rows, cols);
  for (std::uint64_t r = 0; r < rows; ++r)
    for (std::uint64_t c = 0; c < cols; ++c) {
      const double re = get<double>(is);
      m(r, c) = {re, get<double>(is)};
    }
  return m;
}

void write_bands_csv(std::ostream& os, const BandStructure& bs) {
  for (int a = 0; a < bs.dimension; ++a) os << "theta_" << a << ',';
  os << "n,lambda\n";
  for (std::size_t g = 0; g < bs.thetas.size(); ++g)
    for (int n = 0; n < bs.band_count(); ++n) {
      for (double t : bs.thetas[g].theta) os << format_double(t) << ',';
      os << n << ',' << format_double(bs.bands(g, n)) << '\n';
    }
}

void write_signal_csv(std::ostream& os, const SampledSignal& f) {
  os << "# dim=" << f.dim << " resolution=" << f.resolution << " window=" << f.window << '\n';
  for (int a = 0; a < f.dim; ++a) os << "n_" << a << ',';
  for (int a = 0; a < f.dim; ++a) os << "p_" << a << ',';
  os << "re,im\n";
  const auto shifts = f.shifts();
  const auto cells = box_indices(f.dim, 0, f.resolution - 1);
  for (std::size_t s = 0; s < shifts.size(); ++s)
    for (std::size_t p = 0; p < cells.size(); ++p) {
      for (int v : shifts[s]) os << v << ',';
      for (int v : cells[p]) os << v << ',';
      const cplx x = f.values[s * cells.size() + p];
      os << format_double(x.real()) << ',' << format_double(x.imag()) << '\n';
    }
}

void write_zak_csv(std::ostream& os, const ZakArray& f) {
  os << "# dim=" << f.dim << " resolution=" << f.resolution << " quadrature=" << f.quadrature
     << " denominator=" << f.denominator << '\n';
  for (int a = 0; a < f.dim; ++a) os << "r_" << a << ',';
  for (int a = 0; a < f.dim; ++a) os << "p_" << a << ',';
  os << "re,im\n";
  const auto cells = box_indices(f.dim, 0, f.resolution - 1);
  for (std::size_t i = 0; i < f.nodes.size(); ++i)
    for (std::size_t p = 0; p < cells.size(); ++p) {
      for (int a = 0; a < f.dim; ++a) os << f.nodes[i](a) << ',';
      for (int v : cells[p]) os << v << ',';
      const cplx x = f.values(i, p);
      os << format_double(x.real()) << ',' << format_double(x.imag()) << '\n';
    }
}

}  // namespace bloch
