#include "bloch/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bloch {
namespace {

constexpr double kRealTol = 1e-12;

int required_cutoff(std::span<const CoefficientField::Term> terms) {
  int f = 0;
  for (const auto& [k, v] : terms) {
    if (v == cplx{}) continue;
    for (int ki : k) f = std::max(f, std::abs(ki));
  }
  return f;
}

MultiIndex negated(const MultiIndex& k) {
  MultiIndex m(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) m[i] = -k[i];
  return m;
}

// exp(i 2 pi k u) for k in [-f, f], one row per axis.
std::vector<std::vector<cplx>> axis_phases(std::span<const double> u, int f) {
  std::vector<std::vector<cplx>> ph(u.size(), std::vector<cplx>(2 * f + 1));
  for (std::size_t a = 0; a < u.size(); ++a)
    for (int k = -f; k <= f; ++k) ph[a][k + f] = std::polar(1.0, kTwoPi * k * u[a]);
  return ph;
}

}  // namespace

CoefficientField::CoefficientField(int dim, int cutoff) : dim_(dim), cutoff_(cutoff) {
  if (dim < 1) throw ValidationError("coefficient field dimension must be positive");
  if (cutoff < 0) throw ValidationError("coefficient field cutoff must be non-negative");
  long n = 1;
  for (int i = 0; i < dim; ++i) n *= side();
  amps_.assign(n, cplx{});
  real_ = true;  // the zero field is real
}

CoefficientField CoefficientField::constant(int dim, cplx value) {
  CoefficientField g(dim, 0);
  g.amps_[0] = value;
  g.real_ = value.imag() == 0.0;
  return g;
}

CoefficientField CoefficientField::from_terms(int dim, std::span<const Term> terms, bool real) {
  for (const auto& [k, v] : terms)
    if (static_cast<int>(k.size()) != dim)
      throw ValidationError("multi-index length does not match field dimension");
  CoefficientField g(dim, required_cutoff(terms));
  for (const auto& [k, v] : terms) {
    if (v == cplx{}) continue;
    g.amps_[g.flat(k)] += v;
  }
  g.real_ = real;
  if (real) {
    std::vector<cplx> sym(g.amps_.size());
    for (const auto& k : box_indices(dim, -g.cutoff_, g.cutoff_)) {
      const cplx a = g[k];
      const cplx b = std::conj(g[negated(k)]);
      if (std::abs(a - b) > kRealTol * std::max(1.0, std::abs(a)))
        throw ValidationError("field flagged real violates conjugate symmetry");
      sym[g.flat(k)] = 0.5 * (a + b);
    }
    g.amps_ = std::move(sym);
  }
  return g;
}

CoefficientField CoefficientField::from_samples(int dim, int cutoff, int resolution,
                                                std::span<const cplx> samples, bool real) {
  if (resolution < 2 * cutoff + 1)
    throw ValidationError("sample resolution must be at least 2*cutoff+1");
  const auto grid = box_indices(dim, 0, resolution - 1);
  if (samples.size() != grid.size()) throw ValidationError("sample count does not match grid");
  std::vector<Term> terms;
  const double norm = std::pow(static_cast<double>(resolution), -dim);
  for (const auto& k : box_indices(dim, -cutoff, cutoff)) {
    cplx acc{};
    for (std::size_t p = 0; p < grid.size(); ++p) {
      double phase = 0.0;
      for (int a = 0; a < dim; ++a) phase += static_cast<double>(k[a]) * grid[p][a] / resolution;
      acc += samples[p] * std::polar(1.0, -kTwoPi * phase);
    }
    terms.emplace_back(k, acc * norm);
  }
  CoefficientField g(dim, cutoff);
  for (const auto& [k, v] : terms) g.amps_[g.flat(k)] = v;
  if (real) {
    // Symmetrize exactly; samples of a real function give conjugate-symmetric
    // DFT amplitudes up to rounding.
    std::vector<CoefficientField::Term> sym;
    for (const auto& [k, v] : terms) sym.emplace_back(k, 0.5 * (v + std::conj(g[negated(k)])));
    CoefficientField r(dim, cutoff);
    for (const auto& [k, v] : sym) r.amps_[r.flat(k)] = v;
    r.real_ = true;
    return r;
  }
  g.real_ = false;
  return g;
}

long CoefficientField::flat(std::span<const int> k) const {
  long idx = 0;
  for (int a = 0; a < dim_; ++a) {
    if (k[a] < -cutoff_ || k[a] > cutoff_) return -1;
    idx = idx * side() + (k[a] + cutoff_);
  }
  return idx;
}

bool CoefficientField::is_zero() const {
  return std::all_of(amps_.begin(), amps_.end(), [](cplx v) { return v == cplx{}; });
}

cplx CoefficientField::operator[](std::span<const int> k) const {
  if (static_cast<int>(k.size()) != dim_) throw ValidationError("multi-index length mismatch");
  const long i = flat(k);
  return i < 0 ? cplx{} : amps_[i];
}

cplx CoefficientField::mean() const { return amps_[flat(MultiIndex(dim_, 0))]; }

std::vector<CoefficientField::Term> CoefficientField::terms() const {
  std::vector<Term> out;
  const auto idx = box_indices(dim_, -cutoff_, cutoff_);
  for (std::size_t i = 0; i < idx.size(); ++i)
    if (amps_[i] != cplx{}) out.emplace_back(idx[i], amps_[i]);
  return out;
}

cplx CoefficientField::evaluate(std::span<const double> u) const {
  if (static_cast<int>(u.size()) != dim_) throw ValidationError("point dimension mismatch");
  const auto ph = axis_phases(u, cutoff_);
  cplx acc{};
  MultiIndex k(dim_, -cutoff_);
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (amps_[i] != cplx{}) {
      cplx term = amps_[i];
      for (int a = 0; a < dim_; ++a) term *= ph[a][k[a] + cutoff_];
      acc += term;
    }
    for (int a = dim_ - 1; a >= 0; --a) {
      if (++k[a] <= cutoff_) break;
      k[a] = -cutoff_;
    }
  }
  if (real_) acc.imag(0.0);
  return acc;
}

std::vector<cplx> CoefficientField::evaluate(const Eigen::MatrixXd& points) const {
  if (points.cols() != dim_) throw ValidationError("point matrix has wrong column count");
  std::vector<cplx> out(points.rows());
  std::vector<double> u(dim_);
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    for (int a = 0; a < dim_; ++a) u[a] = points(r, a);
    out[r] = evaluate(u);
  }
  return out;
}

std::vector<cplx> CoefficientField::sample_grid(int resolution) const {
  const auto grid = box_indices(dim_, 0, resolution - 1);
  std::vector<cplx> out(grid.size());
  std::vector<double> u(dim_);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    for (int a = 0; a < dim_; ++a) u[a] = static_cast<double>(grid[p][a]) / resolution;
    out[p] = evaluate(u);
  }
  return out;
}

double CoefficientField::sup_norm_sampled(int resolution) const {
  if (is_zero()) return 0.0;
  double m = 0.0;
  for (cplx v : sample_grid(resolution)) m = std::max(m, std::abs(v));
  return m;
}

CoefficientField CoefficientField::conjugated() const {
  std::vector<Term> t;
  for (const auto& [k, v] : terms()) t.emplace_back(negated(k), std::conj(v));
  return from_terms(dim_, t, real_);
}

CoefficientField CoefficientField::scaled(cplx factor) const {
  std::vector<Term> t = terms();
  for (auto& [k, v] : t) v *= factor;
  return from_terms(dim_, t, real_ && factor.imag() == 0.0);
}

CoefficientField CoefficientField::plus(const CoefficientField& other) const {
  if (other.dim_ != dim_) throw ValidationError("adding fields of different dimension");
  std::vector<Term> t = terms();
  for (auto& term : other.terms()) t.push_back(std::move(term));
  return from_terms(dim_, t, real_ && other.real_);
}

CoefficientField CoefficientField::dilated(const IntMatrix& m) const {
  if (m.rows() != dim_ || m.cols() != dim_) throw ValidationError("dilation matrix has wrong size");
  if (determinant(m) == 0) throw SingularMatrix("dilation matrix is singular");
  std::vector<Term> t;
  for (const auto& [k, v] : terms()) {
    MultiIndex mk(dim_, 0);
    for (int i = 0; i < dim_; ++i) {
      long s = 0;
      for (int j = 0; j < dim_; ++j) s += m(j, i) * k[j];
      mk[i] = static_cast<int>(s);
    }
    t.emplace_back(std::move(mk), v);
  }
  CoefficientField out = from_terms(dim_, t, false);
  out.real_ = real_;
  return out;
}

OperatorSpec::OperatorSpec(int dim, std::vector<CoefficientField> principal,
                           std::vector<CoefficientField> first,
                           std::vector<CoefficientField> first_prime, CoefficientField zeroth,
                           bool self_adjoint)
    : dim_(dim),
      principal_(std::move(principal)),
      first_(std::move(first)),
      first_prime_(std::move(first_prime)),
      zeroth_(std::move(zeroth)),
      self_adjoint_(self_adjoint) {
  if (dim < 1) throw ValidationError("operator dimension must be positive");
  if (principal_.size() != static_cast<std::size_t>(dim * dim))
    throw ValidationError("principal part must have d*d entries");
  if (first_.size() != static_cast<std::size_t>(dim) ||
      first_prime_.size() != static_cast<std::size_t>(dim))
    throw ValidationError("first-order parts must have d entries");
  auto check = [dim](const CoefficientField& g) {
    if (g.dimension() != dim) throw ValidationError("coefficient dimension mismatch");
  };
  for (const auto& g : principal_) check(g);
  for (const auto& g : first_) check(g);
  for (const auto& g : first_prime_) check(g);
  check(zeroth_);
  pure_ = zeroth_.is_zero() &&
          std::all_of(first_.begin(), first_.end(), [](const auto& g) { return g.is_zero(); }) &&
          std::all_of(first_prime_.begin(), first_prime_.end(),
                      [](const auto& g) { return g.is_zero(); });
}

OperatorSpec OperatorSpec::pure(int dim, std::vector<CoefficientField> principal,
                                bool self_adjoint) {
  std::vector<CoefficientField> zeros(dim, CoefficientField(dim));
  return OperatorSpec(dim, std::move(principal), zeros, zeros, CoefficientField(dim),
                      self_adjoint);
}

OperatorSpec OperatorSpec::isotropic(int dim, const CoefficientField& c, bool self_adjoint) {
  std::vector<CoefficientField> p;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) p.push_back(i == j ? c : CoefficientField(dim));
  return pure(dim, std::move(p), self_adjoint);
}

int OperatorSpec::max_cutoff() const {
  int f = zeroth_.cutoff();
  for (const auto& g : principal_) f = std::max(f, g.cutoff());
  for (const auto& g : first_) f = std::max(f, g.cutoff());
  for (const auto& g : first_prime_) f = std::max(f, g.cutoff());
  return f;
}

Eigen::MatrixXcd OperatorSpec::principal_at(std::span<const double> u) const {
  Eigen::MatrixXcd c(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) c(i, j) = principal(i, j).evaluate(u);
  return c;
}

double self_adjoint_defect(const OperatorSpec& spec) {
  const int d = spec.dimension();
  const int f = spec.max_cutoff();
  double worst = 0.0;
  for (const auto& m : box_indices(d, -f, f)) {
    const MultiIndex mm = negated(m);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j)
        worst = std::max(worst, std::abs(spec.principal(j, i)[m] -
                                         std::conj(spec.principal(i, j)[mm])));
      worst = std::max(worst, std::abs(spec.first_order_prime(i)[m] -
                                       std::conj(spec.first_order(i)[mm])));
    }
    worst = std::max(worst, std::abs(spec.zeroth()[m] - std::conj(spec.zeroth()[mm])));
  }
  return worst;
}

void check_self_adjoint(const OperatorSpec& spec, double tol) {
  if (!spec.self_adjoint()) return;
  const double defect = self_adjoint_defect(spec);
  if (defect > tol)
    throw SelfAdjointViolation("Hermiticity relations violated by " + std::to_string(defect));
}

EllipticityReport validate(const OperatorSpec& spec, int grid_resolution) {
  const int d = spec.dimension();
  if (grid_resolution < 2 * spec.max_cutoff() + 1)
    throw ValidationError("grid resolution must be at least 2F+1");
  check_self_adjoint(spec);

  std::vector<std::vector<cplx>> c(d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) c[i * d + j] = spec.principal(i, j).sample_grid(grid_resolution);

  double lambda = std::numeric_limits<double>::infinity();
  Eigen::MatrixXcd re_c(d, d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver;
  for (std::size_t p = 0; p < c[0].size(); ++p) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        re_c(i, j) = 0.5 * (c[i * d + j][p] + std::conj(c[j * d + i][p]));
    solver.compute(re_c, Eigen::EigenvaluesOnly);
    lambda = std::min(lambda, solver.eigenvalues()(0));
  }
  if (!(lambda > 0.0))
    throw NotElliptic("sampled ellipticity constant " + std::to_string(lambda) + " <= 0");

  double norm = 1.0 / lambda;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (cplx v : c[i * d + j]) s = std::max(s, std::abs(v));
      norm += s;
    }
    norm += spec.first_order(i).sup_norm_sampled(grid_resolution);
    norm += spec.first_order_prime(i).sup_norm_sampled(grid_resolution);
  }
  norm += spec.zeroth().sup_norm_sampled(grid_resolution);
  return {lambda, norm};
}

OperatorSpec rescale(const OperatorSpec& spec, const IntMatrix& m) {
  if (m.rows() != spec.dimension() || m.cols() != spec.dimension())
    throw ValidationError("rescaling matrix has wrong size");
  if (determinant(m) == 0) throw SingularMatrix("rescaling matrix is singular");
  return spec.transformed([&](const CoefficientField& g) { return g.dilated(m); });
}

OperatorSpec rescale(const OperatorSpec& spec, int factor) {
  return rescale(spec, scaled_identity(spec.dimension(), factor));
}

OperatorSpec shift_zeroth(const OperatorSpec& spec, double mu) {
  std::vector<CoefficientField> p, c, cp;
  for (int i = 0; i < spec.dimension(); ++i) {
    for (int j = 0; j < spec.dimension(); ++j) p.push_back(spec.principal(i, j));
    c.push_back(spec.first_order(i));
    cp.push_back(spec.first_order_prime(i));
  }
  return OperatorSpec(spec.dimension(), std::move(p), std::move(c), std::move(cp),
                      spec.zeroth().plus(CoefficientField::constant(spec.dimension(), mu)),
                      spec.self_adjoint());
}

}  // namespace bloch
