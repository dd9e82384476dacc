#include "bloch/fiber.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bloch/homog.hpp"

namespace bloch {

Quasimomentum Quasimomentum::canonical(std::vector<double> theta) {
  for (double& t : theta) {
    t = std::fmod(t + kPi, kTwoPi);
    if (t < 0) t += kTwoPi;
    t -= kPi;
    if (t >= kPi) t -= kTwoPi;
  }
  return {std::move(theta)};
}

bool Quasimomentum::is_canonical() const {
  return std::all_of(theta.begin(), theta.end(), [](double t) { return t >= -kPi && t < kPi; });
}

PlaneWaveBasis::PlaneWaveBasis(int dim, std::vector<MultiIndex> indices, std::vector<double> theta)
    : dim_(dim), indices_(std::move(indices)), theta_(std::move(theta)) {
  if (dim < 1) throw ValidationError("basis dimension must be positive");
  if (static_cast<int>(theta_.size()) != dim) throw ValidationError("theta has wrong dimension");
  if (indices_.empty()) throw ValidationError("basis must contain at least one plane wave");
  std::set<MultiIndex> seen;
  for (const auto& k : indices_) {
    if (static_cast<int>(k.size()) != dim) throw ValidationError("basis index has wrong dimension");
    if (!seen.insert(k).second) throw ValidationError("duplicate plane-wave index");
  }
}

PlaneWaveBasis PlaneWaveBasis::cube(int dim, int cutoff, const Quasimomentum& q) {
  if (cutoff < 0) throw ValidationError("plane-wave cutoff must be non-negative");
  if (q.dimension() != dim) throw ValidationError("quasimomentum has wrong dimension");
  PlaneWaveBasis b(dim, box_indices(dim, -cutoff, cutoff), q.theta);
  b.cutoff_ = cutoff;
  return b;
}

std::optional<std::size_t> PlaneWaveBasis::position(const MultiIndex& k) const {
  if (cutoff_ >= 0) {
    std::size_t idx = 0;
    for (int a = 0; a < dim_; ++a) {
      if (k[a] < -cutoff_ || k[a] > cutoff_) return std::nullopt;
      idx = idx * (2 * cutoff_ + 1) + (k[a] + cutoff_);
    }
    return idx;
  }
  const auto it = std::find(indices_.begin(), indices_.end(), k);
  if (it == indices_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - indices_.begin());
}

Eigen::MatrixXcd PlaneWaveBasis::evaluate(const Eigen::MatrixXd& points) const {
  if (points.cols() != dim_) throw ValidationError("point matrix has wrong column count");
  Eigen::MatrixXcd out(points.rows(), size());
  for (std::size_t i = 0; i < size(); ++i)
    for (Eigen::Index r = 0; r < points.rows(); ++r) {
      double phase = 0.0;
      for (int a = 0; a < dim_; ++a) phase += frequency(i, a) * points(r, a);
      out(r, i) = std::polar(1.0, phase);
    }
  return out;
}

double hermitian_defect(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

FiberMatrix assemble(const OperatorSpec& spec, const PlaneWaveBasis& basis, AssemblyOptions opts) {
  const int d = spec.dimension();
  if (basis.dimension() != d) throw ValidationError("basis and operator dimension differ");
  check_self_adjoint(spec);

  const std::size_t n = basis.size();
  Eigen::MatrixXd xi(n, d);
  for (std::size_t a = 0; a < n; ++a)
    for (int i = 0; i < d; ++i) xi(a, i) = basis.frequency(a, i);

  std::vector<std::pair<int, int>> principal_terms;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (!spec.principal(i, j).is_zero()) principal_terms.emplace_back(i, j);

  const cplx iu{0.0, 1.0};
  Eigen::MatrixXcd A(n, n);
  MultiIndex diff(d);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (int i = 0; i < d; ++i) diff[i] = basis.index(a)[i] - basis.index(b)[i];
      cplx v{};
      for (const auto& [i, j] : principal_terms) v += xi(a, i) * xi(b, j) * spec.principal(i, j)[diff];
      if (!spec.pure_second_order()) {
        for (int i = 0; i < d; ++i)
          v += iu * (xi(b, i) * spec.first_order(i)[diff] -
                     xi(a, i) * spec.first_order_prime(i)[diff]);
        v += spec.zeroth()[diff];
      }
      A(a, b) = v;
    }
  }

  if (spec.self_adjoint() && opts.enforce_hermitian) {
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    const double defect = hermitian_defect(A);
    if (defect > 1e-12 * scale)
      throw SelfAdjointViolation("assembled fiber matrix is not Hermitian (defect " +
                                 std::to_string(defect) + ")");
    A = (0.5 * (A + A.adjoint())).eval();
  }
  return {basis, std::move(A), spec.self_adjoint()};
}

FiberMatrix assemble(const OperatorSpec& spec, const Quasimomentum& q, int cutoff,
                     AssemblyOptions opts) {
  return assemble(spec, PlaneWaveBasis::cube(spec.dimension(), cutoff, q), opts);
}

FiberMatrix assemble_homogenized(const HomogenizedOperator& h, const PlaneWaveBasis& basis) {
  const int d = static_cast<int>(h.C_hat.rows());
  if (basis.dimension() != d) throw ValidationError("basis and operator dimension differ");
  const std::size_t n = basis.size();
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
  const cplx iu{0.0, 1.0};
  for (std::size_t a = 0; a < n; ++a) {
    cplx v = h.c0_hat;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j)
        v += basis.frequency(a, i) * h.C_hat(i, j) * basis.frequency(a, j);
      v += iu * h.drift(i) * basis.frequency(a, i);
    }
    if (h.self_adjoint) v.imag(0.0);
    A(a, a) = v;
  }
  return {basis, std::move(A), h.self_adjoint};
}

FiberMatrix assemble_homogenized(const HomogenizedOperator& h, const Quasimomentum& q,
                                 int cutoff) {
  return assemble_homogenized(
      h, PlaneWaveBasis::cube(static_cast<int>(h.C_hat.rows()), cutoff, q));
}

}  // namespace bloch
