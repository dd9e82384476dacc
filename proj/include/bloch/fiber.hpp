#pragma once

#include <optional>
#include <vector>

#include "bloch/coeffs.hpp"

namespace bloch {

struct HomogenizedOperator;

/// Fiber label: z_j = exp(i theta_j). canonical() wraps into [-pi, pi).
struct Quasimomentum {
  std::vector<double> theta;

  static Quasimomentum zero(int dim) { return {std::vector<double>(dim, 0.0)}; }
  static Quasimomentum canonical(std::vector<double> theta);
  int dimension() const { return static_cast<int>(theta.size()); }
  bool is_canonical() const;
};

/// Orthonormal plane waves e_k(u) = exp(i xi_k . u), xi_k = theta + 2 pi k,
/// each satisfying e_k(u + n) = z^n e_k(u).
///
/// cube() gives the square truncation |k|_inf <= K in lexicographic order;
/// the general constructor accepts any duplicate-free index list. theta may be
/// any real vector (relabelled fibers use theta + 2 pi e_j).
class PlaneWaveBasis {
 public:
  PlaneWaveBasis(int dim, std::vector<MultiIndex> indices, std::vector<double> theta);
  static PlaneWaveBasis cube(int dim, int cutoff, const Quasimomentum& q);

  int dimension() const { return dim_; }
  std::size_t size() const { return indices_.size(); }
  const MultiIndex& index(std::size_t i) const { return indices_[i]; }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  const std::vector<double>& theta() const { return theta_; }
  // -1 when the basis is not a cube.
  int cutoff() const { return cutoff_; }
  // xi_{k,axis}
  double frequency(std::size_t i, int axis) const {
    return theta_[axis] + kTwoPi * indices_[i][axis];
  }
  std::optional<std::size_t> position(const MultiIndex& k) const;

  // Rows are points u (count x d); result(r, i) = e_i(u_r).
  Eigen::MatrixXcd evaluate(const Eigen::MatrixXd& points) const;

  bool same_space(const PlaneWaveBasis& other) const {
    return indices_ == other.indices_ && theta_ == other.theta_;
  }

 private:
  int dim_;
  int cutoff_ = -1;
  std::vector<MultiIndex> indices_;
  std::vector<double> theta_;
};

struct FiberMatrix {
  PlaneWaveBasis basis;
  Eigen::MatrixXcd entries;
  bool hermitian;
};

struct AssemblyOptions {
  // For self-adjoint specs, replace A by (A + A*)/2 after checking that the
  // raw entries are Hermitian to 1e-12 relative to max|A|.
  bool enforce_hermitian = true;
};

// Galerkin matrix of the fiber form h_z on the basis:
//   A[a,b] = sum_ij xi_ai xi_bj c_ij[a-b] + i sum_i (xi_bi c_i[a-b] - xi_ai c'_i[a-b]) + c0[a-b].
FiberMatrix assemble(const OperatorSpec& spec, const PlaneWaveBasis& basis,
                     AssemblyOptions opts = {});
FiberMatrix assemble(const OperatorSpec& spec, const Quasimomentum& q, int cutoff,
                     AssemblyOptions opts = {});

// Diagonal fiber of the constant-coefficient homogenized operator.
FiberMatrix assemble_homogenized(const HomogenizedOperator& h, const PlaneWaveBasis& basis);
FiberMatrix assemble_homogenized(const HomogenizedOperator& h, const Quasimomentum& q, int cutoff);

// Largest |A - A*| entry.
double hermitian_defect(const Eigen::MatrixXcd& a);

}  // namespace bloch
