#pragma once

#include <vector>

#include "bloch/homog.hpp"
#include "bloch/spectral.hpp"

namespace bloch {

/// e^{-tA} on a truncated fiber. weights holds e^{-t lambda_n} on the
/// spectral path and is empty on the general (matrix exponential) path.
struct FiberSemigroup {
  double t;
  Eigen::MatrixXcd matrix;
  Eigen::VectorXd weights;

  cplx trace() const { return matrix.trace(); }
};

FiberSemigroup heat_fiber(const EigenSystem& es, double t);
// Scaling-and-squaring exponential; works for non-Hermitian fibers.
FiberSemigroup heat_fiber_general(const FiberMatrix& a, double t);

double trace_norm(const Eigen::MatrixXcd& m);
double hs_norm(const Eigen::MatrixXcd& m);
double operator_norm(const Eigen::MatrixXcd& m);

// Relative slack below which an inequality counts as violated. Hermitian PSD
// semigroups make |S_t|_Tr <= |S_{t/2}|_HS^2 an identity, so rounding alone
// can push its slack slightly negative.
inline constexpr double kInequalityRoundoff = 1e-12;

struct InequalityCheck {
  double lhs;
  double rhs;
  double slack() const { return rhs - lhs; }
  bool holds() const { return slack() >= -kInequalityRoundoff * (1.0 + std::abs(rhs)); }
};

struct TraceHsReport {
  InequalityCheck square_s;    // |S_t|_Tr <= |S_{t/2}|_HS^2
  InequalityCheck square_t;    // |T_t|_Tr <= |T_{t/2}|_HS^2
  InequalityCheck difference;  // |S_t - T_t|_Tr <= (|S_{t/2}|_HS + |T_{t/2}|_HS) |S_{t/2} - T_{t/2}|_HS
  bool holds() const { return square_s.holds() && square_t.holds() && difference.holds(); }
};

// Raises InvariantViolation when an inequality fails.
TraceHsReport check_trace_hs_inequalities(const Eigen::MatrixXcd& s_t, const Eigen::MatrixXcd& s_half,
                                          const Eigen::MatrixXcd& t_t, const Eigen::MatrixXcd& t_half);

/// Kernel samples K(x_r, y_c); rows of x and y are points in R^d.
struct KernelGrid {
  Eigen::MatrixXd x;
  Eigen::MatrixXd y;
  Eigen::MatrixXcd values;  // x.rows() x y.rows()
};

// Uniform cell grid u_p = p / P, lexicographic (P^d x d).
Eigen::MatrixXd cell_points(int dim, int resolution);

// K^z_t(u, v) = sum_n e^{-t lambda_n} psi_n(u) conj(psi_n(v)) on the cell grid.
KernelGrid kernel_fiber(const EigenSystem& es, const PlaneWaveBasis& basis, double t, int resolution);

/// Whole-space heat kernel rebuilt from Q^d fiber kernels at theta_q = 2 pi q / Q
/// (canonical representatives):
///   K_t(x, y) = Q^{-d} sum_q K^{z_q}_t(x, y),
/// with plane waves evaluated at arbitrary real x, y (quasi-periodic extension).
/// The roots-of-unity rule aliases K_t(x + Q l, y) onto K_t(x, y); Q must
/// exceed twice the largest |x - y| of interest.
class LineKernel {
 public:
  LineKernel(const OperatorSpec& spec, double t, int quadrature, int cutoff, Exec exec = Exec::Parallel);

  int dimension() const { return dim_; }
  double time() const { return t_; }
  int quadrature() const { return q_; }

  KernelGrid evaluate(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, Exec exec = Exec::Parallel) const;
  cplx operator()(std::span<const double> x, std::span<const double> y) const;

 private:
  int dim_;
  double t_;
  int q_;
  std::vector<PlaneWaveBasis> bases_;
  std::vector<Eigen::MatrixXcd> heat_;
};

// Grid route of the inverse Zak transform: K_t(u - n, v) for the cell grid u, v
// and all translates |n|_inf <= window. Raises AliasingWindow when Q <= 2W.
// x rows are u_p - n ordered by (n, p), n lexicographic.
KernelGrid kernel_line(const OperatorSpec& spec, double t, int window, int quadrature, int resolution,
                       int cutoff, Exec exec = Exec::Parallel);

// Smallest a with |K(x, y)| <= a t^{-d/2} exp(-b |x - y|^2 / t) on the samples.
double gaussian_bound_fit(const KernelGrid& kernel, double t, double b);

// max |K_t(x, y) - m^{-d} K^{(m)}_{t/m^2}(x/m, y/m)| over the sample pairs,
// both sides rebuilt independently by LineKernel.
double scaling_check(const OperatorSpec& spec, int m, double t, int quadrature, int cutoff,
                     const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, Exec exec = Exec::Parallel);

struct HomogConvergenceRow {
  int m;
  double trace_distance;     // |S^{(m),z}_t - S^_t^z|_Tr
  double hs_distance;
  double eigen_sum;          // sum_n |e^{-t lambda_n(m)} - e^{-t lambda^_n}|
  double cutoff_change;      // |trace distance at cutoff + 4 - trace distance|
};

// Raises InvariantViolation if eigen_sum exceeds the trace distance and
// TruncationMismatch if the two fibers live on different bases.
std::vector<HomogConvergenceRow> homog_convergence(const OperatorSpec& spec, const Quasimomentum& z, double t,
                                                   const std::vector<int>& m_list, int cutoff,
                                                   Exec exec = Exec::Parallel);

// Distances between two semigroups sharing a basis (used by homog_convergence).
HomogConvergenceRow semigroup_distance(const FiberMatrix& a, const FiberMatrix& b, double t);

struct KernelConvergenceRow {
  int m;
  double t;
  double sup_distance;  // sup over the disc |x|^2 + |y|^2 <= v t
  double l1_distance;   // sup_x int dy |K - K^|, x over the unit cell
};

struct KernelConvergenceOptions {
  int cutoff = 16;
  int disc_samples = 21;        // per axis of the disc bounding box
  int cell_samples = 8;         // x samples for the L1 sup
  double dy = 0.05;             // y step of the L1 integral
  double tail = 12.0;           // L1 window half-width in units of sqrt(t * max C)
};

// d = 1 pure second-order specs; schedule rows are (m, t).
std::vector<KernelConvergenceRow> kernel_convergence(const OperatorSpec& spec, double v,
                                                     const std::vector<std::pair<int, double>>& schedule,
                                                     const KernelConvergenceOptions& opts = {},
                                                     Exec exec = Exec::Parallel);

}  // namespace bloch
