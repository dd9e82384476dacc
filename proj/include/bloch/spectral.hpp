#pragma once

#include <vector>

#include "bloch/fiber.hpp"

namespace bloch {

/// Ascending eigenvalues with multiplicity; column n of vectors is the
/// normalized eigenvector for values[n].
struct EigenSystem {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
};

// Dense Hermitian eigensolver. The matrix is first split into the connected
// components of its exact-nonzero pattern, so decoupled modes come out exact.
// Degenerate clusters get a deterministic frame (Gram-Schmidt of the cluster
// projector applied to unit vectors in index order); isolated vectors are
// phase-fixed so their first significant component is real positive.
EigenSystem eig_hermitian(const FiberMatrix& a);
EigenSystem eig_hermitian(const Eigen::MatrixXcd& a);

/// lambda_n(theta_g) on the uniform grid theta = -pi + 2 pi g / G per axis.
struct BandStructure {
  int dimension = 0;
  int grid = 0;
  int cutoff = 0;
  std::vector<Quasimomentum> thetas;  // lexicographic grid order
  Eigen::MatrixXd bands;              // thetas.size() x (n_max + 1)

  int band_count() const { return static_cast<int>(bands.cols()); }
};

// Uniform grid of G^d quasimomenta in [-pi, pi)^d, lexicographic.
std::vector<Quasimomentum> theta_grid(int dim, int grid);

BandStructure band_sweep(const OperatorSpec& spec, int grid, int cutoff, int n_max,
                         Exec exec = Exec::Parallel);

struct BandGap {
  int n;              // gap between band n and band n + 1
  double lower;       // max_theta lambda_n
  double upper;       // min_theta lambda_{n+1}
  double length;      // max(0, upper - lower), snapped to 0 below the closure tolerance
  bool overlap;       // upper < lower beyond the closure tolerance
};

struct BandReport {
  std::vector<std::pair<double, double>> intervals;
  std::vector<BandGap> gaps;
};

// Gaps with upper - lower <= 1e-9 * max(1, |lower|) count as closed.
BandReport band_report(const BandStructure& bs);

// -Laplacian + V, self-adjoint. V must be real (conjugate-symmetric amplitudes).
OperatorSpec schrodinger_spec(const CoefficientField& v);

}  // namespace bloch
