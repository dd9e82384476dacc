#pragma once

#include <vector>

#include "bloch/homog.hpp"
#include "bloch/spectral.hpp"

namespace bloch {

/// Spectrum of the rescaled fiber at theta assembled from the N^d root fibers
/// theta_w = (theta + 2 pi j) / N, j in {0..N-1}^d (not wrapped, so the root
/// bases match the direct basis index for index).
struct RefinedSpectrum {
  int n = 2;
  std::vector<double> theta;
  std::vector<std::vector<double>> root_thetas;
  std::vector<Eigen::VectorXd> root_values;  // N^2 lambda_k(w), ascending
  Eigen::VectorXd merged;
};

// per_fiber < 0 keeps every eigenvalue of each root fiber.
RefinedSpectrum refined_spectrum(const OperatorSpec& spec, const std::vector<double>& theta, int n,
                                 int cutoff, int per_fiber = -1, Exec exec = Exec::Parallel);

// Index set {j + N m : j in {0..N-1}^d, |m|_inf <= cutoff} on which the
// direct rescaled fiber matches the root fibers exactly.
PlaneWaveBasis matched_basis(int dim, const std::vector<double>& theta, int n, int cutoff);

// max |sorted eigenvalues of rescale(spec, N) on matched_basis - merged|.
double refinement_check(const OperatorSpec& spec, const std::vector<double>& theta, int n, int cutoff,
                        Exec exec = Exec::Parallel);

struct RefinementLimitRow {
  int n;
  double deviation;           // max over the first n_show entries
  Eigen::VectorXd refined;    // first n_show merged values
  Eigen::VectorXd homogenized;  // first n_show of sorted <xi_k, C^ xi_k>
};

std::vector<RefinementLimitRow> refinement_limit(const OperatorSpec& spec, const std::vector<double>& theta,
                                                 const std::vector<int>& n_list, int n_show, int cutoff,
                                                 Exec exec = Exec::Parallel);

}  // namespace bloch
