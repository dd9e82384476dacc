#pragma once

#include <vector>

#include "bloch/lattice.hpp"

// Discrete Zak transforms on band-limited samples. A signal is sampled at
// u_p - n with u_p = p / P on the unit cell and translates |n|_inf <= W; the
// torus integral becomes the roots-of-unity rule.
namespace bloch {

/// values[s * P^d + p] = f(u_p - n_s), with n_s the s-th point of [-W, W]^d
/// and p the cell grid index, both lexicographic.
struct SampledSignal {
  int dim = 1;
  int resolution = 1;  // P
  int window = 0;      // W
  std::vector<cplx> values;

  long cell_size() const;
  std::vector<MultiIndex> shifts() const { return box_indices(dim, -window, window); }
  double norm() const;  // (P^{-d} sum |f|^2)^{1/2}
};

SampledSignal zero_signal(int dim, int resolution, int window);
// f(. - s): every translate index moves by s; the window grows to W + |s|_inf.
SampledSignal translated(const SampledSignal& f, const MultiIndex& s);

/// F(w_i, u_p) on torus nodes theta_i = 2 pi r_i / denominator.
/// The plain transform uses denominator Q and r over [0, Q)^d. The M-transform
/// uses denominator Q e (e = lattice exponent of M) and the nodes
/// r = e (M^T)^{-1} (q + Q j), ordered by (q, j) with j over residues(M^T):
/// exactly the w with w^M on the Q-grid.
struct ZakArray {
  int dim = 1;
  int resolution = 1;
  long quadrature = 1;   // Q of the underlying z-grid
  long denominator = 1;  // Q for Z, Q e for Z_M
  std::vector<IntVector> nodes;
  Eigen::MatrixXcd values;  // nodes x P^d

  std::vector<double> theta(std::size_t i) const;
  // Position of the node congruent to r mod denominator; -1 if absent.
  long find(const IntVector& r) const;
};

// F(z_q, u_p) = sum_n z_q^n f(u_p - n). Raises AliasingWindow for Q <= 2W.
ZakArray zak_forward(const SampledSignal& f, int quadrature);
// f(u_p - n) = Q^{-d} sum_q conj(z_q)^n F(z_q, u_p) for |n|_inf <= W.
SampledSignal zak_inverse(const ZakArray& f, int window);

// F_M(w, u_p) = sum_n w^n f(u_p - M^{-1} n) on all of the unit cell.
// Needs P divisible by the lattice exponent of M (GridIncompatible otherwise).
ZakArray zak_forward_general(const SampledSignal& f, const IntMatrix& m, int quadrature);

// Discrete Parseval norms: (Q^{-d} P^{-d} sum |F|^2)^{1/2} for Z and
// ((Q^d N)^{-1} N^{-1} P^{-d} sum |F_M|^2)^{1/2} for Z_M, N = |det M|.
double zak_norm(const ZakArray& f);
double zak_norm_general(const ZakArray& f, const IntMatrix& m);

// Root quasimomenta theta_w = (M^T)^{-1}(theta_z + 2 pi j), j over residues(M^T).
std::vector<std::vector<double>> root_thetas(const IntMatrix& m, const std::vector<double>& theta_z);

// F(z, x) = N^{-1} sum_{w^M = z} F_M(w, x) on the Q-grid of F_M.
ZakArray zak_refine_mean(const ZakArray& f_m, const IntMatrix& m);
// F_M(w, u_p) = sum_{p in Z^d/MZ^d} w^{-p} F(w^M, u_p + M^{-1} p) for node r of
// denominator Q e; the result is one cell row.
Eigen::VectorXcd zak_embed(const ZakArray& f, const IntMatrix& m, const IntVector& r);
// zak_embed at every node of the M-grid.
ZakArray zak_embed_all(const ZakArray& f, const IntMatrix& m);

// Shift by M^{-1} p of cell data at fixed z, using F(z, u + n) = z^n F(z, u).
Eigen::VectorXcd cell_shift(const Eigen::VectorXcd& data, int dim, int resolution,
                            const std::vector<double>& theta_z, const IntMatrix& m, const IntVector& p);
// (P_w F)(u) = N^{-1} sum_p w^{-p} F(z, u + M^{-1} p); requires w^M = z.
Eigen::VectorXcd zak_project(const Eigen::VectorXcd& data, int dim, int resolution,
                             const std::vector<double>& theta_z, const IntMatrix& m,
                             const std::vector<double>& theta_w);

}  // namespace bloch
