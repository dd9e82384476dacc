#pragma once

// Test-side reference computations. None of these call into the library's
// numerical kernels; they only share its plain data types.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "bloch/common.hpp"
#include "bloch/zak.hpp"

namespace oracle {

using bloch::cplx;
using CMat = std::vector<std::vector<cplx>>;

// Eigenvalues of a Hermitian matrix: Householder reduction to Hermitian
// tridiagonal form, then Sturm-sequence bisection on (diag, |offdiag|).
inline std::vector<double> hermitian_eigenvalues(CMat a) {
  const int n = static_cast<int>(a.size());
  for (int k = 0; k + 2 < n; ++k) {
    double xnorm = 0.0;
    for (int i = k + 1; i < n; ++i) xnorm += std::norm(a[i][k]);
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    const cplx x0 = a[k + 1][k];
    const cplx phase = std::abs(x0) == 0.0 ? cplx(1.0) : x0 / std::abs(x0);
    std::vector<cplx> v(n, 0.0);
    for (int i = k + 1; i < n; ++i) v[i] = a[i][k];
    v[k + 1] += phase * xnorm;
    double vn = 0.0;
    for (int i = k + 1; i < n; ++i) vn += std::norm(v[i]);
    vn = std::sqrt(vn);
    for (int i = k + 1; i < n; ++i) v[i] /= vn;
    // A <- (I - 2 v v*) A (I - 2 v v*)
    std::vector<cplx> av(n, 0.0);  // A v
    for (int i = 0; i < n; ++i)
      for (int j = k + 1; j < n; ++j) av[i] += a[i][j] * v[j];
    cplx vav = 0.0;
    for (int i = k + 1; i < n; ++i) vav += std::conj(v[i]) * av[i];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        a[i][j] += -2.0 * av[i] * std::conj(v[j]) - 2.0 * v[i] * std::conj(av[j]) +
                   4.0 * vav * v[i] * std::conj(v[j]);
  }
  std::vector<double> d(n), e(n, 0.0);
  double bound = 0.0;
  for (int i = 0; i < n; ++i) {
    d[i] = a[i][i].real();
    if (i + 1 < n) e[i] = std::abs(a[i + 1][i]);
  }
  for (int i = 0; i < n; ++i) bound = std::max(bound, std::abs(d[i]) + e[i] + (i > 0 ? e[i - 1] : 0.0));
  // Number of eigenvalues strictly below x.
  auto count_below = [&](double x) {
    int count = 0;
    double q = 1.0;
    for (int i = 0; i < n; ++i) {
      const double off = i > 0 ? e[i - 1] * e[i - 1] : 0.0;
      q = d[i] - x - (i > 0 ? off / q : 0.0);
      if (q == 0.0) q = -1e-300;
      if (q < 0.0) ++count;
    }
    return count;
  };
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) {
    double lo = -bound - 1.0, hi = bound + 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (count_below(mid) > k) hi = mid;
      else lo = mid;
    }
    out[k] = 0.5 * (lo + hi);
  }
  return out;
}

// Composite trapezoid rule on [0, 1) for a 1-periodic integrand (spectrally
// accurate for smooth periodic functions).
template <class F>
double periodic_trapezoid(F f, int points) {
  double s = 0.0;
  for (int i = 0; i < points; ++i) s += f(static_cast<double>(i) / points);
  return s / points;
}

inline double harmonic_mean_two_plus_cos() {
  return 1.0 / periodic_trapezoid([](double x) { return 1.0 / (2.0 + std::cos(bloch::kTwoPi * x)); }, 4096);
}

inline double free_heat_kernel(double x, double y, double t) {
  return std::exp(-(x - y) * (x - y) / (4.0 * t)) / std::sqrt(4.0 * bloch::kPi * t);
}

// Brute-force class count of Z^d / M Z^d: distinct reductions of a large box,
// compared with the congruence test M^{-1}(x - y) integral done in doubles.
inline long brute_force_class_count(const bloch::IntMatrix& m) {
  const int d = static_cast<int>(m.rows());
  const Eigen::MatrixXd inv = m.cast<double>().inverse();
  long bound = 0;
  for (long i = 0; i < m.size(); ++i) bound += std::abs(m.data()[i]);
  std::vector<Eigen::VectorXd> reps;
  for (const auto& k : bloch::box_indices(d, 0, static_cast<int>(bound))) {
    Eigen::VectorXd x(d);
    for (int a = 0; a < d; ++a) x(a) = k[a];
    bool found = false;
    for (const auto& r : reps) {
      const Eigen::VectorXd c = inv * (x - r);
      bool integral = true;
      for (int a = 0; a < d; ++a) integral = integral && std::abs(c(a) - std::round(c(a))) < 1e-9;
      if (integral) {
        found = true;
        break;
      }
    }
    if (!found) reps.push_back(x);
  }
  return static_cast<long>(reps.size());
}

// Direct summation of sum_n z^n f(u_p - n) at one torus angle.
inline std::vector<cplx> zak_direct(const bloch::SampledSignal& f, const std::vector<double>& theta) {
  const auto shifts = f.shifts();
  const long cells = f.cell_size();
  std::vector<cplx> out(cells, 0.0);
  for (std::size_t s = 0; s < shifts.size(); ++s) {
    double ph = 0.0;
    for (int a = 0; a < f.dim; ++a) ph += theta[a] * shifts[s][a];
    for (long p = 0; p < cells; ++p) out[p] += std::polar(1.0, ph) * f.values[s * cells + p];
  }
  return out;
}

// Direct summation of sum_n w^n f(u - M^{-1} n) at one cell point u_p: every
// sample point u_q - k is tested for membership of u_p - M^{-1} Z^d.
inline cplx zak_general_direct(const bloch::SampledSignal& f, const bloch::IntMatrix& m,
                               const std::vector<double>& theta_w, long p) {
  const int d = f.dim;
  const auto shifts = f.shifts();
  const auto cells = bloch::box_indices(d, 0, f.resolution - 1);
  const Eigen::MatrixXd md = m.cast<double>();
  cplx acc = 0.0;
  for (std::size_t s = 0; s < shifts.size(); ++s)
    for (std::size_t q = 0; q < cells.size(); ++q) {
      // n = M (u_p - (u_q - k))
      Eigen::VectorXd diff(d);
      for (int a = 0; a < d; ++a)
        diff(a) = static_cast<double>(cells[p][a] - cells[q][a]) / f.resolution + shifts[s][a];
      const Eigen::VectorXd n = md * diff;
      bool integral = true;
      for (int a = 0; a < d; ++a) integral = integral && std::abs(n(a) - std::round(n(a))) < 1e-9;
      if (!integral) continue;
      double ph = 0.0;
      for (int a = 0; a < d; ++a) ph += theta_w[a] * std::round(n(a));
      acc += std::polar(1.0, ph) * f.values[s * cells.size() + q];
    }
  return acc;
}

inline bloch::SampledSignal random_signal(std::mt19937_64& rng, int dim, int resolution, int window) {
  std::normal_distribution<double> g;
  bloch::SampledSignal f = bloch::zero_signal(dim, resolution, window);
  for (auto& v : f.values) v = {g(rng), g(rng)};
  return f;
}

inline Eigen::MatrixXcd random_hermitian(std::mt19937_64& rng, int n, double zero_fraction = 0.0) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u;
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = g(rng);
    for (int j = i + 1; j < n; ++j) {
      const cplx v = u(rng) < zero_fraction ? cplx(0.0) : cplx(g(rng), g(rng));
      a(i, j) = v;
      a(j, i) = std::conj(v);
    }
  }
  return a;
}

inline CMat to_rows(const Eigen::MatrixXcd& a) {
  CMat out(a.rows(), std::vector<cplx>(a.cols()));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out[i][j] = a(i, j);
  return out;
}

}  // namespace oracle
