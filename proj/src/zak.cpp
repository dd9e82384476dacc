#include "bloch/zak.hpp"

#include <cmath>

namespace bloch {
namespace {

long ipow(long b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

IntVector to_vector(const MultiIndex& k) {
  IntVector v(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) v(i) = k[i];
  return v;
}

// exp(i 2 pi (a.b mod den) / den); the integer reduction keeps phases exact.
cplx unit_phase(const IntVector& a, const IntVector& b, long den, int sign = 1) {
  const long k = floor_mod(a.dot(b), den);
  return std::polar(1.0, sign * kTwoPi * static_cast<double>(k) / static_cast<double>(den));
}

// P M^{-1} as an integer matrix; raises GridIncompatible when not integral.
IntMatrix scaled_inverse(const IntMatrix& m, long scale) {
  const long det = determinant(m);
  if (det == 0) throw SingularMatrix("lattice matrix is singular");
  IntMatrix out = adjugate(m) * scale;
  for (long i = 0; i < out.size(); ++i) {
    if (out.data()[i] % det != 0)
      throw GridIncompatible("cell resolution " + std::to_string(scale) + " is not a multiple of the lattice exponent");
    out.data()[i] /= det;
  }
  return out;
}

void require_square_dim(const IntMatrix& m, int dim) {
  if (m.rows() != dim || m.cols() != dim) throw ValidationError("lattice matrix has wrong size");
}

// Nodes r = e (M^T)^{-1} (q + Q j) mod Q e, ordered by (q, j).
std::vector<IntVector> general_nodes(const IntMatrix& m, long quadrature) {
  const int d = static_cast<int>(m.rows());
  const long e = lattice_exponent(m);
  const IntMatrix mt = m.transpose();
  const IntMatrix einv = scaled_inverse(mt, e);
  const ResidueSystem js(mt);
  std::vector<IntVector> nodes;
  for (const auto& q : box_indices(d, 0, static_cast<int>(quadrature) - 1)) {
    const IntVector qv = to_vector(q);
    for (const auto& j : js.representatives()) {
      IntVector r = einv * (qv + quadrature * j);
      for (long i = 0; i < r.size(); ++i) r(i) = floor_mod(r(i), quadrature * e);
      nodes.push_back(std::move(r));
    }
  }
  return nodes;
}

std::vector<MultiIndex> cell_grid(int dim, int resolution) { return box_indices(dim, 0, resolution - 1); }

long cell_flat(const IntVector& a, int resolution) {
  long idx = 0;
  for (long i = 0; i < a.size(); ++i) idx = idx * resolution + a(i);
  return idx;
}

}  // namespace

long SampledSignal::cell_size() const { return ipow(resolution, dim); }

double SampledSignal::norm() const {
  double s = 0.0;
  for (cplx v : values) s += std::norm(v);
  return std::sqrt(s / static_cast<double>(cell_size()));
}

SampledSignal zero_signal(int dim, int resolution, int window) {
  if (dim < 1 || resolution < 1 || window < 0) throw ValidationError("invalid signal shape");
  SampledSignal f{dim, resolution, window, {}};
  f.values.assign(ipow(2 * window + 1, dim) * f.cell_size(), cplx{});
  return f;
}

SampledSignal translated(const SampledSignal& f, const MultiIndex& s) {
  if (static_cast<int>(s.size()) != f.dim) throw ValidationError("shift has wrong dimension");
  int reach = 0;
  for (int v : s) reach = std::max(reach, std::abs(v));
  SampledSignal g = zero_signal(f.dim, f.resolution, f.window + reach);
  const long cells = f.cell_size();
  const auto old_shifts = f.shifts();
  const int side = 2 * g.window + 1;
  for (std::size_t k = 0; k < old_shifts.size(); ++k) {
    // g(u - n) = f(u - n + s): the sample of f at translate n moves to n + s.
    long idx = 0;
    for (int a = 0; a < f.dim; ++a) idx = idx * side + (old_shifts[k][a] + s[a] + g.window);
    for (long p = 0; p < cells; ++p) g.values[idx * cells + p] = f.values[k * cells + p];
  }
  return g;
}

std::vector<double> ZakArray::theta(std::size_t i) const {
  std::vector<double> t(dim);
  for (int a = 0; a < dim; ++a)
    t[a] = kTwoPi * static_cast<double>(nodes[i](a)) / static_cast<double>(denominator);
  return t;
}

long ZakArray::find(const IntVector& r) const {
  IntVector red = r;
  for (long i = 0; i < red.size(); ++i) red(i) = floor_mod(red(i), denominator);
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i] == red) return static_cast<long>(i);
  return -1;
}

ZakArray zak_forward(const SampledSignal& f, int quadrature) {
  if (quadrature <= 2 * f.window)
    throw AliasingWindow("quadrature " + std::to_string(quadrature) + " must exceed twice the window " +
                         std::to_string(f.window));
  const auto shifts = f.shifts();
  const long cells = f.cell_size();
  ZakArray out{f.dim, f.resolution, quadrature, quadrature, {}, {}};
  for (const auto& q : box_indices(f.dim, 0, quadrature - 1)) out.nodes.push_back(to_vector(q));
  out.values = Eigen::MatrixXcd::Zero(out.nodes.size(), cells);
  for (std::size_t i = 0; i < out.nodes.size(); ++i)
    for (std::size_t s = 0; s < shifts.size(); ++s) {
      const cplx ph = unit_phase(out.nodes[i], to_vector(shifts[s]), quadrature);
      for (long p = 0; p < cells; ++p) out.values(i, p) += ph * f.values[s * cells + p];
    }
  return out;
}

SampledSignal zak_inverse(const ZakArray& f, int window) {
  if (f.denominator != f.quadrature || static_cast<long>(f.nodes.size()) != ipow(f.quadrature, f.dim))
    throw GridIncompatible("inverse transform needs the plain Q-grid");
  if (f.quadrature <= 2 * window)
    throw AliasingWindow("quadrature " + std::to_string(f.quadrature) + " must exceed twice the window " +
                         std::to_string(window));
  SampledSignal g = zero_signal(f.dim, f.resolution, window);
  const auto shifts = g.shifts();
  const long cells = g.cell_size();
  const double norm = 1.0 / static_cast<double>(f.nodes.size());
  for (std::size_t s = 0; s < shifts.size(); ++s) {
    const IntVector n = to_vector(shifts[s]);
    for (std::size_t i = 0; i < f.nodes.size(); ++i) {
      const cplx ph = unit_phase(f.nodes[i], n, f.quadrature, -1);
      for (long p = 0; p < cells; ++p) g.values[s * cells + p] += ph * f.values(i, p);
    }
    for (long p = 0; p < cells; ++p) g.values[s * cells + p] *= norm;
  }
  return g;
}

ZakArray zak_forward_general(const SampledSignal& f, const IntMatrix& m, int quadrature) {
  require_square_dim(m, f.dim);
  if (quadrature <= 2 * f.window)
    throw AliasingWindow("quadrature " + std::to_string(quadrature) + " must exceed twice the window " +
                         std::to_string(f.window));
  const long e = lattice_exponent(m);
  if (f.resolution % e != 0)
    throw GridIncompatible("cell resolution must be a multiple of the lattice exponent " + std::to_string(e));
  const int d = f.dim;
  const long P = f.resolution;
  const auto grid = cell_grid(d, f.resolution);
  const auto shifts = f.shifts();
  const long cells = f.cell_size();

  // Sample (s, a') lands on u_a - M^{-1} n with n = M((a - a') / P + n_s)
  // whenever M (a - a') is divisible by P.
  struct Contribution {
    long sample;
    IntVector n;
  };
  std::vector<std::vector<Contribution>> contrib(cells);
  for (long a = 0; a < cells; ++a)
    for (long b = 0; b < cells; ++b) {
      const IntVector md = m * (to_vector(grid[a]) - to_vector(grid[b]));
      bool ok = true;
      for (long i = 0; i < d; ++i) ok = ok && md(i) % P == 0;
      if (!ok) continue;
      for (std::size_t s = 0; s < shifts.size(); ++s)
        contrib[a].push_back({static_cast<long>(s) * cells + b, IntVector(md / P + m * to_vector(shifts[s]))});
    }

  ZakArray out{d, f.resolution, quadrature, quadrature * e, general_nodes(m, quadrature), {}};
  out.values = Eigen::MatrixXcd::Zero(out.nodes.size(), cells);
  for (std::size_t i = 0; i < out.nodes.size(); ++i)
    for (long a = 0; a < cells; ++a) {
      cplx acc{};
      for (const auto& c : contrib[a]) acc += unit_phase(out.nodes[i], c.n, out.denominator) * f.values[c.sample];
      out.values(i, a) = acc;
    }
  return out;
}

double zak_norm(const ZakArray& f) {
  return std::sqrt(f.values.squaredNorm() / static_cast<double>(f.nodes.size() * f.values.cols()));
}

double zak_norm_general(const ZakArray& f, const IntMatrix& m) {
  const double n = static_cast<double>(std::abs(determinant(m)));
  return std::sqrt(f.values.squaredNorm() / (static_cast<double>(f.nodes.size() * f.values.cols()) * n));
}

std::vector<std::vector<double>> root_thetas(const IntMatrix& m, const std::vector<double>& theta_z) {
  const int d = static_cast<int>(m.rows());
  require_square_dim(m, static_cast<int>(theta_z.size()));
  const IntMatrix mt = m.transpose();
  const double det = static_cast<double>(determinant(mt));
  const Eigen::MatrixXd adj = adjugate(mt).cast<double>();
  std::vector<std::vector<double>> out;
  const ResidueSystem js(mt);
  for (const auto& j : js.representatives()) {
    Eigen::VectorXd rhs(d);
    for (int a = 0; a < d; ++a) rhs(a) = theta_z[a] + kTwoPi * static_cast<double>(j(a));
    const Eigen::VectorXd th = adj * rhs / det;
    out.emplace_back(th.data(), th.data() + d);
  }
  return out;
}

ZakArray zak_refine_mean(const ZakArray& f_m, const IntMatrix& m) {
  require_square_dim(m, f_m.dim);
  const long e = lattice_exponent(m);
  const long Q = f_m.quadrature;
  if (f_m.denominator != Q * e) throw GridIncompatible("array is not on the M-refined torus grid");
  const IntMatrix mt = m.transpose();
  const IntMatrix einv = scaled_inverse(mt, e);
  const ResidueSystem js(mt);
  ZakArray out{f_m.dim, f_m.resolution, Q, Q, {}, {}};
  for (const auto& q : box_indices(f_m.dim, 0, static_cast<int>(Q) - 1)) out.nodes.push_back(to_vector(q));
  out.values = Eigen::MatrixXcd::Zero(out.nodes.size(), f_m.values.cols());
  for (std::size_t i = 0; i < out.nodes.size(); ++i) {
    for (const auto& j : js.representatives()) {
      const long idx = f_m.find(einv * (out.nodes[i] + Q * j));
      if (idx < 0) throw GridIncompatible("root of z missing from the M-grid");
      out.values.row(i) += f_m.values.row(idx);
    }
    out.values.row(i) /= static_cast<double>(js.size());
  }
  return out;
}

Eigen::VectorXcd cell_shift(const Eigen::VectorXcd& data, int dim, int resolution,
                            const std::vector<double>& theta_z, const IntMatrix& m, const IntVector& p) {
  require_square_dim(m, dim);
  const IntVector s = scaled_inverse(m, resolution) * p;
  const auto grid = cell_grid(dim, resolution);
  if (static_cast<long>(grid.size()) != data.size()) throw ValidationError("cell data has wrong size");
  Eigen::VectorXcd out(data.size());
  IntVector b(dim);
  for (std::size_t a = 0; a < grid.size(); ++a) {
    double phase = 0.0;
    for (int i = 0; i < dim; ++i) {
      const long x = grid[a][i] + s(i);
      const long n = floor_div(x, resolution);
      b(i) = x - n * resolution;
      phase += theta_z[i] * static_cast<double>(n);
    }
    out(a) = std::polar(1.0, phase) * data(cell_flat(b, resolution));
  }
  return out;
}

Eigen::VectorXcd zak_embed(const ZakArray& f, const IntMatrix& m, const IntVector& r) {
  require_square_dim(m, f.dim);
  if (f.denominator != f.quadrature) throw GridIncompatible("embedding needs a plain Q-grid array");
  const long e = lattice_exponent(m);
  if (f.resolution % e != 0) throw GridIncompatible("cell resolution must be a multiple of the lattice exponent");
  const long R = f.quadrature * e;
  const IntVector mr = m.transpose() * r;
  IntVector q(f.dim);
  for (int i = 0; i < f.dim; ++i) {
    if (floor_mod(mr(i), e) != 0) throw GridIncompatible("w^M is not on the Q-grid");
    q(i) = floor_mod(mr(i) / e, f.quadrature);
  }
  const long idx = f.find(q);
  if (idx < 0) throw GridIncompatible("w^M is missing from the array");
  const std::vector<double> theta_z = f.theta(static_cast<std::size_t>(idx));
  const Eigen::VectorXcd row = f.values.row(idx).transpose();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(row.size());
  const ResidueSystem reps(m);
  for (const auto& p : reps.representatives())
    out += unit_phase(r, p, R, -1) * cell_shift(row, f.dim, f.resolution, theta_z, m, p);
  return out;
}

ZakArray zak_embed_all(const ZakArray& f, const IntMatrix& m) {
  require_square_dim(m, f.dim);
  const long e = lattice_exponent(m);
  ZakArray out{f.dim, f.resolution, f.quadrature, f.quadrature * e, general_nodes(m, f.quadrature), {}};
  out.values.resize(out.nodes.size(), f.values.cols());
  for (std::size_t i = 0; i < out.nodes.size(); ++i) out.values.row(i) = zak_embed(f, m, out.nodes[i]).transpose();
  return out;
}

Eigen::VectorXcd zak_project(const Eigen::VectorXcd& data, int dim, int resolution,
                             const std::vector<double>& theta_z, const IntMatrix& m,
                             const std::vector<double>& theta_w) {
  require_square_dim(m, dim);
  for (int k = 0; k < dim; ++k) {
    double s = -theta_z[k];
    for (int j = 0; j < dim; ++j) s += static_cast<double>(m(j, k)) * theta_w[j];
    const double turns = s / kTwoPi;
    if (std::abs(turns - std::round(turns)) > 1e-9) throw GridIncompatible("w^M differs from z");
  }
  const ResidueSystem reps(m);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(data.size());
  for (const auto& p : reps.representatives()) {
    double phase = 0.0;
    for (int i = 0; i < dim; ++i) phase -= theta_w[i] * static_cast<double>(p(i));
    out += std::polar(1.0, phase) * cell_shift(data, dim, resolution, theta_z, m, p);
  }
  return out / static_cast<double>(reps.size());
}

}  // namespace bloch
