#include "bloch/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace bloch {
namespace {

void require_positive_time(double t) {
  if (!(t > 0.0)) throw NonpositiveTime("semigroup time must be positive, got " + std::to_string(t));
}

// Runs body(i) for i in [0, n), rethrowing the first exception after the loop.
template <class Body>
void parallel_for(long n, Exec exec, Body body) {
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
  for (long i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(bloch_semigroup_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

Eigen::MatrixXcd heat_matrix(const OperatorSpec& spec, const PlaneWaveBasis& basis, double t) {
  const FiberMatrix fm = assemble(spec, basis);
  if (fm.hermitian) return heat_fiber(eig_hermitian(fm), t).matrix;
  return heat_fiber_general(fm, t).matrix;
}

bool within_roundoff(double lhs, double rhs) {
  return rhs - lhs >= -kInequalityRoundoff * (1.0 + std::abs(rhs));
}

}  // namespace

FiberSemigroup heat_fiber(const EigenSystem& es, double t) {
  require_positive_time(t);
  FiberSemigroup s{t, {}, (-t * es.values.array()).exp().matrix()};
  s.matrix = es.vectors * s.weights.asDiagonal() * es.vectors.adjoint();
  return s;
}

FiberSemigroup heat_fiber_general(const FiberMatrix& a, double t) {
  require_positive_time(t);
  const Eigen::MatrixXcd scaled = -t * a.entries;
  return {t, scaled.exp(), {}};
}

double trace_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues().sum();
}

double hs_norm(const Eigen::MatrixXcd& m) { return m.norm(); }

double operator_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

TraceHsReport check_trace_hs_inequalities(const Eigen::MatrixXcd& s_t, const Eigen::MatrixXcd& s_half,
                                          const Eigen::MatrixXcd& t_t, const Eigen::MatrixXcd& t_half) {
  if (s_t.rows() != t_t.rows() || s_half.rows() != t_half.rows() || s_t.rows() != s_half.rows())
    throw TruncationMismatch("semigroups live on different truncations");
  TraceHsReport r;
  const double hs_s = hs_norm(s_half), hs_t = hs_norm(t_half);
  r.square_s = {trace_norm(s_t), hs_s * hs_s};
  r.square_t = {trace_norm(t_t), hs_t * hs_t};
  r.difference = {trace_norm(s_t - t_t), (hs_s + hs_t) * hs_norm(s_half - t_half)};
  if (!r.holds())
    throw InvariantViolation("trace/Hilbert-Schmidt inequality violated (slacks " +
                             std::to_string(r.square_s.slack()) + ", " + std::to_string(r.square_t.slack()) +
                             ", " + std::to_string(r.difference.slack()) + ")");
  return r;
}

Eigen::MatrixXd cell_points(int dim, int resolution) {
  if (resolution < 1) throw ValidationError("cell resolution must be positive");
  const auto grid = box_indices(dim, 0, resolution - 1);
  Eigen::MatrixXd pts(grid.size(), dim);
  for (std::size_t p = 0; p < grid.size(); ++p)
    for (int a = 0; a < dim; ++a) pts(p, a) = static_cast<double>(grid[p][a]) / resolution;
  return pts;
}

KernelGrid kernel_fiber(const EigenSystem& es, const PlaneWaveBasis& basis, double t, int resolution) {
  if (es.size() != basis.size()) throw TruncationMismatch("eigensystem and basis sizes differ");
  const Eigen::MatrixXd pts = cell_points(basis.dimension(), resolution);
  const Eigen::MatrixXcd phi = basis.evaluate(pts);
  const FiberSemigroup s = heat_fiber(es, t);
  return {pts, pts, phi * s.matrix * phi.adjoint()};
}

LineKernel::LineKernel(const OperatorSpec& spec, double t, int quadrature, int cutoff, Exec exec)
    : dim_(spec.dimension()), t_(t), q_(quadrature) {
  require_positive_time(t);
  if (quadrature < 1) throw ValidationError("quadrature must be positive");
  const auto nodes = box_indices(dim_, 0, quadrature - 1);
  for (const auto& q : nodes) {
    std::vector<double> theta(dim_);
    for (int a = 0; a < dim_; ++a) theta[a] = kTwoPi * q[a] / quadrature;
    bases_.push_back(PlaneWaveBasis::cube(dim_, cutoff, Quasimomentum::canonical(theta)));
  }
  heat_.resize(nodes.size());
  parallel_for(static_cast<long>(nodes.size()), exec,
               [&](long i) { heat_[i] = heat_matrix(spec, bases_[i], t); });
}

KernelGrid LineKernel::evaluate(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, Exec exec) const {
  if (x.cols() != dim_ || y.cols() != dim_) throw ValidationError("kernel points have wrong dimension");
  KernelGrid out{x, y, Eigen::MatrixXcd::Zero(x.rows(), y.rows())};
  constexpr long kBlock = 16;
  const long blocks = (x.rows() + kBlock - 1) / kBlock;
  const double norm = std::pow(static_cast<double>(q_), -dim_);
  // Row blocks are independent and each sums the nodes in fixed order.
  parallel_for(blocks, exec, [&](long b) {
    const long r0 = b * kBlock, rows = std::min<long>(kBlock, x.rows() - r0);
    const Eigen::MatrixXd xb = x.middleRows(r0, rows);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rows, y.rows());
    for (std::size_t q = 0; q < bases_.size(); ++q)
      acc.noalias() += bases_[q].evaluate(xb) * (heat_[q] * bases_[q].evaluate(y).adjoint());
    out.values.middleRows(r0, rows) = acc * norm;
  });
  return out;
}

cplx LineKernel::operator()(std::span<const double> x, std::span<const double> y) const {
  Eigen::MatrixXd xm(1, dim_), ym(1, dim_);
  for (int a = 0; a < dim_; ++a) {
    xm(0, a) = x[a];
    ym(0, a) = y[a];
  }
  return evaluate(xm, ym, Exec::Serial).values(0, 0);
}

KernelGrid kernel_line(const OperatorSpec& spec, double t, int window, int quadrature, int resolution,
                       int cutoff, Exec exec) {
  require_positive_time(t);
  if (window < 0) throw ValidationError("window must be non-negative");
  if (quadrature <= 2 * window)
    throw AliasingWindow("quadrature " + std::to_string(quadrature) + " must exceed twice the window " +
                         std::to_string(window));
  const int d = spec.dimension();
  const Eigen::MatrixXd cell = cell_points(d, resolution);
  const auto nodes = box_indices(d, 0, quadrature - 1);
  const auto shifts = box_indices(d, -window, window);
  const long np = cell.rows();

  std::vector<Eigen::MatrixXcd> fiber(nodes.size());
  std::vector<std::vector<double>> thetas(nodes.size());
  parallel_for(static_cast<long>(nodes.size()), exec, [&](long i) {
    std::vector<double> theta(d);
    for (int a = 0; a < d; ++a) theta[a] = kTwoPi * nodes[i][a] / quadrature;
    const PlaneWaveBasis basis = PlaneWaveBasis::cube(d, cutoff, Quasimomentum::canonical(theta));
    const Eigen::MatrixXcd phi = basis.evaluate(cell);
    fiber[i] = phi * heat_matrix(spec, basis, t) * phi.adjoint();
    thetas[i] = basis.theta();
  });

  KernelGrid out{Eigen::MatrixXd(shifts.size() * np, d), cell,
                 Eigen::MatrixXcd::Zero(shifts.size() * np, np)};
  const double norm = std::pow(static_cast<double>(quadrature), -d);
  parallel_for(static_cast<long>(shifts.size()), exec, [&](long s) {
    const MultiIndex& n = shifts[s];
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(np, np);
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      double phase = 0.0;
      for (int a = 0; a < d; ++a) phase += thetas[q][a] * n[a];
      acc += std::polar(1.0, -phase) * fiber[q];
    }
    out.values.middleRows(s * np, np) = acc * norm;
    for (long p = 0; p < np; ++p)
      for (int a = 0; a < d; ++a) out.x(s * np + p, a) = cell(p, a) - n[a];
  });
  return out;
}

double gaussian_bound_fit(const KernelGrid& kernel, double t, double b) {
  require_positive_time(t);
  const int d = static_cast<int>(kernel.x.cols());
  double a = 0.0;
  for (Eigen::Index r = 0; r < kernel.x.rows(); ++r)
    for (Eigen::Index c = 0; c < kernel.y.rows(); ++c) {
      const double r2 = (kernel.x.row(r) - kernel.y.row(c)).squaredNorm();
      a = std::max(a, std::abs(kernel.values(r, c)) * std::pow(t, 0.5 * d) * std::exp(b * r2 / t));
    }
  return a;
}

double scaling_check(const OperatorSpec& spec, int m, double t, int quadrature, int cutoff,
                     const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, Exec exec) {
  if (!spec.pure_second_order()) throw NotPureSecondOrder("scaling identity needs a pure second-order operator");
  if (m < 1) throw ValidationError("scale factor must be positive");
  const int d = spec.dimension();
  const KernelGrid lhs = LineKernel(spec, t, quadrature, cutoff, exec).evaluate(x, y, exec);
  const double tm = t / (static_cast<double>(m) * m);
  const KernelGrid rhs =
      LineKernel(rescale(spec, m), tm, quadrature, cutoff, exec).evaluate(x / m, y / m, exec);
  return (lhs.values - std::pow(static_cast<double>(m), -d) * rhs.values).cwiseAbs().maxCoeff();
}

HomogConvergenceRow semigroup_distance(const FiberMatrix& a, const FiberMatrix& b, double t) {
  if (!a.basis.same_space(b.basis)) throw TruncationMismatch("fibers are assembled on different bases");
  const EigenSystem ea = eig_hermitian(a), eb = eig_hermitian(b);
  const FiberSemigroup sa = heat_fiber(ea, t), sb = heat_fiber(eb, t);
  const Eigen::MatrixXcd diff = sa.matrix - sb.matrix;
  HomogConvergenceRow row{};
  row.trace_distance = trace_norm(diff);
  row.hs_distance = hs_norm(diff);
  row.eigen_sum = (sa.weights - sb.weights).cwiseAbs().sum();
  return row;
}

std::vector<HomogConvergenceRow> homog_convergence(const OperatorSpec& spec, const Quasimomentum& z, double t,
                                                   const std::vector<int>& m_list, int cutoff, Exec exec) {
  require_positive_time(t);
  const HomogenizedOperator h = homogenize(spec, cutoff);
  std::vector<HomogConvergenceRow> rows(m_list.size());
  parallel_for(static_cast<long>(m_list.size()), exec, [&](long i) {
    const OperatorSpec scaled = rescale(spec, m_list[i]);
    HomogConvergenceRow row =
        semigroup_distance(assemble(scaled, z, cutoff), assemble_homogenized(h, z, cutoff), t);
    const HomogConvergenceRow wider =
        semigroup_distance(assemble(scaled, z, cutoff + 4), assemble_homogenized(h, z, cutoff + 4), t);
    row.m = m_list[i];
    row.cutoff_change = std::abs(wider.trace_distance - row.trace_distance);
    if (!within_roundoff(row.eigen_sum, row.trace_distance))
      throw InvariantViolation("eigenvalue sum exceeds trace-norm distance at m = " + std::to_string(row.m));
    rows[i] = row;
  });
  return rows;
}

std::vector<KernelConvergenceRow> kernel_convergence(const OperatorSpec& spec, double v,
                                                     const std::vector<std::pair<int, double>>& schedule,
                                                     const KernelConvergenceOptions& opts, Exec exec) {
  if (spec.dimension() != 1) throw ValidationError("kernel convergence is implemented for d = 1");
  if (!spec.pure_second_order()) throw NotPureSecondOrder("kernel convergence needs a pure second-order operator");
  if (!(v > 0.0)) throw ValidationError("disc parameter v must be positive");
  const OperatorSpec hom = homogenized_spec(homogenize(spec, opts.cutoff));
  const double cmax = spec.principal(0, 0).sup_norm_sampled(kDefaultSampleResolution);

  std::vector<KernelConvergenceRow> rows;
  for (const auto& [m, t] : schedule) {
    require_positive_time(t);
    const double radius = std::sqrt(v * t);
    const double tail = opts.tail * std::sqrt(t * cmax);

    std::vector<double> xs, ys;
    const int ns = opts.disc_samples;
    for (int i = 0; i < ns; ++i)
      for (int j = 0; j < ns; ++j) {
        const double x = -radius + 2.0 * radius * i / (ns - 1);
        const double y = -radius + 2.0 * radius * j / (ns - 1);
        if (x * x + y * y <= radius * radius * (1 + 1e-12)) {
          xs.push_back(x);
          ys.push_back(y);
        }
      }
    const Eigen::MatrixXd disc_x = Eigen::Map<Eigen::VectorXd>(xs.data(), xs.size());
    const Eigen::MatrixXd disc_y = Eigen::Map<Eigen::VectorXd>(ys.data(), ys.size());

    Eigen::MatrixXd cell_x(opts.cell_samples, 1);
    for (int i = 0; i < opts.cell_samples; ++i) cell_x(i, 0) = static_cast<double>(i) / opts.cell_samples;
    const long ny = static_cast<long>(std::ceil((1.0 + 2.0 * tail) / opts.dy)) + 1;
    Eigen::MatrixXd line_y(ny, 1);
    for (long j = 0; j < ny; ++j) line_y(j, 0) = -tail + opts.dy * j;

    const double reach = std::max(2.0 * radius, 1.0 + tail);
    const int quadrature = static_cast<int>(std::ceil(reach + tail)) + 1;
    const int cutoff = opts.cutoff * m;
    const LineKernel km(rescale(spec, m), t, quadrature, cutoff, exec);
    const LineKernel kh(hom, t, quadrature, cutoff, exec);

    KernelConvergenceRow row{m, t, 0.0, 0.0};
    // Disc samples are pairs, so evaluate one column per pair.
    const KernelGrid dm = km.evaluate(disc_x, disc_y, exec), dh = kh.evaluate(disc_x, disc_y, exec);
    for (Eigen::Index i = 0; i < disc_x.rows(); ++i)
      row.sup_distance = std::max(row.sup_distance, std::abs(dm.values(i, i) - dh.values(i, i)));

    const KernelGrid lm = km.evaluate(cell_x, line_y, exec), lh = kh.evaluate(cell_x, line_y, exec);
    for (int i = 0; i < opts.cell_samples; ++i) {
      double acc = 0.0;
      for (long j = 0; j < ny; ++j) {
        if (std::abs(line_y(j, 0) - cell_x(i, 0)) > tail) continue;
        acc += std::abs(lm.values(i, j) - lh.values(i, j));
      }
      row.l1_distance = std::max(row.l1_distance, acc * opts.dy);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bloch
