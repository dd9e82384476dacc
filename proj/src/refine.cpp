#include "bloch/refine.hpp"

#include <algorithm>
#include <exception>

namespace bloch {
namespace {

void require_refinable(const OperatorSpec& spec) {
  if (!spec.pure_second_order()) throw NotPureSecondOrder("refinement needs a pure second-order operator");
  if (!spec.self_adjoint()) throw NotSelfAdjoint("refinement needs a self-adjoint operator");
}

void require_theta(const OperatorSpec& spec, const std::vector<double>& theta, int n) {
  if (static_cast<int>(theta.size()) != spec.dimension()) throw ValidationError("theta has wrong dimension");
  if (n < 1) throw ValidationError("refinement factor must be positive");
}

Eigen::VectorXd sorted(Eigen::VectorXd v) {
  std::sort(v.data(), v.data() + v.size());
  return v;
}

}  // namespace

RefinedSpectrum refined_spectrum(const OperatorSpec& spec, const std::vector<double>& theta, int n, int cutoff,
                                 int per_fiber, Exec exec) {
  require_refinable(spec);
  require_theta(spec, theta, n);
  const int d = spec.dimension();
  RefinedSpectrum out;
  out.n = n;
  out.theta = theta;
  for (const auto& j : box_indices(d, 0, n - 1)) {
    std::vector<double> w(d);
    for (int a = 0; a < d; ++a) w[a] = (theta[a] + kTwoPi * j[a]) / n;
    out.root_thetas.push_back(std::move(w));
  }
  const long roots = static_cast<long>(out.root_thetas.size());
  out.root_values.resize(roots);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
  for (long r = 0; r < roots; ++r) {
    try {
      const PlaneWaveBasis basis = PlaneWaveBasis::cube(d, cutoff, Quasimomentum{out.root_thetas[r]});
      Eigen::VectorXd vals = eig_hermitian(assemble(spec, basis)).values * (static_cast<double>(n) * n);
      if (per_fiber >= 0 && per_fiber < vals.size()) vals.conservativeResize(per_fiber);
      out.root_values[r] = std::move(vals);
    } catch (...) {
#pragma omp critical(bloch_refine_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  long total = 0;
  for (const auto& v : out.root_values) total += v.size();
  out.merged.resize(total);
  long at = 0;
  for (const auto& v : out.root_values) {
    out.merged.segment(at, v.size()) = v;
    at += v.size();
  }
  out.merged = sorted(out.merged);
  return out;
}

PlaneWaveBasis matched_basis(int dim, const std::vector<double>& theta, int n, int cutoff) {
  std::vector<MultiIndex> idx;
  for (const auto& j : box_indices(dim, 0, n - 1))
    for (const auto& m : box_indices(dim, -cutoff, cutoff)) {
      MultiIndex k(dim);
      for (int a = 0; a < dim; ++a) k[a] = j[a] + n * m[a];
      idx.push_back(std::move(k));
    }
  return PlaneWaveBasis(dim, std::move(idx), theta);
}

double refinement_check(const OperatorSpec& spec, const std::vector<double>& theta, int n, int cutoff, Exec exec) {
  require_refinable(spec);
  require_theta(spec, theta, n);
  const RefinedSpectrum rs = refined_spectrum(spec, theta, n, cutoff, -1, exec);
  const FiberMatrix direct = assemble(rescale(spec, n), matched_basis(spec.dimension(), theta, n, cutoff));
  const Eigen::VectorXd values = eig_hermitian(direct).values;
  return (values - rs.merged).cwiseAbs().maxCoeff();
}

std::vector<RefinementLimitRow> refinement_limit(const OperatorSpec& spec, const std::vector<double>& theta,
                                                 const std::vector<int>& n_list, int n_show, int cutoff,
                                                 Exec exec) {
  require_refinable(spec);
  if (n_show < 1) throw ValidationError("n_show must be positive");
  const int d = spec.dimension();
  const HomogenizedOperator h = homogenize(spec, cutoff);
  // A cube of side 2 n_show + 1 contains the n_show smallest frequencies.
  const PlaneWaveBasis wide = PlaneWaveBasis::cube(d, n_show, Quasimomentum{theta});
  Eigen::VectorXd hom = assemble_homogenized(h, wide).entries.diagonal().real();
  hom = sorted(hom).head(n_show);

  std::vector<RefinementLimitRow> rows;
  for (int n : n_list) {
    require_theta(spec, theta, n);
    const RefinedSpectrum rs = refined_spectrum(spec, theta, n, cutoff, n_show, exec);
    if (rs.merged.size() < n_show) throw ValidationError("cutoff too small for n_show values");
    RefinementLimitRow row{n, 0.0, rs.merged.head(n_show), hom};
    row.deviation = (row.refined - row.homogenized).cwiseAbs().maxCoeff();
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace bloch
