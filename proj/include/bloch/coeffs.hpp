#pragma once

#include <span>
#include <utility>
#include <vector>

#include "bloch/common.hpp"
#include "bloch/lattice.hpp"

namespace bloch {

/// A Z^d-periodic complex function on the unit cell, stored as a finite
/// Fourier series g(u) = sum_k amp[k] exp(i 2 pi k.u) over |k|_inf <= cutoff.
///
/// Amplitudes live in a dense box of side 2*cutoff+1, lexicographic order.
/// Fields are immutable once built.
class CoefficientField {
 public:
  using Term = std::pair<MultiIndex, cplx>;

  // Zero field.
  CoefficientField(int dim, int cutoff = 0);

  static CoefficientField constant(int dim, cplx value);
  // Terms with repeated indices accumulate. With real = true the conjugate
  // symmetry amp[-k] = conj(amp[k]) is checked to 1e-12 and enforced exactly.
  static CoefficientField from_terms(int dim, std::span<const Term> terms, bool real);
  static CoefficientField from_terms(int dim, std::initializer_list<Term> terms, bool real) {
    return from_terms(dim, std::span<const Term>(terms.begin(), terms.size()), real);
  }
  // Discrete Fourier projection of samples on the uniform grid u_p = p/resolution
  // (samples in lexicographic grid order). Requires resolution >= 2*cutoff+1.
  static CoefficientField from_samples(int dim, int cutoff, int resolution,
                                       std::span<const cplx> samples, bool real);

  int dimension() const { return dim_; }
  int cutoff() const { return cutoff_; }
  bool is_real() const { return real_; }
  bool is_zero() const;

  // Amplitude at k; zero outside the stored box.
  cplx operator[](std::span<const int> k) const;
  cplx operator[](const MultiIndex& k) const { return (*this)[std::span<const int>(k)]; }
  cplx mean() const;

  // Nonzero amplitudes in lexicographic index order.
  std::vector<Term> terms() const;

  cplx evaluate(std::span<const double> u) const;
  // Points are the rows of a (count x d) matrix.
  std::vector<cplx> evaluate(const Eigen::MatrixXd& points) const;
  // Values on the uniform grid p/resolution, lexicographic order.
  std::vector<cplx> sample_grid(int resolution) const;
  double sup_norm_sampled(int resolution) const;

  CoefficientField conjugated() const;          // conj(g)
  CoefficientField scaled(cplx factor) const;   // factor * g
  CoefficientField plus(const CoefficientField& other) const;
  // g(Mx): amplitude at M^T k equals the input amplitude at k.
  CoefficientField dilated(const IntMatrix& m) const;

  // Flat access into the dense box (used by assembly loops).
  int side() const { return 2 * cutoff_ + 1; }
  const std::vector<cplx>& dense() const { return amps_; }

 private:
  int dim_;
  int cutoff_;
  bool real_ = false;
  std::vector<cplx> amps_;

  long flat(std::span<const int> k) const;  // -1 when outside the box
};

/// The operator data (C, c, c', c0) of the sectorial form
///   h(f) = sum_ij (d_i f, c_ij d_j f) + sum_i ((conj(c_i) f, d_i f) + (d_i f, c'_i f)) + (f, c0 f).
class OperatorSpec {
 public:
  // principal is row-major d x d; first and first_prime have length d.
  OperatorSpec(int dim, std::vector<CoefficientField> principal,
               std::vector<CoefficientField> first,
               std::vector<CoefficientField> first_prime, CoefficientField zeroth,
               bool self_adjoint);

  // Pure second-order operator -sum d_i c_ij d_j.
  static OperatorSpec pure(int dim, std::vector<CoefficientField> principal, bool self_adjoint);
  // Isotropic principal part c(x) Id with no lower-order terms.
  static OperatorSpec isotropic(int dim, const CoefficientField& c, bool self_adjoint);

  int dimension() const { return dim_; }
  const CoefficientField& principal(int i, int j) const { return principal_[i * dim_ + j]; }
  const CoefficientField& first_order(int i) const { return first_[i]; }
  const CoefficientField& first_order_prime(int i) const { return first_prime_[i]; }
  const CoefficientField& zeroth() const { return zeroth_; }
  bool self_adjoint() const { return self_adjoint_; }
  bool pure_second_order() const { return pure_; }
  int max_cutoff() const;

  // Pointwise principal matrix C(u).
  Eigen::MatrixXcd principal_at(std::span<const double> u) const;

  // Applies f to every coefficient field.
  template <class F>
  OperatorSpec transformed(F&& f) const {
    std::vector<CoefficientField> p, c, cp;
    for (const auto& g : principal_) p.push_back(f(g));
    for (const auto& g : first_) c.push_back(f(g));
    for (const auto& g : first_prime_) cp.push_back(f(g));
    return OperatorSpec(dim_, std::move(p), std::move(c), std::move(cp), f(zeroth_),
                        self_adjoint_);
  }

 private:
  int dim_;
  std::vector<CoefficientField> principal_;
  std::vector<CoefficientField> first_;
  std::vector<CoefficientField> first_prime_;
  CoefficientField zeroth_;
  bool self_adjoint_;
  bool pure_;
};

struct EllipticityReport {
  double lambda_c;    // sampled ellipticity constant
  double class_norm;  // 1/lambda_c + sum of sampled sup-norms
};

inline constexpr int kDefaultSampleResolution = 64;

// Raises NotElliptic when the sampled min eigenvalue of Re C is <= 0 and
// SelfAdjointViolation when the self_adjoint flag is set but violated.
EllipticityReport validate(const OperatorSpec& spec, int grid_resolution = kDefaultSampleResolution);

// Coefficient-level Hermiticity relations: c_ji[m] = conj(c_ij[-m]),
// c'_i = conj(c_i) pointwise, c0 real. Returns the largest violation.
double self_adjoint_defect(const OperatorSpec& spec);
void check_self_adjoint(const OperatorSpec& spec, double tol = 1e-10);

// Raises SingularMatrix for det M == 0.
OperatorSpec rescale(const OperatorSpec& spec, const IntMatrix& m);
OperatorSpec rescale(const OperatorSpec& spec, int factor);

// Adds mu to c0 (explicit version of the Re H >= 0 normalization).
OperatorSpec shift_zeroth(const OperatorSpec& spec, double mu);

}  // namespace bloch
