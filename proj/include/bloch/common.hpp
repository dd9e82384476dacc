#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bloch {

using cplx = std::complex<double>;
using MultiIndex = std::vector<int>;
using IntMatrix = Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<long, Eigen::Dynamic, 1>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Every failure raised by the library derives from Error; the kind string is
// what the CLI prints and what tests match on.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define BLOCH_DEFINE_ERROR(Name)                                          \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& what) : Error(#Name, what) {}        \
  }

BLOCH_DEFINE_ERROR(ValidationError);
BLOCH_DEFINE_ERROR(NotElliptic);
BLOCH_DEFINE_ERROR(SelfAdjointViolation);
BLOCH_DEFINE_ERROR(SingularMatrix);
BLOCH_DEFINE_ERROR(NotHermitian);
BLOCH_DEFINE_ERROR(ConvergenceFailure);
BLOCH_DEFINE_ERROR(NonpositiveTime);
BLOCH_DEFINE_ERROR(TruncationMismatch);
BLOCH_DEFINE_ERROR(AliasingWindow);
BLOCH_DEFINE_ERROR(GridIncompatible);
BLOCH_DEFINE_ERROR(SingularCellProblem);
BLOCH_DEFINE_ERROR(NotPureSecondOrder);
BLOCH_DEFINE_ERROR(NotSelfAdjoint);
BLOCH_DEFINE_ERROR(InvariantViolation);

#undef BLOCH_DEFINE_ERROR

// Kernels that loop over independent fibers take an Exec argument. Serial
// runs the identical loop body on one thread and is kept as the reference
// the parallel path is checked against.
enum class Exec { Serial, Parallel };

void set_thread_count(int threads);
int thread_count();

// Enumerate all multi-indices of the box [lo, hi]^d in lexicographic order
// (first component most significant).
std::vector<MultiIndex> box_indices(int dim, int lo, int hi);

}  // namespace bloch
