#pragma once

#include <vector>

#include "bloch/common.hpp"

// Integer-lattice arithmetic for the quotient Z^d / M Z^d.
namespace bloch {

IntMatrix scaled_identity(int dim, long factor);

// Exact integer determinant (fraction-free Bareiss elimination).
long determinant(const IntMatrix& m);
IntMatrix adjugate(const IntMatrix& m);

// Lower-triangular Hermite normal form H = M U (U unimodular) with positive
// diagonal and 0 <= H(i,j) < H(i,i) for j < i. Raises SingularMatrix.
IntMatrix hermite_normal_form(const IntMatrix& m);

// Smallest e > 0 such that e * M^{-1} is an integer matrix.
long lattice_exponent(const IntMatrix& m);

// x == y mod M Z^d, i.e. M^{-1}(x - y) is integral.
bool congruent(const IntVector& x, const IntVector& y, const IntMatrix& m);

// Floor division / modulus with a positive divisor.
inline long floor_div(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
inline long floor_mod(long a, long b) { return a - b * floor_div(a, b); }

/// One representative per class of Z^d / M Z^d, taken from the box
/// 0 <= x_i < H(i,i) of the Hermite normal form H of M.
class ResidueSystem {
 public:
  explicit ResidueSystem(const IntMatrix& m);

  const IntMatrix& matrix() const { return m_; }
  const IntMatrix& hnf() const { return h_; }
  long size() const { return static_cast<long>(reps_.size()); }  // |det M|
  const std::vector<IntVector>& representatives() const { return reps_; }
  const IntVector& operator[](long i) const { return reps_[i]; }

  // Box representative congruent to x.
  IntVector reduce(const IntVector& x) const;
  // Position of reduce(x) in representatives().
  long index_of(const IntVector& x) const;

 private:
  IntMatrix m_;
  IntMatrix h_;
  std::vector<IntVector> reps_;
};

inline ResidueSystem residues(const IntMatrix& m) { return ResidueSystem(m); }

}  // namespace bloch
