#include "bloch/lattice.hpp"

#include <numeric>
#include <utility>

namespace bloch {
namespace {

struct Egcd {
  long g, x, y;  // x*a + y*b == g
};

Egcd egcd(long a, long b) {
  long old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const long q = old_r / r;
    old_r = std::exchange(r, old_r - q * r);
    old_s = std::exchange(s, old_s - q * s);
    old_t = std::exchange(t, old_t - q * t);
  }
  return {old_r, old_s, old_t};
}

void require_square(const IntMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw ValidationError("lattice matrix must be square and non-empty");
}

}  // namespace

IntMatrix scaled_identity(int dim, long factor) {
  return IntMatrix::Identity(dim, dim) * factor;
}

long determinant(const IntMatrix& m) {
  require_square(m);
  IntMatrix a = m;
  const long n = a.rows();
  long sign = 1;
  long prev = 1;
  for (long k = 0; k < n - 1; ++k) {
    if (a(k, k) == 0) {
      long swap = -1;
      for (long r = k + 1; r < n; ++r)
        if (a(r, k) != 0) {
          swap = r;
          break;
        }
      if (swap < 0) return 0;
      a.row(k).swap(a.row(swap));
      sign = -sign;
    }
    for (long i = k + 1; i < n; ++i)
      for (long j = k + 1; j < n; ++j)
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

IntMatrix adjugate(const IntMatrix& m) {
  require_square(m);
  const long n = m.rows();
  IntMatrix adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      IntMatrix minor(n - 1, n - 1);
      for (long r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (long c = 0, cc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      const long cof = ((i + j) % 2 == 0 ? 1 : -1) * determinant(minor);
      adj(j, i) = cof;
    }
  }
  return adj;
}

IntMatrix hermite_normal_form(const IntMatrix& m) {
  require_square(m);
  if (determinant(m) == 0) throw SingularMatrix("lattice matrix has zero determinant");
  IntMatrix h = m;
  const long n = h.rows();
  for (long i = 0; i < n; ++i) {
    for (long j = i + 1; j < n; ++j) {
      if (h(i, j) == 0) continue;
      const long a = h(i, i), b = h(i, j);
      const Egcd e = egcd(a, b);
      const IntVector ci = h.col(i), cj = h.col(j);
      h.col(i) = e.x * ci + e.y * cj;
      h.col(j) = (-b / e.g) * ci + (a / e.g) * cj;
    }
    if (h(i, i) < 0) h.col(i) = -h.col(i);
    for (long j = 0; j < i; ++j) {
      const long q = floor_div(h(i, j), h(i, i));
      h.col(j) -= q * h.col(i);
    }
  }
  return h;
}

long lattice_exponent(const IntMatrix& m) {
  const long det = std::abs(determinant(m));
  if (det == 0) throw SingularMatrix("lattice matrix has zero determinant");
  const IntMatrix adj = adjugate(m);
  long g = 0;
  for (long i = 0; i < adj.size(); ++i) g = std::gcd(g, std::abs(adj.data()[i]));
  return det / std::gcd(det, g);
}

bool congruent(const IntVector& x, const IntVector& y, const IntMatrix& m) {
  const long det = determinant(m);
  if (det == 0) throw SingularMatrix("lattice matrix has zero determinant");
  const IntVector v = adjugate(m) * (x - y);
  for (long i = 0; i < v.size(); ++i)
    if (v(i) % det != 0) return false;
  return true;
}

ResidueSystem::ResidueSystem(const IntMatrix& m) : m_(m), h_(hermite_normal_form(m)) {
  const long n = h_.rows();
  IntVector x = IntVector::Zero(n);
  while (true) {
    reps_.push_back(x);
    long axis = n - 1;
    while (axis >= 0 && x(axis) == h_(axis, axis) - 1) {
      x(axis) = 0;
      --axis;
    }
    if (axis < 0) break;
    ++x(axis);
  }
}

IntVector ResidueSystem::reduce(const IntVector& x) const {
  IntVector r = x;
  for (long i = 0; i < h_.rows(); ++i) {
    const long q = floor_div(r(i), h_(i, i));
    r -= q * h_.col(i);
  }
  return r;
}

long ResidueSystem::index_of(const IntVector& x) const {
  const IntVector r = reduce(x);
  long idx = 0;
  for (long i = 0; i < h_.rows(); ++i) idx = idx * h_(i, i) + r(i);
  return idx;
}

}  // namespace bloch
