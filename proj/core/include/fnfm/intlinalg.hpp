#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fnfm/word.hpp"

namespace fnfm {

/// Dense matrix of arbitrary-precision integers, row-major.
class IntMatrix {
 public:
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(int rows, int cols, std::vector<Int> entries);
  static IntMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Int& at(int r, int c) { return data_[r * cols_ + c]; }
  const Int& at(int r, int c) const { return data_[r * cols_ + c]; }

  IntMatrix operator*(const IntMatrix& rhs) const;
  IntMatrix pow(long long k) const;  // square matrices, k >= 0
  std::vector<Int> apply(std::span<const Int> v) const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  int rows_, cols_;
  std::vector<Int> data_;
};

/// Basis (possibly empty) of the integer kernel { x : Mx = 0 }.
std::vector<std::vector<Int>> kernel_basis(const IntMatrix& m);

struct DiophantineSolution {
  std::vector<Int> particular;
  std::vector<std::vector<Int>> kernel;
};

/// All integer solutions of Mx = b as particular + kernel lattice,
/// or nullopt when none exist.
std::optional<DiophantineSolution> solve_diophantine(const IntMatrix& m,
                                                     std::span<const Int> b);

/// Basis of the sublattice of points periodic under a 2x2 integer matrix,
/// i.e. the union of Ker(M^k - I) over all k >= 1.  Any finite-order
/// invertible rational 2x2 matrix has order dividing 12, so the union
/// collapses to Ker(M^12 - I).
std::vector<std::vector<Int>> periodic_lattice(const IntMatrix& m);

}  // namespace fnfm
