#include "fnfm/intlinalg.hpp"

#include <utility>

namespace fnfm {

IntMatrix::IntMatrix(int rows, int cols, std::vector<Int> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (static_cast<int>(data_.size()) != rows * cols)
    throw Error("matrix entry count does not match dimensions");
}

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw Error("matrix product dimension mismatch");
  IntMatrix out(rows_, rhs.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Int& a = at(i, k);
      if (a == 0) continue;
      for (int j = 0; j < rhs.cols_; ++j) out.at(i, j) += a * rhs.at(k, j);
    }
  return out;
}

IntMatrix IntMatrix::pow(long long k) const {
  if (rows_ != cols_) throw Error("matrix power needs a square matrix");
  if (k < 0) throw Error("negative matrix power");
  IntMatrix result = identity(rows_);
  IntMatrix base = *this;
  while (k) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return result;
}

std::vector<Int> IntMatrix::apply(std::span<const Int> v) const {
  if (static_cast<int>(v.size()) != cols_) throw Error("matrix apply dimension mismatch");
  std::vector<Int> out(rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out[i] += at(i, j) * v[j];
  return out;
}

namespace {

// Column echelon form by unimodular column operations: returns the pivot
// positions and transforms `a` in place, accumulating the operations in `u`
// so that (original a) * u == (echelon a).
std::vector<std::pair<int, int>> column_echelon(IntMatrix& a, IntMatrix& u) {
  const int rows = a.rows(), cols = a.cols();
  auto swap_cols = [&](int c1, int c2) {
    if (c1 == c2) return;
    for (int r = 0; r < rows; ++r) std::swap(a.at(r, c1), a.at(r, c2));
    for (int r = 0; r < cols; ++r) std::swap(u.at(r, c1), u.at(r, c2));
  };
  auto add_col = [&](int dst, int src, const Int& f) {
    for (int r = 0; r < rows; ++r) a.at(r, dst) += f * a.at(r, src);
    for (int r = 0; r < cols; ++r) u.at(r, dst) += f * u.at(r, src);
  };
  std::vector<std::pair<int, int>> pivots;
  int cur = 0;
  for (int row = 0; row < rows && cur < cols; ++row) {
    for (;;) {
      int best = -1;
      for (int j = cur; j < cols; ++j)
        if (a.at(row, j) != 0 && (best < 0 || abs(a.at(row, j)) < abs(a.at(row, best))))
          best = j;
      if (best < 0) break;
      swap_cols(cur, best);
      bool cleared = true;
      for (int j = cur + 1; j < cols; ++j) {
        if (a.at(row, j) == 0) continue;
        Int q = a.at(row, j) / a.at(row, cur);
        add_col(j, cur, -q);
        if (a.at(row, j) != 0) cleared = false;
      }
      if (cleared) {
        pivots.emplace_back(row, cur);
        ++cur;
        break;
      }
    }
  }
  return pivots;
}

}  // namespace

std::vector<std::vector<Int>> kernel_basis(const IntMatrix& m) {
  IntMatrix a = m;
  IntMatrix u = IntMatrix::identity(m.cols());
  auto pivots = column_echelon(a, u);
  std::vector<std::vector<Int>> basis;
  for (int j = static_cast<int>(pivots.size()); j < m.cols(); ++j) {
    std::vector<Int> v(m.cols());
    for (int r = 0; r < m.cols(); ++r) v[r] = u.at(r, j);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<DiophantineSolution> solve_diophantine(const IntMatrix& m,
                                                     std::span<const Int> b) {
  if (static_cast<int>(b.size()) != m.rows()) throw Error("rhs size mismatch");
  IntMatrix a = m;
  IntMatrix u = IntMatrix::identity(m.cols());
  auto pivots = column_echelon(a, u);
  std::vector<Int> res(b.begin(), b.end());
  std::vector<Int> y(m.cols());
  size_t k = 0;
  for (int row = 0; row < m.rows(); ++row) {
    if (k < pivots.size() && pivots[k].first == row) {
      int col = pivots[k].second;
      const Int& pivot = a.at(row, col);
      if (res[row] % pivot != 0) return std::nullopt;
      Int q = res[row] / pivot;
      if (q != 0)
        for (int r = row; r < m.rows(); ++r) res[r] -= q * a.at(r, col);
      y[col] = q;
      ++k;
    } else if (res[row] != 0) {
      return std::nullopt;
    }
  }
  DiophantineSolution sol;
  sol.particular.assign(m.cols(), 0);
  for (int r = 0; r < m.cols(); ++r)
    for (int c = 0; c < m.cols(); ++c) sol.particular[r] += u.at(r, c) * y[c];
  for (int j = static_cast<int>(pivots.size()); j < m.cols(); ++j) {
    std::vector<Int> v(m.cols());
    for (int r = 0; r < m.cols(); ++r) v[r] = u.at(r, j);
    sol.kernel.push_back(std::move(v));
  }
  return sol;
}

std::vector<std::vector<Int>> periodic_lattice(const IntMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw Error("periodic_lattice expects a 2x2 matrix");
  IntMatrix p = m.pow(12);
  p.at(0, 0) -= 1;
  p.at(1, 1) -= 1;
  return kernel_basis(p);
}

}  // namespace fnfm
