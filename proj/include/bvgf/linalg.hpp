#pragma once

#include <optional>
#include <vector>

#include "bvgf/rational.hpp"

namespace bvgf {

// Dense matrix over exact rationals. Desk-scale sizes only.
class MatQ {
 public:
  MatQ() = default;
  MatQ(int rows, int cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static MatQ identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rat& at(int r, int c) { return a_[r * cols_ + c]; }
  const Rat& at(int r, int c) const { return a_[r * cols_ + c]; }

  MatQ transpose() const;
  MatQ operator*(const MatQ& o) const;
  MatQ operator+(const MatQ& o) const;
  MatQ operator-(const MatQ& o) const;
  MatQ scaled(const Rat& c) const;
  bool operator==(const MatQ& o) const = default;
  bool is_zero() const;

  std::vector<Rat> apply(const std::vector<Rat>& v) const;  // this * v

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Rat> a_;
};

// Row-reduced echelon data for A, reusable across right-hand sides.
// E * A = R with R in RREF; pivots identify the solved variables.
class LinearSolver {
 public:
  explicit LinearSolver(const MatQ& A);

  int rank() const { return static_cast<int>(pivots_.size()); }
  const std::vector<int>& pivots() const { return pivots_; }

  // Particular solution of A x = b, or nullopt if inconsistent.
  std::optional<std::vector<Rat>> solve(const std::vector<Rat>& b) const;
  // Euclidean-least-norm solution (deterministic), or nullopt.
  std::optional<std::vector<Rat>> solve_least_norm(
      const std::vector<Rat>& b) const;

  const std::vector<std::vector<Rat>>& nullspace() const { return null_; }

 private:
  int n_ = 0;                       // number of unknowns
  MatQ R_;                          // rref of A
  MatQ E_;                          // row operations, E A = R
  std::vector<int> pivots_;         // pivot column per pivot row
  std::vector<std::vector<Rat>> null_;
  // least-norm correction: x - N G^{-1} N^T x with G = N^T N
  MatQ proj_;                       // N G^{-1} N^T (n x n), empty if null_ empty
};

int rank_of(const MatQ& A);

// Inverse of a square invertible matrix; throws E_RANK when singular.
MatQ inverse_of(const MatQ& A);

// Basis of the column space improved to RREF rows: returns a basis of the
// row space of A as vectors (used for subspace work on row-vectors).
std::vector<std::vector<Rat>> row_space_basis(const MatQ& A);

// Euclidean-orthogonal complement of the row space of A inside the row
// space of B (B rows spanning the ambient). Rows are vectors in Q^n.
std::vector<std::vector<Rat>> complement_in(
    const std::vector<std::vector<Rat>>& sub,
    const std::vector<std::vector<Rat>>& ambient);

bool contains_vector(const std::vector<std::vector<Rat>>& basis,
                     const std::vector<Rat>& v);

}  // namespace bvgf
