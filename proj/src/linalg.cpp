#include "bvgf/linalg.hpp"

namespace bvgf {

MatQ MatQ::identity(int n) {
  MatQ m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

MatQ MatQ::transpose() const {
  MatQ t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
  return t;
}

MatQ MatQ::operator*(const MatQ& o) const {
  if (cols_ != o.rows_) throw Error("E_SHAPE", "matrix product shape mismatch");
  MatQ m(rows_, o.cols_);
  for (int r = 0; r < rows_; ++r)
    for (int k = 0; k < cols_; ++k) {
      const Rat& v = at(r, k);
      if (v == 0) continue;
      for (int c = 0; c < o.cols_; ++c) {
        const Rat& w = o.at(k, c);
        if (w != 0) m.at(r, c) += v * w;
      }
    }
  return m;
}

MatQ MatQ::operator+(const MatQ& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw Error("E_SHAPE", "matrix sum shape mismatch");
  MatQ m(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] + o.a_[i];
  return m;
}

MatQ MatQ::operator-(const MatQ& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw Error("E_SHAPE", "matrix difference shape mismatch");
  MatQ m(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] - o.a_[i];
  return m;
}

MatQ MatQ::scaled(const Rat& c) const {
  MatQ m(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] * c;
  return m;
}

bool MatQ::is_zero() const {
  for (const auto& v : a_)
    if (v != 0) return false;
  return true;
}

std::vector<Rat> MatQ::apply(const std::vector<Rat>& v) const {
  if (static_cast<int>(v.size()) != cols_)
    throw Error("E_SHAPE", "matrix apply shape mismatch");
  std::vector<Rat> out(rows_);
  for (int r = 0; r < rows_; ++r) {
    Rat s(0);
    for (int c = 0; c < cols_; ++c)
      if (at(r, c) != 0 && v[c] != 0) s += at(r, c) * v[c];
    out[r] = s;
  }
  return out;
}

namespace {

MatQ invert_spd(const MatQ& G) {
  // Gauss-Jordan; G is a Gram matrix of independent vectors, so invertible.
  int n = G.rows();
  MatQ a = G;
  MatQ inv = MatQ::identity(n);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (a.at(r, col) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw Error("E_RANK", "singular matrix has no inverse");
    if (piv != col)
      for (int c = 0; c < n; ++c) {
        std::swap(a.at(piv, c), a.at(col, c));
        std::swap(inv.at(piv, c), inv.at(col, c));
      }
    Rat d = a.at(col, col);
    for (int c = 0; c < n; ++c) {
      a.at(col, c) /= d;
      inv.at(col, c) /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || a.at(r, col) == 0) continue;
      Rat f = a.at(r, col);
      for (int c = 0; c < n; ++c) {
        a.at(r, c) -= f * a.at(col, c);
        inv.at(r, c) -= f * inv.at(col, c);
      }
    }
  }
  return inv;
}

}  // namespace

LinearSolver::LinearSolver(const MatQ& A) : n_(A.cols()), R_(A) {
  int m = A.rows();
  E_ = MatQ::identity(m);
  int row = 0;
  for (int col = 0; col < n_ && row < m; ++col) {
    int piv = -1;
    for (int r = row; r < m; ++r)
      if (R_.at(r, col) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != row)
      for (int c = 0; c < n_; ++c) std::swap(R_.at(piv, c), R_.at(row, c));
    if (piv != row)
      for (int c = 0; c < m; ++c) std::swap(E_.at(piv, c), E_.at(row, c));
    Rat d = R_.at(row, col);
    for (int c = 0; c < n_; ++c) R_.at(row, c) /= d;
    for (int c = 0; c < m; ++c) E_.at(row, c) /= d;
    for (int r = 0; r < m; ++r) {
      if (r == row || R_.at(r, col) == 0) continue;
      Rat f = R_.at(r, col);
      for (int c = 0; c < n_; ++c) R_.at(r, c) -= f * R_.at(row, c);
      for (int c = 0; c < m; ++c) E_.at(r, c) -= f * E_.at(row, c);
    }
    pivots_.push_back(col);
    ++row;
  }
  // nullspace basis from free columns
  std::vector<bool> is_pivot(n_, false);
  for (int p : pivots_) is_pivot[p] = true;
  for (int col = 0; col < n_; ++col) {
    if (is_pivot[col]) continue;
    std::vector<Rat> v(n_);
    v[col] = 1;
    for (size_t r = 0; r < pivots_.size(); ++r)
      v[pivots_[r]] = -R_.at(static_cast<int>(r), col);
    null_.push_back(std::move(v));
  }
  if (!null_.empty()) {
    int k = static_cast<int>(null_.size());
    MatQ N(n_, k);
    for (int c = 0; c < k; ++c)
      for (int r = 0; r < n_; ++r) N.at(r, c) = null_[c][r];
    MatQ G = N.transpose() * N;
    proj_ = N * invert_spd(G) * N.transpose();
  }
}

std::optional<std::vector<Rat>> LinearSolver::solve(
    const std::vector<Rat>& b) const {
  std::vector<Rat> eb = E_.apply(b);
  for (size_t r = pivots_.size(); r < eb.size(); ++r)
    if (eb[r] != 0) return std::nullopt;
  std::vector<Rat> x(n_);
  for (size_t r = 0; r < pivots_.size(); ++r) x[pivots_[r]] = eb[r];
  return x;
}

std::optional<std::vector<Rat>> LinearSolver::solve_least_norm(
    const std::vector<Rat>& b) const {
  auto x = solve(b);
  if (!x) return std::nullopt;
  if (null_.empty()) return x;
  std::vector<Rat> px = proj_.apply(*x);
  for (int i = 0; i < n_; ++i) (*x)[i] -= px[i];
  return x;
}

int rank_of(const MatQ& A) { return LinearSolver(A).rank(); }

MatQ inverse_of(const MatQ& A) {
  if (A.rows() != A.cols()) throw Error("E_SHAPE", "inverse of non-square");
  return invert_spd(A);
}

std::vector<std::vector<Rat>> row_space_basis(const MatQ& A) {
  std::vector<std::vector<Rat>> basis;
  MatQ R = A;
  int m = A.rows(), n = A.cols();
  int row = 0;
  for (int col = 0; col < n && row < m; ++col) {
    int piv = -1;
    for (int r = row; r < m; ++r)
      if (R.at(r, col) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    for (int c = 0; c < n; ++c) std::swap(R.at(piv, c), R.at(row, c));
    Rat d = R.at(row, col);
    for (int c = 0; c < n; ++c) R.at(row, c) /= d;
    for (int r = 0; r < m; ++r) {
      if (r == row || R.at(r, col) == 0) continue;
      Rat f = R.at(r, col);
      for (int c = 0; c < n; ++c) R.at(r, c) -= f * R.at(row, c);
    }
    ++row;
  }
  for (int r = 0; r < row; ++r) {
    std::vector<Rat> v(n);
    for (int c = 0; c < n; ++c) v[c] = R.at(r, c);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<std::vector<Rat>> complement_in(
    const std::vector<std::vector<Rat>>& sub,
    const std::vector<std::vector<Rat>>& ambient) {
  if (ambient.empty()) return {};
  int n = static_cast<int>(ambient[0].size());
  // rows of ambient orthogonal (Euclidean) to every row of sub
  MatQ S(static_cast<int>(sub.size()), n);
  for (size_t r = 0; r < sub.size(); ++r)
    for (int c = 0; c < n; ++c) S.at(static_cast<int>(r), c) = sub[r][c];
  std::vector<std::vector<Rat>> out;
  // solve S * (x) = 0 restricted to span(ambient): write x = sum c_i a_i
  MatQ Amb(static_cast<int>(ambient.size()), n);
  for (size_t r = 0; r < ambient.size(); ++r)
    for (int c = 0; c < n; ++c) Amb.at(static_cast<int>(r), c) = ambient[r][c];
  MatQ M = S * Amb.transpose();  // sub.size() x ambient.size()
  LinearSolver solver(M);
  for (const auto& coef : solver.nullspace()) {
    std::vector<Rat> v(n);
    for (size_t i = 0; i < ambient.size(); ++i)
      if (coef[i] != 0)
        for (int c = 0; c < n; ++c) v[c] += coef[i] * ambient[i][c];
    out.push_back(std::move(v));
  }
  return out;
}

bool contains_vector(const std::vector<std::vector<Rat>>& basis,
                     const std::vector<Rat>& v) {
  if (basis.empty()) {
    for (const auto& x : v)
      if (x != 0) return false;
    return true;
  }
  int n = static_cast<int>(v.size());
  MatQ B(static_cast<int>(basis.size()), n);
  for (size_t r = 0; r < basis.size(); ++r)
    for (int c = 0; c < n; ++c) B.at(static_cast<int>(r), c) = basis[r][c];
  return LinearSolver(B.transpose()).solve(v).has_value();
}

}  // namespace bvgf
