#include "bvgf/linalg.hpp"

#include <random>

#include "doctest.h"

using namespace bvgf;

namespace {

MatQ random_mat(std::mt19937& rng, int r, int c) {
  std::uniform_int_distribution<int> d(-4, 4);
  MatQ m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.at(i, j) = Rat(d(rng), 1 + (d(rng) & 1));
  return m;
}

}  // namespace

TEST_CASE("solver: consistent and inconsistent systems") {
  MatQ A(2, 3);
  A.at(0, 0) = 1;
  A.at(0, 1) = 2;
  A.at(1, 2) = 1;
  LinearSolver s(A);
  CHECK(s.rank() == 2);
  auto x = s.solve({Rat(5), Rat(7)});
  REQUIRE(x.has_value());
  auto Ax = A.apply(*x);
  CHECK(Ax[0] == 5);
  CHECK(Ax[1] == 7);

  MatQ B(2, 2);
  B.at(0, 0) = 1;
  B.at(1, 0) = 2;  // second row dependent, rhs breaks it
  LinearSolver t(B);
  CHECK_FALSE(t.solve({Rat(1), Rat(3)}).has_value());
  CHECK(t.solve({Rat(1), Rat(2)}).has_value());
}

TEST_CASE("least-norm solution is orthogonal to the nullspace") {
  std::mt19937 rng(31);
  for (int it = 0; it < 25; ++it) {
    MatQ A = random_mat(rng, 4, 7);
    std::vector<Rat> xs(7);
    for (int i = 0; i < 7; ++i) xs[i] = Rat(i - 3, 2);
    auto b = A.apply(xs);
    LinearSolver s(A);
    auto x = s.solve_least_norm(b);
    REQUIRE(x.has_value());
    CHECK(A.apply(*x) == b);
    for (const auto& nv : s.nullspace()) {
      Rat dot(0);
      for (size_t i = 0; i < nv.size(); ++i) dot += nv[i] * (*x)[i];
      CHECK(dot == 0);
    }
  }
}

TEST_CASE("nullspace vectors solve A x = 0") {
  std::mt19937 rng(77);
  MatQ A = random_mat(rng, 3, 6);
  LinearSolver s(A);
  CHECK(static_cast<int>(s.nullspace().size()) == 6 - s.rank());
  for (const auto& v : s.nullspace()) {
    auto z = A.apply(v);
    for (const auto& c : z) CHECK(c == 0);
  }
}

TEST_CASE("row space and complements") {
  MatQ A(2, 4);
  A.at(0, 0) = 2;
  A.at(1, 0) = 2;
  A.at(1, 1) = 1;
  auto basis = row_space_basis(A);
  CHECK(basis.size() == 2);
  std::vector<std::vector<Rat>> amb;
  for (int i = 0; i < 4; ++i) {
    std::vector<Rat> e(4);
    e[i] = 1;
    amb.push_back(e);
  }
  auto comp = complement_in(basis, amb);
  CHECK(comp.size() == 2);
  // complement vectors are Euclidean-orthogonal to the subspace
  for (const auto& c : comp)
    for (const auto& b : basis) {
      Rat dot(0);
      for (size_t i = 0; i < c.size(); ++i) dot += c[i] * b[i];
      CHECK(dot == 0);
    }
  CHECK(contains_vector(basis, {Rat(2), Rat(1), Rat(0), Rat(0)}));
  CHECK_FALSE(contains_vector(basis, {Rat(0), Rat(0), Rat(1), Rat(0)}));
}
