#include "bvgf/dgla.hpp"

#include <random>

#include "doctest.h"

using namespace bvgf;

namespace {

std::vector<Rat> basis_vec(int n, int i) {
  std::vector<Rat> v(n);
  v[i] = 1;
  return v;
}

}  // namespace

TEST_CASE("exterior algebra and shipped models validate") {
  CommAlgebra a = exterior_three();
  CHECK(a.dim() == 8);
  // theta1 * theta2 = t12, theta2 * theta1 = -t12
  auto u = std::vector<Rat>(8), v = std::vector<Rat>(8);
  u[1] = 1;
  v[2] = 1;
  auto uv = a.multiply(u, v);
  auto vu = a.multiply(v, u);
  CHECK(uv[4] == 1);
  CHECK(vu[4] == -1);

  CyclicDGLA so3 = model_so3_lambda();
  CHECK(so3.dim() == 24);
  CHECK(so3.d.is_zero());
  CHECK(so3.check_axioms().empty());

  CyclicDGLA u1 = model_u1_lambda();
  CHECK(u1.dim() == 8);
  CHECK(u1.bracket.empty());

  CyclicDGLA tt = model_twisted_torus_so3();
  CHECK(tt.check_axioms().empty());
  CHECK_FALSE(tt.d.is_zero());
}

TEST_CASE("validator reports broken axioms with witnesses") {
  CyclicDGLA m = model_twisted_torus_so3();

  CyclicDGLA bad_d = m;
  // basis layout: e1*{1,t1,t2,t3,t12,t13,t23,t123} = 0..7, e2*... = 8..15
  bad_d.d.at(1, 8) += 1;
  bad_d.d.at(4, 9) += 1;
  auto v = bad_d.check_axioms();
  bool has_diff = false;
  for (const auto& x : v)
    if (x.code == "E_DIFFERENTIAL" || x.code == "E_SCHEMA") has_diff = true;
  CHECK(has_diff);

  CyclicDGLA bad_pairing = m;
  for (int j = 0; j < bad_pairing.dim(); ++j) bad_pairing.pairing.at(0, j) = 0;
  v = bad_pairing.check_axioms();
  bool has_deg = false;
  for (const auto& x : v)
    if (x.code == "E_PAIRING_DEGENERATE") has_deg = true;
  CHECK(has_deg);
  CHECK_THROWS_AS(bad_pairing.validate(), Error);

  CyclicDGLA bad_jacobi = m;
  bad_jacobi.bracket.push_back({0, 8, 16, Rat(1)});
  bad_jacobi.index_bracket();
  v = bad_jacobi.check_axioms();
  bool has_j = false;
  for (const auto& x : v)
    if (x.code == "E_JACOBI" || x.code == "E_SCHEMA") has_j = true;
  CHECK(has_j);
}

TEST_CASE("twisted torus flatness and cohomology") {
  std::vector<Rat> z3(3), e1(3), e2(3);
  e1[0] = 1;
  e2[1] = 1;
  CHECK_THROWS_AS(twisted_torus_model(so3_lie(), {"e1", "e2", "e3"}, e1, e2, z3),
                  Error);

  CyclicDGLA flat =
      twisted_torus_model(so3_lie(), {"e1", "e2", "e3"}, z3, z3, z3);
  CHECK(flat.d.is_zero());
  CHECK(cohomology_dim(flat) == 24);

  CyclicDGLA tt = model_twisted_torus_so3();
  CHECK(cohomology_dim(tt) == 8);
}

TEST_CASE("cohomology splitting: d = 0 model and twisted torus") {
  CyclicDGLA so3 = model_so3_lambda();
  Splitting s = cohomology_splitting(so3);
  CHECK(static_cast<int>(s.psi.size()) == 24);
  CHECK(s.complement.empty());
  CHECK(s.pairs() == 12);
  s.space->validate();

  CyclicDGLA tt = model_twisted_torus_so3();
  Splitting st = cohomology_splitting(tt);
  CHECK(static_cast<int>(st.psi.size()) == 8);
  CHECK(static_cast<int>(st.complement.size()) == 16);
  for (int i = 0; i < st.pairs(); ++i)
    for (int j = 0; j < st.pairs(); ++j) {
      CHECK(tt.pair(st.alpha(i), st.beta(j)) == (i == j ? 1 : 0));
      CHECK(tt.pair(st.alpha(i), st.alpha(j)) == 0);
      CHECK(tt.pair(st.beta(i), st.beta(j)) == 0);
    }
  for (const auto& v : st.psi) {
    auto dv = tt.apply_d(v);
    for (const auto& c : dv) CHECK(c == 0);
  }

  SplittingPolicy bad;
  bad.kind = SplittingPolicy::user;
  for (const auto& v : st.psi) bad.user_psi.push_back(v);
  bad.user_psi[0] = basis_vec(24, 0);  // e1*1 is not closed here
  CHECK_THROWS_AS(cohomology_splitting(tt, bad), Error);
}

TEST_CASE("projection kernel") {
  CyclicDGLA so3 = model_so3_lambda();
  Splitting s = cohomology_splitting(so3);
  MatQ K = projection_kernel(so3, s);
  MatQ T = identity_kernel(so3);
  CHECK(K == T);  // projection is the identity when d = 0

  CyclicDGLA tt = model_twisted_torus_so3();
  Splitting st = cohomology_splitting(tt);
  MatQ Kt = projection_kernel(tt, st);
  for (const auto& v : st.psi) {
    auto gv = tt.pairing.apply(v);
    std::vector<Rat> out(tt.dim());
    for (int a = 0; a < tt.dim(); ++a)
      for (int b = 0; b < tt.dim(); ++b)
        if (Kt.at(a, b) != 0 && gv[b] != 0) out[a] += Kt.at(a, b) * gv[b];
    CHECK(out == v);
  }
  Splitting one;
  one.psi = {st.alpha(0), st.beta(0)};
  MatQ K1 = projection_kernel(tt, one);
  for (int a = 0; a < tt.dim(); ++a)
    for (int b = 0; b < tt.dim(); ++b) {
      Rat expect =
          st.alpha(0)[a] * st.beta(0)[b] + st.beta(0)[a] * st.alpha(0)[b];
      CHECK(K1.at(a, b) == expect);
    }
}

TEST_CASE("psi_field darboux rows and parities") {
  CyclicDGLA tt = model_twisted_torus_so3();
  Splitting st = cohomology_splitting(tt);
  auto rows = psi_field(st);
  CHECK(rows.size() == st.psi.size());
  for (int k = 0; k < st.pairs(); ++k) {
    int da = 0;
    for (int i = 0; i < tt.dim(); ++i)
      if (st.alpha(k)[i] != 0) da = tt.degree(i);
    CHECK(da % 2 == 1);  // x generators decorate odd model degree
    CHECK(st.space->gens[2 * k].odd == false);
    CHECK(st.space->gens[2 * k].degree == da - 1);
  }
}

TEST_CASE("propagator: d = 0 gives P = 0") {
  CyclicDGLA so3 = model_so3_lambda();
  Splitting s = cohomology_splitting(so3);
  Propagator p = build_propagator(so3, s);
  CHECK(p.P.is_zero());
  CHECK(p.h.is_zero());
}

TEST_CASE("propagator on the twisted torus") {
  CyclicDGLA tt = model_twisted_torus_so3();
  Splitting s = cohomology_splitting(tt);
  Propagator p = build_propagator(tt, s);

  MatQ T = identity_kernel(tt);
  MatQ K = projection_kernel(tt, s);
  CHECK(tensor_d(tt, p.P) == degree_twist(tt, T - K));
  CHECK(graded_exchange(tt, p.P) == p.P.scaled(Rat(-1)));
  for (size_t i = 0; i < s.psi.size(); ++i)
    for (size_t j = 0; j < s.psi.size(); ++j)
      CHECK(contract_pairing(tt, p.P, s.psi[i], s.psi[j]) == 0);

  int n = tt.dim();
  MatQ dh = tt.d * p.h + p.h * tt.d;
  for (const auto& v : s.psi) {
    auto w = dh.apply(v);
    for (const auto& c : w) CHECK(c == 0);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Rat& e = p.h.at(i, j);
      CHECK((e == 0 || e == 1 || e == -1));
    }
  CHECK_FALSE(p.h.is_zero());
  CHECK((p.h * p.h).is_zero());
  for (const auto& v : s.psi) {
    auto w = p.h.apply(v);
    for (const auto& c : w) CHECK(c == 0);
  }
}

TEST_CASE("propagator uniqueness up to admissible exact terms") {
  CyclicDGLA tt = model_twisted_torus_so3();
  Splitting s = cohomology_splitting(tt);
  Propagator p = build_propagator(tt, s);
  MatQ T = identity_kernel(tt);
  MatQ K = projection_kernel(tt, s);

  auto gauge = admissible_gauge_tensors(tt, s);
  REQUIRE(gauge.size() > 0);
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(gauge.size()) - 1);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int it = 0; it < 5; ++it) {
    MatQ Q(tt.dim(), tt.dim());
    for (int z = 0; z < 3; ++z) Q = Q + gauge[pick(rng)].scaled(Rat(coef(rng)));
    MatQ P2 = p.P + tensor_d(tt, Q);
    CHECK(tensor_d(tt, P2) == degree_twist(tt, T - K));
    CHECK(graded_exchange(tt, P2) == P2.scaled(Rat(-1)));
    for (size_t i = 0; i < s.psi.size(); ++i)
      for (size_t j = 0; j < s.psi.size(); ++j)
        CHECK(contract_pairing(tt, P2, s.psi[i], s.psi[j]) == 0);
    auto pot = solve_propagator_potential(tt, s, P2 - p.P);
    REQUIRE(pot.has_value());
    CHECK(tensor_d(tt, *pot) == P2 - p.P);
  }

  MatQ bad = p.P;
  bad.at(0, 1) += 1;
  CHECK_FALSE(graded_exchange(tt, bad) == bad.scaled(Rat(-1)));
}
