#include "bvgf/dgla.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace bvgf {

std::vector<Rat> CommAlgebra::multiply(const std::vector<Rat>& u,
                                       const std::vector<Rat>& v) const {
  std::vector<Rat> out(dim());
  for (const auto& e : product)
    if (u[e.i] != 0 && v[e.j] != 0) out[e.k] += e.coeff * u[e.i] * v[e.j];
  return out;
}

CommAlgebra exterior_three() {
  CommAlgebra a;
  // subsets of {1,2,3}, graded by cardinality
  std::vector<std::vector<int>> subsets = {{},     {1},    {2},    {3},
                                           {1, 2}, {1, 3}, {2, 3}, {1, 2, 3}};
  for (const auto& s : subsets) {
    std::string name = s.empty() ? "1" : "t";
    for (int g : s) name += std::to_string(g);
    a.basis.push_back({name, static_cast<int>(s.size())});
  }
  auto index_of = [&](const std::vector<int>& s) {
    for (size_t i = 0; i < subsets.size(); ++i)
      if (subsets[i] == s) return static_cast<int>(i);
    return -1;
  };
  for (size_t i = 0; i < subsets.size(); ++i)
    for (size_t j = 0; j < subsets.size(); ++j) {
      std::vector<int> merged = subsets[i];
      bool dup = false;
      for (int g : subsets[j]) {
        if (std::find(merged.begin(), merged.end(), g) != merged.end()) {
          dup = true;
          break;
        }
        merged.push_back(g);
      }
      if (dup) continue;
      int inv = 0;  // transpositions sorting the concatenation
      for (int p : subsets[i])
        for (int q : subsets[j])
          if (q < p) ++inv;
      std::vector<int> sorted = merged;
      std::sort(sorted.begin(), sorted.end());
      a.product.push_back({static_cast<int>(i), static_cast<int>(j),
                           index_of(sorted), Rat(inv % 2 == 0 ? 1 : -1)});
    }
  a.trace.assign(8, Rat(0));
  a.trace[7] = 1;  // coefficient of t123
  return a;
}

LieData so3_lie() {
  LieData lie;
  lie.dim = 3;
  int eps[3][3][3] = {};
  eps[0][1][2] = 1;
  eps[1][2][0] = 1;
  eps[2][0][1] = 1;
  eps[1][0][2] = -1;
  eps[2][1][0] = -1;
  eps[0][2][1] = -1;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        if (eps[i][j][k] != 0)
          lie.structure.push_back({i, j, k, Rat(eps[i][j][k])});
  lie.form = MatQ::identity(3);
  // adjoint representation: rho(e_i) e_j = [e_i, e_j]
  for (int i = 0; i < 3; ++i) {
    MatQ r(3, 3);
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r.at(k, j) = eps[i][j][k];
    lie.representation.push_back(r);
  }
  return lie;
}

LieData u1_lie() {
  LieData lie;
  lie.dim = 1;
  lie.form = MatQ(1, 1);
  lie.form.at(0, 0) = 1;
  MatQ r(2, 2);  // real rotation generator
  r.at(0, 1) = 1;
  r.at(1, 0) = -1;
  lie.representation.push_back(r);
  return lie;
}

std::vector<Rat> CyclicDGLA::bracket_vec(const std::vector<Rat>& u,
                                         const std::vector<Rat>& v) const {
  std::vector<Rat> out(dim());
  for (const auto& e : bracket)
    if (u[e.i] != 0 && v[e.j] != 0) out[e.k] += e.coeff * u[e.i] * v[e.j];
  return out;
}

Rat CyclicDGLA::pair(const std::vector<Rat>& u,
                     const std::vector<Rat>& v) const {
  Rat s(0);
  for (int i = 0; i < dim(); ++i) {
    if (u[i] == 0) continue;
    for (int j = 0; j < dim(); ++j)
      if (v[j] != 0 && pairing.at(i, j) != 0)
        s += u[i] * v[j] * pairing.at(i, j);
  }
  return s;
}

void CyclicDGLA::index_bracket() {
  bracket_index_.assign(dim() * dim(), {});
  for (const auto& e : bracket)
    bracket_index_[e.i * dim() + e.j].emplace_back(e.k, e.coeff);
}

const std::vector<std::pair<int, Rat>>& CyclicDGLA::bracket_row(int i,
                                                                int j) const {
  return bracket_index_[i * dim() + j];
}

namespace {

std::vector<Rat> unit_vec(int n, int i) {
  std::vector<Rat> v(n);
  v[i] = 1;
  return v;
}

bool all_zero(const std::vector<Rat>& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

}  // namespace

std::vector<AxiomViolation> CyclicDGLA::check_axioms() const {
  std::vector<AxiomViolation> out;
  int n = dim();
  auto name = [&](int i) { return basis[i].name; };

  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (d.at(i, j) != 0 && degree(i) != degree(j) + 1) {
        out.push_back({"E_SCHEMA", "d does not raise degree by 1 at " + name(j)});
        j = n;
        break;
      }
  for (int j = 0; j < n; ++j) {
    if (!all_zero(apply_d(apply_d(unit_vec(n, j))))) {
      out.push_back({"E_DIFFERENTIAL", "d^2 != 0 on " + name(j)});
      break;
    }
  }

  for (const auto& e : bracket)
    if (degree(e.k) != degree(e.i) + degree(e.j)) {
      out.push_back({"E_SCHEMA", "bracket not degree-additive at [" +
                                     name(e.i) + "," + name(e.j) + "]"});
      break;
    }

  if (bracket_index_.empty())
    throw Error("E_SCHEMA", "bracket index not built before validation");

  // scratch accumulator keyed by touched indices
  std::vector<Rat> acc(n, Rat(0));
  std::vector<int> touched;
  auto bump = [&](int k, const Rat& c) {
    if (acc[k] == 0 && c != 0) touched.push_back(k);
    acc[k] += c;
  };
  auto reset = [&]() {
    for (int k : touched) acc[k] = 0;
    touched.clear();
  };

  for (int i = 0; i < n; ++i) {
    bool done = false;
    for (int j = i; j < n; ++j) {
      int s = sign_pow(degree(i) * degree(j));
      for (const auto& [k, c] : bracket_row(i, j)) bump(k, c);
      for (const auto& [k, c] : bracket_row(j, i)) bump(k, s * c);
      for (int k : touched)
        if (acc[k] != 0) {
          out.push_back({"E_SCHEMA", "bracket not graded-antisymmetric at [" +
                                         name(i) + "," + name(j) + "]"});
          done = true;
          break;
        }
      reset();
      if (done) break;
    }
    if (done) break;
  }

  // graded Jacobi in derivation form on all basis triples
  bool jacobi_ok = true;
  for (int i = 0; i < n && jacobi_ok; ++i)
    for (int j = 0; j < n && jacobi_ok; ++j)
      for (int k = 0; k < n && jacobi_ok; ++k) {
        int s = sign_pow(degree(i) * degree(j));
        for (const auto& [m, c1] : bracket_row(j, k))
          for (const auto& [t, c2] : bracket_row(i, m)) bump(t, c1 * c2);
        for (const auto& [m, c1] : bracket_row(i, j))
          for (const auto& [t, c2] : bracket_row(m, k)) bump(t, -c1 * c2);
        for (const auto& [m, c1] : bracket_row(i, k))
          for (const auto& [t, c2] : bracket_row(j, m)) bump(t, -s * c1 * c2);
        for (int t : touched)
          if (acc[t] != 0) {
            out.push_back({"E_JACOBI", "jacobi fails at (" + name(i) + "," +
                                           name(j) + "," + name(k) + ")"});
            jacobi_ok = false;
            break;
          }
        reset();
      }

  // Leibniz: d[x,y] = [dx,y] + (-1)^{|x|}[x,dy]
  bool leibniz_ok = true;
  for (int i = 0; i < n && leibniz_ok; ++i)
    for (int j = 0; j < n && leibniz_ok; ++j) {
      int s = sign_pow(degree(i));
      for (const auto& [m, c1] : bracket_row(i, j))
        for (int t = 0; t < n; ++t)
          if (d.at(t, m) != 0) bump(t, c1 * d.at(t, m));
      for (int m = 0; m < n; ++m) {
        if (d.at(m, i) != 0)
          for (const auto& [t, c2] : bracket_row(m, j)) bump(t, -d.at(m, i) * c2);
        if (d.at(m, j) != 0)
          for (const auto& [t, c2] : bracket_row(i, m))
            bump(t, -s * d.at(m, j) * c2);
      }
      for (int t : touched)
        if (acc[t] != 0) {
          out.push_back({"E_LEIBNIZ", "d is not a bracket derivation at [" +
                                          name(i) + "," + name(j) + "]"});
          leibniz_ok = false;
          break;
        }
      reset();
    }

  for (int i = 0; i < n; ++i) {
    bool done = false;
    for (int j = 0; j < n; ++j)
      if (pairing.at(i, j) != 0 && degree(i) + degree(j) != 3) {
        out.push_back({"E_SCHEMA", "pairing outside total degree 3 at (" +
                                       name(i) + "," + name(j) + ")"});
        done = true;
        break;
      }
    if (done) break;
  }
  if (!(pairing == pairing.transpose()))
    out.push_back({"E_SCHEMA", "pairing not symmetric"});
  if (rank_of(pairing) != n) {
    int bad = 0;
    for (int i = 0; i < n; ++i) {
      bool zero_row = true;
      for (int j = 0; j < n; ++j)
        if (pairing.at(i, j) != 0) zero_row = false;
      if (zero_row) bad = i;
    }
    out.push_back(
        {"E_PAIRING_DEGENERATE", "pairing is degenerate (see " + name(bad) + ")"});
  }

  {
    MatQ S(n, n);
    for (int i = 0; i < n; ++i) S.at(i, i) = sign_pow(degree(i));
    MatQ lhs = d.transpose() * pairing + S * pairing * d;
    if (!lhs.is_zero())
      out.push_back({"E_PAIRING_INVARIANCE", "pairing is not d-invariant"});
  }

  bool inv_ok = true;
  for (int i = 0; i < n && inv_ok; ++i)
    for (int j = 0; j < n && inv_ok; ++j)
      for (int k = 0; k < n; ++k) {
        Rat lhs(0), rhs(0);
        for (const auto& [m, c] : bracket_row(i, j))
          if (pairing.at(m, k) != 0) lhs += c * pairing.at(m, k);
        for (const auto& [m, c] : bracket_row(j, k))
          if (pairing.at(i, m) != 0) rhs += c * pairing.at(i, m);
        if (lhs != rhs) {
          out.push_back({"E_PAIRING_INVARIANCE", "<[x,y],z> != <x,[y,z]> at (" +
                                                     name(i) + "," + name(j) +
                                                     "," + name(k) + ")"});
          inv_ok = false;
          break;
        }
      }
  return out;
}

void CyclicDGLA::validate() const {
  auto v = check_axioms();
  if (v.empty()) return;
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << "; ";
    os << v[i].code << " (" << v[i].witness << ")";
  }
  throw Error(v[0].code, os.str());
}

CyclicDGLA tensor_model(const LieData& lie, const CommAlgebra& algebra,
                        const std::vector<std::string>& lie_names) {
  CyclicDGLA m;
  int ng = lie.dim;
  int na = algebra.dim();
  m.comm_dim = na;
  m.lie = lie;
  for (int a = 0; a < ng; ++a)
    for (int w = 0; w < na; ++w) {
      m.basis.push_back({lie_names[a] + "*" + algebra.basis[w].name,
                         algebra.basis[w].degree});
      m.factors.emplace_back(a, w);
    }
  int n = ng * na;
  m.d = MatQ(n, n);
  auto idx = [&](int a, int w) { return a * na + w; };
  for (const auto& f : lie.structure)
    for (const auto& p : algebra.product)
      m.bracket.push_back(
          {idx(f.i, p.i), idx(f.j, p.j), idx(f.k, p.k), f.coeff * p.coeff});
  m.pairing = MatQ(n, n);
  for (int a = 0; a < ng; ++a)
    for (int b = 0; b < ng; ++b) {
      if (lie.form.at(a, b) == 0) continue;
      for (const auto& p : algebra.product) {
        if (algebra.trace[p.k] == 0) continue;
        m.pairing.at(idx(a, p.i), idx(b, p.j)) +=
            lie.form.at(a, b) * p.coeff * algebra.trace[p.k];
      }
    }
  m.index_bracket();
  m.validate();
  return m;
}

CyclicDGLA twisted_torus_model(const LieData& lie,
                               const std::vector<std::string>& lie_names,
                               const std::vector<Rat>& a1,
                               const std::vector<Rat>& a2,
                               const std::vector<Rat>& a3) {
  std::vector<std::vector<Rat>> as = {a1, a2, a3};
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      std::vector<Rat> c(lie.dim);
      for (const auto& f : lie.structure)
        c[f.k] += f.coeff * as[i][f.i] * as[j][f.j];
      if (!all_zero(c))
        throw Error("E_NOT_FLAT", "connection coefficients do not commute");
    }
  CommAlgebra alg = exterior_three();
  CyclicDGLA m = tensor_model(lie, alg, lie_names);
  int na = alg.dim();
  auto idx = [&](int a, int w) { return a * na + w; };
  // d(X ox w) = sum_i [a_i, X] ox theta_i w
  MatQ d(m.dim(), m.dim());
  for (int b = 0; b < lie.dim; ++b)
    for (int w = 0; w < na; ++w)
      for (int i = 0; i < 3; ++i) {
        std::vector<Rat> ab(lie.dim);  // [a_i, e_b]
        for (const auto& f : lie.structure)
          if (f.j == b) ab[f.k] += f.coeff * as[i][f.i];
        for (const auto& p : alg.product) {
          if (p.i != 1 + i || p.j != w) continue;
          for (int c = 0; c < lie.dim; ++c)
            if (ab[c] != 0) d.at(idx(c, p.k), idx(b, w)) += ab[c] * p.coeff;
        }
      }
  m.d = d;
  m.validate();
  return m;
}

CyclicDGLA model_so3_lambda() {
  static const CyclicDGLA m =
      tensor_model(so3_lie(), exterior_three(), {"e1", "e2", "e3"});
  return m;
}

CyclicDGLA model_u1_lambda() {
  static const CyclicDGLA m = tensor_model(u1_lie(), exterior_three(), {"u"});
  return m;
}

CyclicDGLA model_twisted_torus_so3() {
  static const CyclicDGLA m = [] {
    std::vector<Rat> z3(3), e3(3);
    e3[2] = 1;
    return twisted_torus_model(so3_lie(), {"e1", "e2", "e3"}, z3, z3, e3);
  }();
  return m;
}

namespace {

struct DegreeData {
  std::vector<int> indices;
  std::vector<std::vector<Rat>> kernel;
  std::vector<std::vector<Rat>> image;
};

std::map<int, DegreeData> degree_split(const CyclicDGLA& m) {
  std::map<int, DegreeData> by_degree;
  int n = m.dim();
  for (int i = 0; i < n; ++i) by_degree[m.degree(i)].indices.push_back(i);
  for (auto& [p, data] : by_degree) {
    MatQ A(n, static_cast<int>(data.indices.size()));
    for (size_t c = 0; c < data.indices.size(); ++c)
      for (int r = 0; r < n; ++r)
        A.at(r, static_cast<int>(c)) = m.d.at(r, data.indices[c]);
    LinearSolver s(A);
    for (const auto& coef : s.nullspace()) {
      std::vector<Rat> v(n);
      for (size_t c = 0; c < data.indices.size(); ++c)
        v[data.indices[c]] = coef[c];
      data.kernel.push_back(std::move(v));
    }
    auto below = by_degree.find(p - 1);
    if (below != by_degree.end()) {
      std::vector<std::vector<Rat>> cols;
      for (int j : below->second.indices) {
        std::vector<Rat> v(n);
        bool nz = false;
        for (int r = 0; r < n; ++r) {
          v[r] = m.d.at(r, j);
          if (v[r] != 0) nz = true;
        }
        if (nz) cols.push_back(std::move(v));
      }
      if (!cols.empty()) {
        MatQ B(static_cast<int>(cols.size()), n);
        for (size_t r = 0; r < cols.size(); ++r)
          for (int c = 0; c < n; ++c) B.at(static_cast<int>(r), c) = cols[r][c];
        data.image = row_space_basis(B);
      }
    }
  }
  return by_degree;
}

bool is_degree_homogeneous(const CyclicDGLA& m, const std::vector<Rat>& v,
                           int* deg_out) {
  constexpr int kUnset = INT32_MIN;
  int deg = kUnset;
  for (int i = 0; i < m.dim(); ++i) {
    if (v[i] == 0) continue;
    if (deg == kUnset)
      deg = m.degree(i);
    else if (m.degree(i) != deg)
      return false;
  }
  if (deg == kUnset) return false;
  *deg_out = deg;
  return true;
}

// intersection of span(C) with ker d
std::vector<std::vector<Rat>> kernel_part(const CyclicDGLA& m,
                                          const std::vector<std::vector<Rat>>& C) {
  std::vector<std::vector<Rat>> out;
  if (C.empty()) return out;
  int n = m.dim();
  MatQ DC(n, static_cast<int>(C.size()));
  for (size_t c = 0; c < C.size(); ++c) {
    auto dv = m.apply_d(C[c]);
    for (int r = 0; r < n; ++r) DC.at(r, static_cast<int>(c)) = dv[r];
  }
  LinearSolver sk(DC);
  for (const auto& coef : sk.nullspace()) {
    std::vector<Rat> v(n);
    for (size_t c = 0; c < C.size(); ++c)
      if (coef[c] != 0)
        for (int i = 0; i < n; ++i) v[i] += coef[c] * C[c][i];
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

int cohomology_dim(const CyclicDGLA& m) { return m.dim() - 2 * rank_of(m.d); }

Splitting cohomology_splitting(const CyclicDGLA& model,
                               const SplittingPolicy& policy) {
  auto by_degree = degree_split(model);
  int n = model.dim();

  std::map<int, std::vector<std::vector<Rat>>> psi_by_degree;
  if (policy.kind == SplittingPolicy::user) {
    for (const auto& v : policy.user_psi) {
      if (static_cast<int>(v.size()) != n)
        throw Error("E_SCHEMA", "psi vector has wrong dimension");
      if (!all_zero(model.apply_d(v)))
        throw Error("E_NOT_CLOSED", "user psi vector is not closed");
      int deg = 0;
      if (!is_degree_homogeneous(model, v, &deg))
        throw Error("E_SCHEMA", "user psi vector is not degree-homogeneous");
      psi_by_degree[deg].push_back(v);
    }
    for (auto& [p, data] : by_degree) {
      auto& psis = psi_by_degree[p];
      size_t expect = data.kernel.size() - data.image.size();
      if (psis.size() != expect)
        throw Error("E_RANK", "user psi has wrong dimension in degree " +
                                  std::to_string(p));
      std::vector<std::vector<Rat>> span = data.image;
      span.insert(span.end(), psis.begin(), psis.end());
      if (span.empty()) continue;
      MatQ M(static_cast<int>(span.size()), n);
      for (size_t r = 0; r < span.size(); ++r)
        for (int c = 0; c < n; ++c) M.at(static_cast<int>(r), c) = span[r][c];
      if (rank_of(M) != static_cast<int>(span.size()))
        throw Error("E_RANK", "user psi does not project isomorphically");
    }
  } else {
    for (auto& [p, data] : by_degree)
      psi_by_degree[p] = complement_in(data.image, data.kernel);
  }

  // Darboux normalization per degree pair (p, 3-p), alpha on the odd side
  Splitting s;
  std::vector<std::pair<std::vector<Rat>, std::vector<Rat>>> pairs;
  for (int p : {1, 3}) {
    int q = 3 - p;
    auto& odd_side = psi_by_degree[p];
    auto& even_side = psi_by_degree[q];
    if (odd_side.size() != even_side.size())
      throw Error("E_PAIRING_DEGENERATE",
                  "cohomology ranks differ between degrees " +
                      std::to_string(p) + " and " + std::to_string(q));
    if (odd_side.empty()) continue;
    int k = static_cast<int>(odd_side.size());
    MatQ G(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        G.at(i, j) = model.pair(odd_side[i], even_side[j]);
    MatQ Ginv;
    try {
      Ginv = inverse_of(G);
    } catch (const Error&) {
      throw Error("E_PAIRING_DEGENERATE",
                  "cohomology pairing degenerate between degrees " +
                      std::to_string(p) + " and " + std::to_string(q));
    }
    for (int j = 0; j < k; ++j) {
      std::vector<Rat> beta(n);
      for (int t = 0; t < k; ++t)
        if (Ginv.at(t, j) != 0)
          for (int c = 0; c < n; ++c) beta[c] += Ginv.at(t, j) * even_side[t][c];
      pairs.emplace_back(odd_side[j], beta);
    }
  }
  auto space = std::make_shared<OddSymplecticSpace>();
  int pair_no = 0;
  for (auto& [alpha, beta] : pairs) {
    ++pair_no;
    int da = 0, db = 0;
    is_degree_homogeneous(model, alpha, &da);
    is_degree_homogeneous(model, beta, &db);
    space->gens.push_back({"x" + std::to_string(pair_no), false, da - 1});
    space->gens.push_back({"y" + std::to_string(pair_no), true, db - 1});
    space->pairs.push_back({2 * (pair_no - 1), 2 * (pair_no - 1) + 1});
    s.psi.push_back(alpha);
    s.psi.push_back(beta);
  }
  space->validate();
  s.space = space;

  std::vector<std::vector<Rat>> ambient;
  for (int i = 0; i < n; ++i) ambient.push_back(unit_vec(n, i));
  s.complement = s.psi.empty() ? ambient : complement_in(s.psi, ambient);
  if (static_cast<int>(s.psi.size() + s.complement.size()) != n)
    throw Error("E_RANK", "psi plus complement does not span the model");
  return s;
}

MatQ projection_kernel(const CyclicDGLA& model, const Splitting& s) {
  int n = model.dim();
  MatQ K(n, n);
  for (int k = 0; k < s.pairs(); ++k) {
    const auto& a = s.alpha(k);
    const auto& b = s.beta(k);
    for (int i = 0; i < n; ++i) {
      if (a[i] == 0 && b[i] == 0) continue;
      for (int j = 0; j < n; ++j) K.at(i, j) += a[i] * b[j] + b[i] * a[j];
    }
  }
  return K;
}

MatQ identity_kernel(const CyclicDGLA& model) {
  return inverse_of(model.pairing);
}

std::vector<std::vector<Rat>> psi_field(const Splitting& s) { return s.psi; }

MatQ tensor_d(const CyclicDGLA& model, const MatQ& Q) {
  int n = model.dim();
  MatQ SQ(n, n);
  for (int a = 0; a < n; ++a) {
    int sg = sign_pow(model.degree(a));
    for (int b = 0; b < n; ++b) SQ.at(a, b) = sg * Q.at(a, b);
  }
  return model.d * Q + SQ * model.d.transpose();
}

MatQ degree_twist(const CyclicDGLA& model, const MatQ& Q) {
  int n = model.dim();
  MatQ R(n, n);
  for (int a = 0; a < n; ++a) {
    int sg = sign_pow(model.degree(a));
    for (int b = 0; b < n; ++b) R.at(a, b) = sg * Q.at(a, b);
  }
  return R;
}

MatQ graded_exchange(const CyclicDGLA& model, const MatQ& Q) {
  int n = model.dim();
  MatQ R(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      R.at(a, b) = sign_pow(model.degree(a) * model.degree(b)) * Q.at(b, a);
  return R;
}

Rat contract_pairing(const CyclicDGLA& model, const MatQ& Q,
                     const std::vector<Rat>& u, const std::vector<Rat>& v) {
  auto gu = model.pairing.apply(u);
  auto gv = model.pairing.apply(v);
  Rat s(0);
  for (int a = 0; a < model.dim(); ++a) {
    if (gu[a] == 0) continue;
    for (int b = 0; b < model.dim(); ++b)
      if (gv[b] != 0 && Q.at(a, b) != 0) s += Q.at(a, b) * gu[a] * gv[b];
  }
  return s;
}

namespace {

// independent components of the r(Q) = -Q class on total degree 1
std::vector<std::pair<int, int>> gauge_component_pairs(const CyclicDGLA& m) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < m.dim(); ++a)
    for (int b = a; b < m.dim(); ++b) {
      if (m.degree(a) + m.degree(b) != 1) continue;
      if (a == b) continue;  // r(Q)=-Q forces the diagonal only when even*even
      pairs.emplace_back(a, b);
    }
  return pairs;
}

MatQ gauge_tensor_from_components(const CyclicDGLA& m,
                                  const std::vector<std::pair<int, int>>& pairs,
                                  const std::vector<Rat>& t) {
  MatQ Q(m.dim(), m.dim());
  for (size_t c = 0; c < pairs.size(); ++c) {
    auto [a, b] = pairs[c];
    Q.at(a, b) += t[c];
    Q.at(b, a) -= sign_pow(m.degree(a) * m.degree(b)) * t[c];
  }
  return Q;
}

MatQ contraction_rows(const CyclicDGLA& m, const Splitting& s,
                      const std::vector<std::pair<int, int>>& pairs) {
  int np = static_cast<int>(s.psi.size());
  MatQ rows(np * np, static_cast<int>(pairs.size()));
  std::vector<std::vector<Rat>> gpsi;
  for (const auto& v : s.psi) gpsi.push_back(m.pairing.apply(v));
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < np; ++j)
      for (size_t c = 0; c < pairs.size(); ++c) {
        auto [a, b] = pairs[c];
        Rat v = gpsi[i][a] * gpsi[j][b] -
                sign_pow(m.degree(a) * m.degree(b)) * gpsi[i][b] * gpsi[j][a];
        rows.at(i * np + j, static_cast<int>(c)) = v;
      }
  return rows;
}

}  // namespace

std::vector<MatQ> admissible_gauge_tensors(const CyclicDGLA& model,
                                           const Splitting& s) {
  auto pairs = gauge_component_pairs(model);
  MatQ rows = contraction_rows(model, s, pairs);
  LinearSolver solver(rows);
  std::vector<MatQ> out;
  for (const auto& t : solver.nullspace())
    out.push_back(gauge_tensor_from_components(model, pairs, t));
  return out;
}

std::optional<MatQ> solve_propagator_potential(const CyclicDGLA& model,
                                               const Splitting& s,
                                               const MatQ& dP) {
  auto pairs = gauge_component_pairs(model);
  int n = model.dim();
  int np = static_cast<int>(s.psi.size());
  MatQ A(n * n + np * np, static_cast<int>(pairs.size()));
  for (size_t c = 0; c < pairs.size(); ++c) {
    std::vector<Rat> t(pairs.size());
    t[c] = 1;
    MatQ DQ = tensor_d(model, gauge_tensor_from_components(model, pairs, t));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        A.at(a * n + b, static_cast<int>(c)) = DQ.at(a, b);
  }
  MatQ crows = contraction_rows(model, s, pairs);
  for (int r = 0; r < crows.rows(); ++r)
    for (int c = 0; c < crows.cols(); ++c)
      A.at(n * n + r, c) = crows.at(r, c);
  std::vector<Rat> rhs(n * n + np * np);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) rhs[a * n + b] = dP.at(a, b);
  LinearSolver solver(A);
  auto t = solver.solve(rhs);
  if (!t) return std::nullopt;
  return gauge_tensor_from_components(model, pairs, *t);
}

Propagator build_propagator(const CyclicDGLA& model, const Splitting& s) {
  int n = model.dim();
  auto by_degree = degree_split(model);

  // pairing-orthogonal complement of Psi, split into homogeneous parts
  std::map<int, std::vector<std::vector<Rat>>> cint;
  {
    MatQ Gpsi(static_cast<int>(s.psi.size()), n);
    for (size_t r = 0; r < s.psi.size(); ++r) {
      auto g = model.pairing.apply(s.psi[r]);
      for (int c = 0; c < n; ++c) Gpsi.at(static_cast<int>(r), c) = g[c];
    }
    LinearSolver ortho(Gpsi);
    for (const auto& v : ortho.nullspace()) {
      std::map<int, std::vector<Rat>> parts;
      for (int i = 0; i < n; ++i)
        if (v[i] != 0) {
          auto& part = parts[model.degree(i)];
          if (part.empty()) part.assign(n, Rat(0));
          part[i] = v[i];
        }
      for (auto& [p, w] : parts) cint[p].push_back(w);
    }
    // homogeneous parts of pairing-orthogonal vectors remain orthogonal
    // (the pairing couples complementary degrees); dedupe each sector
    for (auto& [p, vecs] : cint) {
      if (vecs.empty()) continue;
      MatQ M(static_cast<int>(vecs.size()), n);
      for (size_t r = 0; r < vecs.size(); ++r)
        for (int c = 0; c < n; ++c) M.at(static_cast<int>(r), c) = vecs[r][c];
      vecs = row_space_basis(M);
    }
  }

  // chain homotopy: h kills Psi and the gauge sector B, inverts d on the
  // exact sector
  MatQ h(n, n);
  for (auto& [p, data] : by_degree) {
    auto& C = cint[p];
    auto kerC = kernel_part(model, C);
    if (kerC.size() != data.image.size())
      throw Error("E_SINGULAR",
                  "gauge fixing failed: closed part of the complement differs "
                  "from the exact subspace in degree " +
                      std::to_string(p));
    for (const auto& v : kerC)
      if (!contains_vector(data.image, v))
        throw Error("E_SINGULAR",
                    "gauge fixing failed: closed complement vector is not "
                    "exact in degree " +
                        std::to_string(p));
    auto B = complement_in(kerC, C);
    if (B.empty()) continue;
    auto above = by_degree.find(p + 1);
    if (above == by_degree.end())
      throw Error("E_SINGULAR",
                  "dangling gauge sector in degree " + std::to_string(p));
    const auto& image_above = above->second.image;
    if (image_above.size() != B.size())
      throw Error("E_SINGULAR",
                  "image dimension mismatch in degree " + std::to_string(p + 1));
    int k = static_cast<int>(B.size());
    MatQ DB(n, k);
    for (int c = 0; c < k; ++c) {
      auto dv = model.apply_d(B[c]);
      for (int r = 0; r < n; ++r) DB.at(r, c) = dv[r];
    }
    LinearSolver sdb(DB);

    // frame of degree p+1: psi rows, the exact sector, the gauge sector
    std::vector<std::vector<Rat>> frame;
    std::vector<int> image_cols;
    for (const auto& v : s.psi) {
      int dv = 0;
      if (is_degree_homogeneous(model, v, &dv) && dv == p + 1)
        frame.push_back(v);
    }
    for (const auto& v : image_above) {
      image_cols.push_back(static_cast<int>(frame.size()));
      frame.push_back(v);
    }
    auto& Cab = cint[p + 1];
    for (const auto& v : complement_in(kernel_part(model, Cab), Cab))
      frame.push_back(v);
    if (frame.size() != above->second.indices.size())
      throw Error("E_SINGULAR",
                  "frame size mismatch in degree " + std::to_string(p + 1));
    int fk = static_cast<int>(frame.size());
    MatQ F(n, fk);
    for (int c = 0; c < fk; ++c)
      for (int r = 0; r < n; ++r) F.at(r, c) = frame[c][r];
    LinearSolver fs(F);
    for (int a : above->second.indices) {
      auto coords = fs.solve(unit_vec(n, a));
      if (!coords) throw Error("E_SINGULAR", "degree frame does not span");
      std::vector<Rat> img(n);
      bool nz = false;
      for (size_t t = 0; t < image_above.size(); ++t) {
        const Rat& c = (*coords)[image_cols[t]];
        if (c == 0) continue;
        nz = true;
        for (int i = 0; i < n; ++i) img[i] += c * image_above[t][i];
      }
      if (!nz) continue;
      auto bx = sdb.solve_least_norm(img);
      if (!bx)
        throw Error("E_SINGULAR", "exact vector not hit by d on the gauge sector");
      for (int c = 0; c < k; ++c)
        if ((*bx)[c] != 0)
          for (int i = 0; i < n; ++i) h.at(i, a) += (*bx)[c] * B[c][i];
    }
  }

  Propagator prop;
  prop.h = h;
  // d-closed kernels: the twisted duals of identity and projection
  MatQ T = degree_twist(model, identity_kernel(model));
  MatQ P0 = h * T;
  prop.P = (P0 - graded_exchange(model, P0)).scaled(Rat(1, 2));
  prop.diag_part = 0;

  MatQ K = degree_twist(model, projection_kernel(model, s));
  if (!(tensor_d(model, prop.P) == T - K))
    throw Error("E_SINGULAR", "propagator does not satisfy dP = Id - K");
  for (size_t i = 0; i < s.psi.size(); ++i)
    for (size_t j = 0; j < s.psi.size(); ++j)
      if (contract_pairing(model, prop.P, s.psi[i], s.psi[j]) != 0)
        throw Error("E_SINGULAR", "propagator does not annihilate Psi ox Psi");
  return prop;
}

}  // namespace bvgf
