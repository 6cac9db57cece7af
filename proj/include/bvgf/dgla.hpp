#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "bvgf/linalg.hpp"
#include "bvgf/superpoly.hpp"

namespace bvgf {

struct BasisElement {
  std::string name;
  int degree = 0;
};

// Sparse 3-tensor entry: [e_i, e_j] = sum_k coeff * e_k (or product table).
struct TensorEntry {
  int i, j, k;
  Rat coeff;
};

// Matrix Lie algebra data used by the Wilson-loop module.
struct LieData {
  int dim = 0;
  std::vector<TensorEntry> structure;  // [t_a, t_b] = sum f_ab^c t_c
  MatQ form;                           // invariant symmetric form
  std::vector<MatQ> representation;    // rho(t_a) as n x n matrices
};

// Finite graded-commutative algebra with a degree-3 trace (the stand-in
// for the de Rham complex of the body manifold).
struct CommAlgebra {
  std::vector<BasisElement> basis;
  std::vector<TensorEntry> product;  // e_i e_j = sum c e_k
  std::vector<Rat> trace;            // degree-3 functional

  int dim() const { return static_cast<int>(basis.size()); }
  std::vector<Rat> multiply(const std::vector<Rat>& u,
                            const std::vector<Rat>& v) const;
};

CommAlgebra exterior_three();  // Lambda(theta1, theta2, theta3)

LieData so3_lie();
LieData u1_lie();

struct AxiomViolation {
  std::string code;     // E_DIFFERENTIAL, E_JACOBI, ...
  std::string witness;  // offending basis elements
};

// Finite-dimensional cyclic differential graded Lie algebra: differential
// of degree +1, graded bracket, invariant pairing of degree -3.
class CyclicDGLA {
 public:
  std::vector<BasisElement> basis;
  MatQ d;                            // (d v)_i = sum_j d(i,j) v_j
  std::vector<TensorEntry> bracket;  // sparse [e_i, e_j] components
  MatQ pairing;                      // <e_i, e_j>
  std::optional<LieData> lie;
  // For tensor models: basis index -> (lie index, commutative index).
  std::vector<std::pair<int, int>> factors;
  int comm_dim = 0;

  int dim() const { return static_cast<int>(basis.size()); }
  int degree(int i) const { return basis[i].degree; }

  std::vector<Rat> apply_d(const std::vector<Rat>& v) const { return d.apply(v); }
  std::vector<Rat> bracket_vec(const std::vector<Rat>& u,
                               const std::vector<Rat>& v) const;
  Rat pair(const std::vector<Rat>& u, const std::vector<Rat>& v) const;

  // Dense bracket lookup [e_i, e_j] as a sparse row
  const std::vector<std::pair<int, Rat>>& bracket_row(int i, int j) const;
  void index_bracket();  // build lookup, called by builders/loader

  std::vector<AxiomViolation> check_axioms() const;
  void validate() const;  // throws the first violation, message lists all

 private:
  std::vector<std::vector<std::pair<int, Rat>>> bracket_index_;
};

// g tensor A with bracket [X ox w, Y ox w'] = [X,Y] ox ww' and pairing
// form x trace; differential zero.
CyclicDGLA tensor_model(const LieData& lie, const CommAlgebra& algebra,
                        const std::vector<std::string>& lie_names);

// Constant flat connection on the 3-torus model: d(X ox w) = sum_i
// [a_i, X] ox theta_i w. Throws E_NOT_FLAT unless the a_i commute.
CyclicDGLA twisted_torus_model(const LieData& lie,
                               const std::vector<std::string>& lie_names,
                               const std::vector<Rat>& a1,
                               const std::vector<Rat>& a2,
                               const std::vector<Rat>& a3);

// Shipped models.
CyclicDGLA model_so3_lambda();
CyclicDGLA model_u1_lambda();
CyclicDGLA model_twisted_torus_so3();

// Closed subspace representing cohomology plus Darboux bookkeeping.
struct Splitting {
  // Row vectors over the model basis, ordered (alpha_1, beta_1, alpha_2,
  // beta_2, ...): alpha carries odd model degree, <alpha_i, beta_j> = delta.
  std::vector<std::vector<Rat>> psi;
  std::vector<std::vector<Rat>> complement;
  SpacePtr space;  // induced odd symplectic space, generator 2k -> psi row 2k

  int pairs() const { return static_cast<int>(psi.size()) / 2; }
  const std::vector<Rat>& alpha(int k) const { return psi[2 * k]; }
  const std::vector<Rat>& beta(int k) const { return psi[2 * k + 1]; }
};

struct SplittingPolicy {
  enum Kind { euclidean_orthogonal, user } kind = euclidean_orthogonal;
  // user mode: rows spanning Psi (any basis of a valid Psi)
  std::vector<std::vector<Rat>> user_psi;
};

Splitting cohomology_splitting(const CyclicDGLA& model,
                               const SplittingPolicy& policy = {});

// Dimension of cohomology (rank computation only).
int cohomology_dim(const CyclicDGLA& model);

// K = sum_i alpha_i ox beta_i + beta_i ox alpha_i.
MatQ projection_kernel(const CyclicDGLA& model, const Splitting& s);

// Pairing-dual of the identity (inverse pairing matrix).
MatQ identity_kernel(const CyclicDGLA& model);

// psi = sum_i x_i alpha_i + y_i beta_i: row per generator of s.space.
std::vector<std::vector<Rat>> psi_field(const Splitting& s);

struct Propagator {
  MatQ P;          // two-tensor, P(a,b) = component on e_a ox e_b
  MatQ h;          // chain homotopy with dh + hd = 1 - projection
  Rat diag_part;   // tadpole value, fixed to zero in this model family
};

// (d ox 1 + 1 ox d) applied to a two-tensor with Koszul sign on the
// second slot.
MatQ tensor_d(const CyclicDGLA& model, const MatQ& Q);

// (-1)^{deg of first slot} twist. identity_kernel and projection_kernel
// are duals with respect to the symmetric pairing; their d-closed
// counterparts entering the propagator equation carry this twist (the
// odd symplectic pairing differs from the symmetric one by exactly it).
MatQ degree_twist(const CyclicDGLA& model, const MatQ& Q);

// Graded exchange r(Q)(a,b) = (-1)^{deg a deg b} Q(b,a); the propagator
// convention is r(P) = -P.
MatQ graded_exchange(const CyclicDGLA& model, const MatQ& Q);

// Solves dP = Id_kernel - K with <P, Psi ox Psi> = 0 and r(P) = -P.
// Deterministic gauge: P is the pairing-dual of the chain homotopy of the
// pairing-orthogonal decomposition (h Psi = 0, h^2 = 0, dh + hd = 1 - pi).
Propagator build_propagator(const CyclicDGLA& model, const Splitting& s);

// Contraction <Q, u ox v> = sum_ab Q(a,b) <e_a,u> <e_b,v>.
Rat contract_pairing(const CyclicDGLA& model, const MatQ& Q,
                     const std::vector<Rat>& u, const std::vector<Rat>& v);

// Basis of gauge tensors Q with r(Q) = -Q, support on total degree 1 and
// <Q, Psi ox Psi> = 0. P + (d ox 1 + 1 ox d) Q ranges over the admissible
// propagator family for the same splitting.
std::vector<MatQ> admissible_gauge_tensors(const CyclicDGLA& model,
                                           const Splitting& s);

// Solve (d ox 1 + 1 ox d) Q = dP for an admissible Q; nullopt when dP is
// not an admissible exact term.
std::optional<MatQ> solve_propagator_potential(const CyclicDGLA& model,
                                               const Splitting& s,
                                               const MatQ& dP);

}  // namespace bvgf
