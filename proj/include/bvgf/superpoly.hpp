#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bvgf/rational.hpp"

namespace bvgf {

// One coordinate function on the odd symplectic space H[1).
struct Generator {
  std::string name;
  bool odd = false;  // parity of the coordinate
  int degree = 0;    // cohomological degree in H[1]
};

// Indices of a Darboux pair (x even, y odd).
struct DarbouxPair {
  int x = -1;
  int y = -1;
};

// Finite odd symplectic space described by Darboux generators.
// Invariants: every generator sits in exactly one pair, paired generators
// have opposite parity and their degrees sum to 1.
class OddSymplecticSpace {
 public:
  std::vector<Generator> gens;
  std::vector<DarbouxPair> pairs;

  void validate() const;
  int dim() const { return static_cast<int>(gens.size()); }
  bool same_as(const OddSymplecticSpace& o) const;
  int find(const std::string& name) const;
};

using SpacePtr = std::shared_ptr<const OddSymplecticSpace>;

// Truncation contract: every operation drops terms of polynomial degree
// above `degree` or hbar power above `hbar`.
struct Truncation {
  int degree = 6;
  int hbar = 2;
  bool operator==(const Truncation&) const = default;
};

// Canonical monomial: even generators as sorted (index, multiplicity)
// pairs, odd generators as a strictly increasing index list. The stored
// coefficient refers to the word with odd generators in ascending order.
struct Monomial {
  std::vector<std::pair<int, int>> evens;
  std::vector<int> odds;

  int degree() const;
  bool odd_parity() const { return odds.size() % 2 == 1; }
  auto operator<=>(const Monomial&) const = default;
};

struct TermKey {
  int hbar = 0;
  Monomial mono;
  auto operator<=>(const TermKey&) const = default;
};

// Truncated polynomial in the Darboux generators with hbar-series
// coefficients. Immutable value semantics; all operations are pure.
class SuperPolynomial {
 public:
  SuperPolynomial() = default;
  SuperPolynomial(SpacePtr space, Truncation trunc)
      : space_(std::move(space)), trunc_(trunc) {}

  static SuperPolynomial constant(SpacePtr space, Truncation t, const Rat& c);
  static SuperPolynomial generator(SpacePtr space, Truncation t, int gen_index);

  const SpacePtr& space() const { return space_; }
  const Truncation& truncation() const { return trunc_; }
  const std::map<TermKey, Rat>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  Rat coefficient(const TermKey& k) const;
  // Largest |coefficient|, 0 for the zero polynomial.
  Rat max_abs_coefficient() const;

  // Accumulate c * (monomial given as a generator word, not necessarily
  // sorted; Koszul sign of sorting the odd letters is applied, squares of
  // odd generators collapse to zero).
  void add_word(const std::vector<int>& word, int hbar, const Rat& c);
  void add_term(const TermKey& key, const Rat& c);

  SuperPolynomial operator+(const SuperPolynomial& g) const;
  SuperPolynomial operator-(const SuperPolynomial& g) const;
  SuperPolynomial operator*(const SuperPolynomial& g) const;
  SuperPolynomial scaled(const Rat& c) const;
  SuperPolynomial shifted_hbar(int k) const;  // multiply by hbar^k

  bool definite_parity(bool* odd_out) const;
  SuperPolynomial parity_part(bool odd) const;

  // Substitute each generator by a degree-one polynomial (rows of `images`
  // indexed by generator). Used by the Darboux-independence checks.
  SuperPolynomial substitute(const std::vector<SuperPolynomial>& images) const;

  bool operator==(const SuperPolynomial& g) const;

  std::string to_canonical_string() const;

 private:
  void check_compatible(const SuperPolynomial& g) const;

  SpacePtr space_;
  Truncation trunc_{};
  std::map<TermKey, Rat> terms_;
};

// d/dy_i with y_i moved to the front of the monomial first (left
// derivative); d/dx_i is the plain polynomial derivative.
SuperPolynomial derive_odd(const SuperPolynomial& f, int gen_index);
SuperPolynomial derive_even(const SuperPolynomial& f, int gen_index);

// BV Laplacian: sum over Darboux pairs of d/dx_i d/dy_i.
SuperPolynomial delta(const SuperPolynomial& f);

// Antibracket {f,g} = Delta(fg) - Delta(f) g - (-1)^{|f|} f Delta(g),
// extended to inhomogeneous f by parity splitting.
SuperPolynomial bracket(const SuperPolynomial& f, const SuperPolynomial& g);

// 1/2 {S,S} + hbar Delta S. Throws E_PARITY if S has an odd component.
SuperPolynomial qme_residual(const SuperPolynomial& S);

struct HomotopyResiduals {
  std::vector<SuperPolynomial> residual1;  // per node
  std::vector<SuperPolynomial> residual2;  // per interior node
};

// Nodewise master-homotopy residuals on a uniform grid over [0,1].
// residual1(t) = 1/2 {A,A} + hbar Delta A; residual2(t) = dA/dt + {B,A}
// + hbar Delta B with a central second-order difference for dA/dt.
HomotopyResiduals homotopy_residual(const std::vector<SuperPolynomial>& A,
                                    const std::vector<SuperPolynomial>& B);

}  // namespace bvgf
