#include "bvgf/superpoly.hpp"

#include <algorithm>
#include <sstream>

namespace bvgf {

Rat rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw Error("E_SCHEMA", "zero denominator in '" + s + "'");
    return Rat(num, den);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error("E_SCHEMA", "malformed rational '" + s + "'");
  }
}

void OddSymplecticSpace::validate() const {
  std::vector<int> seen(gens.size(), 0);
  for (const auto& p : pairs) {
    if (p.x < 0 || p.x >= dim() || p.y < 0 || p.y >= dim())
      throw Error("E_SCHEMA", "darboux pair index out of range");
    ++seen[p.x];
    ++seen[p.y];
    if (gens[p.x].odd || !gens[p.y].odd)
      throw Error("E_SCHEMA", "darboux pair must be (even, odd)");
    if (gens[p.x].degree + gens[p.y].degree != 1)
      throw Error("E_SCHEMA", "darboux pair degrees must sum to 1");
  }
  for (size_t i = 0; i < seen.size(); ++i)
    if (seen[i] != 1)
      throw Error("E_SCHEMA",
                  "generator '" + gens[i].name + "' not in exactly one pair");
}

bool OddSymplecticSpace::same_as(const OddSymplecticSpace& o) const {
  if (gens.size() != o.gens.size() || pairs.size() != o.pairs.size())
    return false;
  for (size_t i = 0; i < gens.size(); ++i) {
    if (gens[i].name != o.gens[i].name || gens[i].odd != o.gens[i].odd ||
        gens[i].degree != o.gens[i].degree)
      return false;
  }
  for (size_t i = 0; i < pairs.size(); ++i)
    if (pairs[i].x != o.pairs[i].x || pairs[i].y != o.pairs[i].y) return false;
  return true;
}

int OddSymplecticSpace::find(const std::string& name) const {
  for (size_t i = 0; i < gens.size(); ++i)
    if (gens[i].name == name) return static_cast<int>(i);
  return -1;
}

int Monomial::degree() const {
  int d = static_cast<int>(odds.size());
  for (const auto& [i, m] : evens) d += m;
  return d;
}

SuperPolynomial SuperPolynomial::constant(SpacePtr space, Truncation t,
                                          const Rat& c) {
  SuperPolynomial p(std::move(space), t);
  p.add_term(TermKey{}, c);
  return p;
}

SuperPolynomial SuperPolynomial::generator(SpacePtr space, Truncation t,
                                           int gen_index) {
  SuperPolynomial p(std::move(space), t);
  TermKey k;
  if (p.space_->gens.at(gen_index).odd)
    k.mono.odds.push_back(gen_index);
  else
    k.mono.evens.emplace_back(gen_index, 1);
  p.add_term(k, Rat(1));
  return p;
}

Rat SuperPolynomial::coefficient(const TermKey& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? Rat(0) : it->second;
}

Rat SuperPolynomial::max_abs_coefficient() const {
  Rat m(0);
  for (const auto& [k, c] : terms_) {
    Rat a = c < 0 ? Rat(-c) : c;
    if (a > m) m = a;
  }
  return m;
}

void SuperPolynomial::add_term(const TermKey& key, const Rat& c) {
  if (c == 0) return;
  if (key.hbar > trunc_.hbar || key.mono.degree() > trunc_.degree) return;
  auto [it, inserted] = terms_.emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void SuperPolynomial::add_word(const std::vector<int>& word, int hbar,
                               const Rat& c) {
  if (c == 0) return;
  TermKey key;
  key.hbar = hbar;
  std::vector<int> odds;
  std::map<int, int> evens;
  int sign = 1;
  // Koszul sign: odd letters are sorted by counting inversions; even
  // letters commute freely.
  for (int g : word) {
    if (space_->gens.at(g).odd) {
      int inv = 0;
      for (int o : odds)
        if (o > g) ++inv;
      if (std::find(odds.begin(), odds.end(), g) != odds.end()) return;  // y^2
      odds.push_back(g);
      if (inv % 2) sign = -sign;
    } else {
      ++evens[g];
    }
  }
  std::sort(odds.begin(), odds.end());
  key.mono.odds = std::move(odds);
  key.mono.evens.assign(evens.begin(), evens.end());
  add_term(key, sign > 0 ? c : Rat(-c));
}

void SuperPolynomial::check_compatible(const SuperPolynomial& g) const {
  if (!space_ || !g.space_ || !space_->same_as(*g.space_) ||
      !(trunc_ == g.trunc_))
    throw Error("E_INCOMPATIBLE", "operands over different spaces or truncations");
}

SuperPolynomial SuperPolynomial::operator+(const SuperPolynomial& g) const {
  check_compatible(g);
  SuperPolynomial r = *this;
  for (const auto& [k, c] : g.terms_) r.add_term(k, c);
  return r;
}

SuperPolynomial SuperPolynomial::operator-(const SuperPolynomial& g) const {
  check_compatible(g);
  SuperPolynomial r = *this;
  for (const auto& [k, c] : g.terms_) r.add_term(k, -c);
  return r;
}

SuperPolynomial SuperPolynomial::scaled(const Rat& c) const {
  SuperPolynomial r(space_, trunc_);
  if (c == 0) return r;
  for (const auto& [k, v] : terms_) r.terms_.emplace(k, v * c);
  return r;
}

SuperPolynomial SuperPolynomial::shifted_hbar(int k) const {
  SuperPolynomial r(space_, trunc_);
  for (const auto& [key, c] : terms_) {
    TermKey nk = key;
    nk.hbar += k;
    r.add_term(nk, c);
  }
  return r;
}

namespace {

// Multiply two canonical monomials; returns false if an odd generator
// squares. Sign counts transpositions of odd letters across the merge.
bool mul_mono(const Monomial& a, const Monomial& b, Monomial* out, int* sign) {
  *sign = 1;
  // inversions: pairs (p in a.odds, q in b.odds) with q < p
  for (int p : a.odds)
    for (int q : b.odds) {
      if (q == p) return false;
      if (q < p) *sign = -*sign;
    }
  out->odds.resize(a.odds.size() + b.odds.size());
  std::merge(a.odds.begin(), a.odds.end(), b.odds.begin(), b.odds.end(),
             out->odds.begin());
  out->evens.clear();
  auto ia = a.evens.begin();
  auto ib = b.evens.begin();
  while (ia != a.evens.end() || ib != b.evens.end()) {
    if (ib == b.evens.end() || (ia != a.evens.end() && ia->first < ib->first))
      out->evens.push_back(*ia++);
    else if (ia == a.evens.end() || ib->first < ia->first)
      out->evens.push_back(*ib++);
    else {
      out->evens.emplace_back(ia->first, ia->second + ib->second);
      ++ia;
      ++ib;
    }
  }
  return true;
}

}  // namespace

SuperPolynomial SuperPolynomial::operator*(const SuperPolynomial& g) const {
  check_compatible(g);
  SuperPolynomial r(space_, trunc_);
  for (const auto& [ka, ca] : terms_) {
    for (const auto& [kb, cb] : g.terms_) {
      int h = ka.hbar + kb.hbar;
      if (h > trunc_.hbar) continue;
      if (ka.mono.degree() + kb.mono.degree() > trunc_.degree) continue;
      TermKey key;
      key.hbar = h;
      int sign = 1;
      if (!mul_mono(ka.mono, kb.mono, &key.mono, &sign)) continue;
      r.add_term(key, sign > 0 ? Rat(ca * cb) : Rat(-(ca * cb)));
    }
  }
  return r;
}

bool SuperPolynomial::definite_parity(bool* odd_out) const {
  bool seen = false, odd = false;
  for (const auto& [k, c] : terms_) {
    if (!seen) {
      odd = k.mono.odd_parity();
      seen = true;
    } else if (k.mono.odd_parity() != odd) {
      return false;
    }
  }
  if (odd_out) *odd_out = odd;
  return true;
}

SuperPolynomial SuperPolynomial::parity_part(bool odd) const {
  SuperPolynomial r(space_, trunc_);
  for (const auto& [k, c] : terms_)
    if (k.mono.odd_parity() == odd) r.terms_.emplace(k, c);
  return r;
}

SuperPolynomial SuperPolynomial::substitute(
    const std::vector<SuperPolynomial>& images) const {
  if (images.size() != space_->gens.size())
    throw Error("E_INCOMPATIBLE", "substitution needs one image per generator");
  const SpacePtr& sp = images.empty() ? space_ : images[0].space();
  Truncation tr = images.empty() ? trunc_ : images[0].truncation();
  SuperPolynomial r(sp, tr);
  for (const auto& [k, c] : terms_) {
    SuperPolynomial t = SuperPolynomial::constant(sp, tr, c).shifted_hbar(k.hbar);
    for (const auto& [g, m] : k.mono.evens)
      for (int j = 0; j < m; ++j) t = t * images[g];
    for (int g : k.mono.odds) t = t * images[g];
    r = r + t;
  }
  return r;
}

bool SuperPolynomial::operator==(const SuperPolynomial& g) const {
  return terms_ == g.terms_;
}

std::string SuperPolynomial::to_canonical_string() const {
  std::ostringstream os;
  if (terms_.empty()) return "0";
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << rat_to_string(c) << ")";
    if (k.hbar > 0) os << "*h^" << k.hbar;
    for (const auto& [g, m] : k.mono.evens) {
      os << "*" << space_->gens[g].name;
      if (m > 1) os << "^" << m;
    }
    for (int g : k.mono.odds) os << "*" << space_->gens[g].name;
  }
  return os.str();
}

SuperPolynomial derive_odd(const SuperPolynomial& f, int gen_index) {
  SuperPolynomial r(f.space(), f.truncation());
  for (const auto& [k, c] : f.terms()) {
    auto it = std::find(k.mono.odds.begin(), k.mono.odds.end(), gen_index);
    if (it == k.mono.odds.end()) continue;
    int pos = static_cast<int>(it - k.mono.odds.begin());
    TermKey nk = k;
    nk.mono.odds.erase(nk.mono.odds.begin() + pos);
    r.add_term(nk, pos % 2 == 0 ? c : Rat(-c));
  }
  return r;
}

SuperPolynomial derive_even(const SuperPolynomial& f, int gen_index) {
  SuperPolynomial r(f.space(), f.truncation());
  for (const auto& [k, c] : f.terms()) {
    for (size_t i = 0; i < k.mono.evens.size(); ++i) {
      if (k.mono.evens[i].first != gen_index) continue;
      TermKey nk = k;
      int m = nk.mono.evens[i].second;
      if (m == 1)
        nk.mono.evens.erase(nk.mono.evens.begin() + i);
      else
        nk.mono.evens[i].second = m - 1;
      r.add_term(nk, c * m);
    }
  }
  return r;
}

SuperPolynomial delta(const SuperPolynomial& f) {
  SuperPolynomial r(f.space(), f.truncation());
  for (const auto& p : f.space()->pairs)
    r = r + derive_even(derive_odd(f, p.y), p.x);
  return r;
}

SuperPolynomial bracket(const SuperPolynomial& f, const SuperPolynomial& g) {
  // (-1)^{|f|} (Delta(fg) - Delta(f) g - (-1)^{|f|} f Delta(g)); the parity
  // prefactor makes the bracket an odd Poisson bracket with the usual
  // graded antisymmetry. It is invisible whenever f is even, in particular
  // in every master-equation residual.
  SuperPolynomial r(f.space(), f.truncation());
  for (bool odd : {false, true}) {
    SuperPolynomial fp = f.parity_part(odd);
    if (fp.is_zero()) continue;
    SuperPolynomial t = delta(fp * g) - delta(fp) * g;
    SuperPolynomial fdg = fp * delta(g);
    r = r + (odd ? (t + fdg).scaled(Rat(-1)) : t - fdg);
  }
  return r;
}

SuperPolynomial qme_residual(const SuperPolynomial& S) {
  bool odd = false;
  if (!S.definite_parity(&odd) || odd)
    throw Error("E_PARITY", "quantum master equation needs an even action");
  return bracket(S, S).scaled(Rat(1, 2)) + delta(S).shifted_hbar(1);
}

HomotopyResiduals homotopy_residual(const std::vector<SuperPolynomial>& A,
                                    const std::vector<SuperPolynomial>& B) {
  if (A.size() < 2 || A.size() != B.size())
    throw Error("E_GRID", "need matching grids with at least 2 nodes");
  size_t n = A.size();
  Rat dt(1, static_cast<long>(n - 1));
  HomotopyResiduals out;
  out.residual1.reserve(n);
  for (size_t i = 0; i < n; ++i) out.residual1.push_back(qme_residual(A[i]));
  for (size_t i = 1; i + 1 < n; ++i) {
    SuperPolynomial adot = (A[i + 1] - A[i - 1]).scaled(Rat(1) / (2 * dt));
    out.residual2.push_back(adot + bracket(B[i], A[i]) +
                            delta(B[i]).shifted_hbar(1));
  }
  return out;
}

}  // namespace bvgf
