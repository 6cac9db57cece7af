#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "bvgf/rational.hpp"

namespace bvgf {

struct LinkMark {
  int circle = 0;
  int position = 0;  // cyclic slot on the circle
  auto operator<=>(const LinkMark&) const = default;
};

// Multigraph with trivalent vertices 0..n_trivalent-1; univalent vertices
// (link mode) continue from n_trivalent and carry marks. Edges are
// unordered vertex pairs, loops allowed on trivalent vertices.
struct Graph {
  int n_trivalent = 0;
  std::vector<LinkMark> marks;                // one per univalent vertex
  std::vector<std::array<int, 2>> edges;      // u <= v
  std::vector<int> legs;                      // per trivalent vertex
  std::vector<bool> univalent_external;       // univalent leg flags

  Int aut_order = 0;   // filled by enumeration / automorphism_order
  long loop_count = 0; // per the requested mode

  int n_univalent() const { return static_cast<int>(marks.size()); }
  int n_vertices() const { return n_trivalent + n_univalent(); }
  int n_internal_edges() const { return static_cast<int>(edges.size()); }
  int n_external() const;
  bool has_tadpole() const;
  int degree_of(int v) const;  // half-edges incident (loops count twice)
  int components() const;
  bool connected() const;
  void check_valid() const;  // throws E_SCHEMA on degree violations
};

// Canonical text encoding. Vertex permutations of the trivalent part are
// always factored out; `rotations` additionally quotients by cyclic
// rotation of every circle's marks (abstract link classes).
std::string canonical_encoding(const Graph& g, bool rotations = true);

// Order of the automorphism group at the half-edge level: vertex
// symmetries times parallel-edge, loop and leg permutations.
Int automorphism_order(const Graph& g, bool rotations = true);

long loop_number_action(const Graph& g);  // E - V + components
long loop_number_link(const Graph& g);    // E_in - V_trivalent

struct EnumOptions {
  bool allow_tadpoles = true;
  bool connected_only = true;
  int vertex_bound = 6;
};

// One representative per isomorphism class, sorted by canonical encoding,
// each with aut_order and action-mode loop_count.
std::vector<Graph> enumerate_graphs(int n_trivalent, int n_external,
                                    const EnumOptions& opt = {});

// Link-mode classes: marks are cyclically ordered per circle, rotations
// are isomorphisms, every connected component touches the link. When
// `rotations` is false the marks are pinned pointwise (embedded classes,
// used by the observable sum over concrete mark slots).
std::vector<Graph> enumerate_link_graphs(int circles,
                                         const std::vector<int>& univalent_per_circle,
                                         int n_trivalent, int n_external,
                                         bool rotations = true,
                                         const EnumOptions& opt = {});

// Explicit pairing of trivalent half-edges (ids 3v..3v+2); unmatched ids
// are external legs.
struct HalfEdgeMatching {
  int n_trivalent = 0;
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> external;
};

void for_each_matching(int n_trivalent, int n_external,
                       const std::function<void(const HalfEdgeMatching&)>& fn);

Graph matching_to_graph(const HalfEdgeMatching& m);

// Sum of amplitude over all pairings of half-edges divided by n! 6^n;
// equals the class sum weighted by 1/|Aut| for class-constant amplitudes.
Rat wick_sum_oracle(int n_trivalent, int n_external,
                    const std::function<Rat(const HalfEdgeMatching&)>& amplitude);

Int factorial(int n);

}  // namespace bvgf
