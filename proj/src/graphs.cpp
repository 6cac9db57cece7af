#include "bvgf/graphs.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace bvgf {

Int factorial(int n) {
  Int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

int Graph::n_external() const {
  int k = std::accumulate(legs.begin(), legs.end(), 0);
  for (bool b : univalent_external) k += b ? 1 : 0;
  return k;
}

bool Graph::has_tadpole() const {
  for (const auto& e : edges)
    if (e[0] == e[1]) return true;
  return false;
}

int Graph::degree_of(int v) const {
  int d = (v < n_trivalent) ? legs[v]
                            : (univalent_external[v - n_trivalent] ? 1 : 0);
  for (const auto& e : edges) {
    if (e[0] == v) ++d;
    if (e[1] == v) ++d;
  }
  return d;
}

int Graph::components() const {
  int n = n_vertices();
  if (n == 0) return 0;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges) parent[find(e[0])] = find(e[1]);
  std::set<int> roots;
  for (int v = 0; v < n; ++v) roots.insert(find(v));
  return static_cast<int>(roots.size());
}

bool Graph::connected() const { return n_vertices() <= 1 || components() == 1; }

void Graph::check_valid() const {
  if (static_cast<int>(legs.size()) != n_trivalent)
    throw Error("E_SCHEMA", "legs vector size mismatch");
  if (univalent_external.size() != marks.size())
    throw Error("E_SCHEMA", "univalent flags size mismatch");
  for (int v = 0; v < n_trivalent; ++v)
    if (degree_of(v) != 3)
      throw Error("E_SCHEMA", "trivalent vertex of degree != 3");
  for (int u = 0; u < n_univalent(); ++u)
    if (degree_of(n_trivalent + u) != 1)
      throw Error("E_SCHEMA", "univalent vertex of degree != 1");
}

long loop_number_action(const Graph& g) {
  return g.n_internal_edges() - g.n_vertices() + g.components();
}

long loop_number_link(const Graph& g) {
  return g.n_internal_edges() - g.n_trivalent;
}

namespace {

struct Relabeling {
  std::vector<int> trivalent;  // old -> new
  std::vector<int> rotation;   // per circle
  std::vector<int> circle_sizes;
};

std::string encode_under(const Graph& g, const Relabeling& rl) {
  int nt = g.n_trivalent;
  std::vector<std::pair<LinkMark, int>> uni;  // rotated mark -> old id
  for (int u = 0; u < g.n_univalent(); ++u) {
    LinkMark m = g.marks[u];
    int size = rl.circle_sizes.empty() ? 0 : rl.circle_sizes[m.circle];
    if (size > 0) m.position = (m.position + rl.rotation[m.circle]) % size;
    uni.emplace_back(m, u);
  }
  std::sort(uni.begin(), uni.end());
  std::vector<int> uni_new(g.n_univalent());
  for (size_t i = 0; i < uni.size(); ++i)
    uni_new[uni[i].second] = static_cast<int>(i);

  auto map_vertex = [&](int v) {
    return v < nt ? rl.trivalent[v] : nt + uni_new[v - nt];
  };
  std::vector<std::array<int, 2>> edges;
  for (const auto& e : g.edges) {
    int a = map_vertex(e[0]), b = map_vertex(e[1]);
    if (a > b) std::swap(a, b);
    edges.push_back({a, b});
  }
  std::sort(edges.begin(), edges.end());
  std::vector<int> legs(nt);
  for (int v = 0; v < nt; ++v) legs[rl.trivalent[v]] = g.legs[v];
  std::vector<int> uext(g.n_univalent());
  for (int u = 0; u < g.n_univalent(); ++u)
    uext[uni_new[u]] = g.univalent_external[u] ? 1 : 0;

  std::ostringstream os;
  os << "t" << nt << ";e[";
  for (const auto& e : edges) os << e[0] << "-" << e[1] << ",";
  os << "];l[";
  for (int v : legs) os << v << ",";
  os << "];m[";
  for (const auto& [m, old] : uni) os << m.circle << ":" << m.position << ",";
  os << "];x[";
  for (int f : uext) os << f << ",";
  os << "]";
  return os.str();
}

std::vector<int> circle_sizes_of(const Graph& g) {
  std::vector<int> sizes;
  for (const auto& m : g.marks) {
    if (m.circle >= static_cast<int>(sizes.size()))
      sizes.resize(m.circle + 1, 0);
    sizes[m.circle] = std::max(sizes[m.circle], m.position + 1);
  }
  return sizes;
}

template <typename Fn>
void for_each_relabeling(const Graph& g, bool rotations, Fn&& fn) {
  std::vector<int> perm(g.n_trivalent);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> sizes = circle_sizes_of(g);
  do {
    Relabeling rl;
    rl.trivalent = perm;
    rl.circle_sizes = sizes;
    rl.rotation.assign(sizes.size(), 0);
    if (!rotations || sizes.empty()) {
      fn(rl);
    } else {
      while (true) {
        fn(rl);
        size_t c = 0;
        for (; c < sizes.size(); ++c) {
          if (sizes[c] == 0) continue;
          if (++rl.rotation[c] < sizes[c]) break;
          rl.rotation[c] = 0;
        }
        if (c == sizes.size()) break;
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
}

Int lift_factor(const Graph& g) {
  std::map<std::array<int, 2>, int> mult;
  for (const auto& e : g.edges) ++mult[e];
  Int f = 1;
  for (const auto& [e, m] : mult) {
    f *= factorial(m);
    if (e[0] == e[1])  // each loop can also flip its two half-edges
      for (int i = 0; i < m; ++i) f *= 2;
  }
  for (int v = 0; v < g.n_trivalent; ++v) f *= factorial(g.legs[v]);
  return f;
}

Relabeling identity_relabeling(const Graph& g) {
  Relabeling id;
  id.trivalent.resize(g.n_trivalent);
  std::iota(id.trivalent.begin(), id.trivalent.end(), 0);
  id.circle_sizes = circle_sizes_of(g);
  id.rotation.assign(id.circle_sizes.size(), 0);
  return id;
}

void canonicalize_in_place(Graph& g, const std::string& enc) {
  Graph out;
  out.n_trivalent = g.n_trivalent;
  std::string s = enc;
  auto grab = [&](const std::string& tag) {
    auto p = s.find(tag + "[");
    auto q = s.find(']', p);
    return s.substr(p + tag.size() + 1, q - p - tag.size() - 1);
  };
  {
    std::istringstream is(grab(";e"));
    std::string tok;
    while (std::getline(is, tok, ',')) {
      if (tok.empty()) continue;
      auto dash = tok.find('-');
      out.edges.push_back(
          {std::stoi(tok.substr(0, dash)), std::stoi(tok.substr(dash + 1))});
    }
  }
  {
    std::istringstream is(grab(";l"));
    std::string tok;
    while (std::getline(is, tok, ','))
      if (!tok.empty()) out.legs.push_back(std::stoi(tok));
  }
  {
    std::istringstream is(grab(";m"));
    std::string tok;
    while (std::getline(is, tok, ',')) {
      if (tok.empty()) continue;
      auto colon = tok.find(':');
      out.marks.push_back(
          {std::stoi(tok.substr(0, colon)), std::stoi(tok.substr(colon + 1))});
    }
  }
  {
    std::istringstream is(grab(";x"));
    std::string tok;
    while (std::getline(is, tok, ','))
      if (!tok.empty()) out.univalent_external.push_back(tok == "1");
  }
  g = std::move(out);
}

}  // namespace

std::string canonical_encoding(const Graph& g, bool rotations) {
  std::string best;
  for_each_relabeling(g, rotations, [&](const Relabeling& rl) {
    std::string s = encode_under(g, rl);
    if (best.empty() || s < best) best = s;
  });
  if (best.empty()) best = encode_under(g, identity_relabeling(g));
  return best;
}

Int automorphism_order(const Graph& g, bool rotations) {
  std::string self = encode_under(g, identity_relabeling(g));
  Int stab = 0;
  for_each_relabeling(g, rotations, [&](const Relabeling& rl) {
    if (encode_under(g, rl) == self) ++stab;
  });
  return stab * lift_factor(g);
}

std::vector<Graph> enumerate_graphs(int n_trivalent, int n_external,
                                    const EnumOptions& opt) {
  if (n_trivalent > opt.vertex_bound)
    throw Error("E_RESOURCE", "vertex count exceeds the configured bound");
  std::vector<Graph> out;
  if (n_trivalent == 0) return out;  // every graph has at least one vertex
  std::map<std::string, Graph> classes;

  int n = n_trivalent;
  std::vector<int> loops(n), legs(n);
  std::function<void(int, int)> assign_legs = [&](int v, int remaining_legs) {
    if (v == n) {
      if (remaining_legs != 0) return;
      std::vector<int> rem(n);
      for (int i = 0; i < n; ++i) {
        rem[i] = 3 - 2 * loops[i] - legs[i];
        if (rem[i] < 0) return;
      }
      std::vector<std::array<int, 2>> edges;
      for (int i = 0; i < n; ++i)
        for (int l = 0; l < loops[i]; ++l) edges.push_back({i, i});
      std::function<void(int, int)> fill = [&](int u, int v2) {
        if (u == n) {
          for (int i = 0; i < n; ++i)
            if (rem[i] != 0) return;
          Graph g;
          g.n_trivalent = n;
          g.edges = edges;
          std::sort(g.edges.begin(), g.edges.end());
          g.legs = legs;
          if (opt.connected_only && !g.connected()) return;
          std::string enc = canonical_encoding(g, true);
          if (classes.count(enc)) return;
          canonicalize_in_place(g, enc);
          g.aut_order = automorphism_order(g, true);
          g.loop_count = loop_number_action(g);
          classes.emplace(enc, std::move(g));
          return;
        }
        if (v2 == n) {
          fill(u + 1, u + 2);
          return;
        }
        int maxm = std::min(rem[u], rem[v2]);
        for (int m = 0; m <= maxm; ++m) {
          if (m > 0) {
            rem[u] -= m;
            rem[v2] -= m;
            for (int t = 0; t < m; ++t) edges.push_back({u, v2});
          }
          fill(u, v2 + 1);
          if (m > 0) {
            rem[u] += m;
            rem[v2] += m;
            for (int t = 0; t < m; ++t) edges.pop_back();
          }
        }
      };
      fill(0, 1);
      return;
    }
    for (int k = 0; k + 2 * loops[v] <= 3 && k <= remaining_legs; ++k) {
      legs[v] = k;
      assign_legs(v + 1, remaining_legs - k);
    }
    legs[v] = 0;
  };
  std::function<void(int)> assign_loops = [&](int v) {
    if (v == n) {
      assign_legs(0, n_external);
      return;
    }
    int maxl = opt.allow_tadpoles ? 1 : 0;
    for (int l = 0; l <= maxl; ++l) {
      loops[v] = l;
      assign_loops(v + 1);
    }
    loops[v] = 0;
  };
  assign_loops(0);

  for (auto& [enc, g] : classes) out.push_back(std::move(g));
  return out;  // map iteration is sorted by encoding already
}

std::vector<Graph> enumerate_link_graphs(
    int circles, const std::vector<int>& univalent_per_circle, int n_trivalent,
    int n_external, bool rotations, const EnumOptions& opt) {
  if (n_trivalent > opt.vertex_bound)
    throw Error("E_RESOURCE", "vertex count exceeds the configured bound");
  if (static_cast<int>(univalent_per_circle.size()) != circles)
    throw Error("E_SCHEMA", "univalent count list does not match circles");
  for (int c = 0; c < circles; ++c)
    if (univalent_per_circle[c] < 1)
      throw Error("E_SCHEMA", "every circle needs at least one univalent vertex");

  std::vector<LinkMark> marks;
  for (int c = 0; c < circles; ++c)
    for (int p = 0; p < univalent_per_circle[c]; ++p) marks.push_back({c, p});
  int nu = static_cast<int>(marks.size());
  int nt = n_trivalent;
  int H = 3 * nt + nu;
  auto vertex_of = [&](int h) { return h < 3 * nt ? h / 3 : nt + (h - 3 * nt); };

  std::map<std::string, Graph> classes;
  std::vector<int> state(H, -2);  // -2 free, -1 external, >=0 partner
  std::function<void(int, int)> rec = [&](int h, int ext_left) {
    if (h == H) {
      if (ext_left != 0) return;
      Graph g;
      g.n_trivalent = nt;
      g.marks = marks;
      g.legs.assign(nt, 0);
      g.univalent_external.assign(nu, false);
      for (int i = 0; i < H; ++i) {
        if (state[i] == -1) {
          if (i < 3 * nt)
            ++g.legs[i / 3];
          else
            g.univalent_external[i - 3 * nt] = true;
        } else if (state[i] > i) {
          int a = vertex_of(i), b = vertex_of(state[i]);
          if (a > b) std::swap(a, b);
          g.edges.push_back({a, b});
        }
      }
      std::sort(g.edges.begin(), g.edges.end());
      // every trivalent vertex must connect to the link
      {
        int n = g.n_vertices();
        std::vector<int> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int x) {
          while (parent[x] != x) x = parent[x] = parent[parent[x]];
          return x;
        };
        for (const auto& e : g.edges) parent[find(e[0])] = find(e[1]);
        for (int v = 0; v < nt; ++v) {
          bool ok = false;
          for (int u = 0; u < nu; ++u)
            if (find(nt + u) == find(v)) ok = true;
          if (!ok) return;
        }
      }
      if (!opt.allow_tadpoles && g.has_tadpole()) return;
      std::string enc = canonical_encoding(g, rotations);
      if (classes.count(enc)) return;
      g.aut_order = automorphism_order(g, rotations);
      g.loop_count = loop_number_link(g);
      classes.emplace(enc, std::move(g));
      return;
    }
    if (state[h] != -2) {
      rec(h + 1, ext_left);
      return;
    }
    if (ext_left > 0) {
      state[h] = -1;
      rec(h + 1, ext_left - 1);
      state[h] = -2;
    }
    for (int j = h + 1; j < H; ++j) {
      if (state[j] != -2) continue;
      state[h] = j;
      state[j] = h;
      rec(h + 1, ext_left);
      state[h] = state[j] = -2;
    }
  };
  rec(0, n_external);

  std::vector<Graph> out;
  for (auto& [enc, g] : classes) out.push_back(std::move(g));
  return out;
}

void for_each_matching(int n_trivalent, int n_external,
                       const std::function<void(const HalfEdgeMatching&)>& fn) {
  int H = 3 * n_trivalent;
  std::vector<int> state(H, -2);
  HalfEdgeMatching m;
  m.n_trivalent = n_trivalent;
  std::function<void(int, int)> rec = [&](int h, int ext_left) {
    if (h == H) {
      if (ext_left != 0) return;
      m.pairs.clear();
      m.external.clear();
      for (int i = 0; i < H; ++i) {
        if (state[i] == -1)
          m.external.push_back(i);
        else if (state[i] > i)
          m.pairs.emplace_back(i, state[i]);
      }
      fn(m);
      return;
    }
    if (state[h] != -2) {
      rec(h + 1, ext_left);
      return;
    }
    if (ext_left > 0) {
      state[h] = -1;
      rec(h + 1, ext_left - 1);
      state[h] = -2;
    }
    for (int j = h + 1; j < H; ++j) {
      if (state[j] != -2) continue;
      state[h] = j;
      state[j] = h;
      rec(h + 1, ext_left);
      state[h] = state[j] = -2;
    }
  };
  rec(0, n_external);
}

Graph matching_to_graph(const HalfEdgeMatching& m) {
  Graph g;
  g.n_trivalent = m.n_trivalent;
  g.legs.assign(m.n_trivalent, 0);
  for (int h : m.external) ++g.legs[h / 3];
  for (const auto& [a, b] : m.pairs) {
    int u = a / 3, v = b / 3;
    if (u > v) std::swap(u, v);
    g.edges.push_back({u, v});
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

Rat wick_sum_oracle(
    int n_trivalent, int n_external,
    const std::function<Rat(const HalfEdgeMatching&)>& amplitude) {
  if (n_trivalent > 4)
    throw Error("E_RESOURCE", "matching oracle is limited to 4 vertices");
  Rat sum(0);
  for_each_matching(n_trivalent, n_external,
                    [&](const HalfEdgeMatching& m) { sum += amplitude(m); });
  Int denom = factorial(n_trivalent);
  for (int i = 0; i < n_trivalent; ++i) denom *= 6;
  return sum / Rat(denom);
}

}  // namespace bvgf
