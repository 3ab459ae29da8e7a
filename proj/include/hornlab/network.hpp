#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hornlab/rational.hpp"

namespace hornlab {

enum class EdgeTag { horizontal, diagonal, sink_horizontal };

inline std::string to_string(EdgeTag tag) {
  switch (tag) {
    case EdgeTag::horizontal: return "horizontal";
    case EdgeTag::diagonal: return "diagonal";
    case EdgeTag::sink_horizontal: return "sink-horizontal";
  }
  return "unknown";
}

inline EdgeTag edge_tag_from_string(const std::string& s) {
  if (s == "horizontal") return EdgeTag::horizontal;
  if (s == "diagonal") return EdgeTag::diagonal;
  if (s == "sink-horizontal") return EdgeTag::sink_horizontal;
  throw std::invalid_argument("unknown edge tag: " + s);
}

struct Node {
  Rational x;
  Rational y;
};

struct Edge {
  std::size_t tail;
  std::size_t head;
  EdgeTag tag;
};

/// Edge weights indexed by the network's canonical edge order.
template <class T>
using Weighting = std::vector<T>;

class NetworkError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Oriented planar graph in a strip with n sources on the left boundary and
/// n sinks on the right boundary, both at heights 1..n.
///
/// Construction canonicalizes: nodes are sorted by (x, y) and edges
/// lexicographically by (tail.x, tail.y, head.x, head.y). Weightings, path
/// enumeration and serialization all use this order.
class PlanarNetwork {
 public:
  PlanarNetwork(std::size_t rank, std::vector<Node> nodes, std::vector<Edge> edges) : rank_(rank) {
    if (rank == 0) throw NetworkError("network rank must be positive");
    canonicalize(std::move(nodes), std::move(edges));
    validate();
  }

  std::size_t rank() const { return rank_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Node& node(std::size_t v) const { return nodes_.at(v); }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }
  std::size_t num_edges() const { return edges_.size(); }

  /// Node index of the source / sink at height h (1-based).
  std::size_t source(std::size_t h) const { return sources_.at(h - 1); }
  std::size_t sink(std::size_t h) const { return sinks_.at(h - 1); }

  /// Height of a source/sink node, or 0 if the node is not one.
  std::size_t source_height(std::size_t v) const { return source_height_[v]; }
  std::size_t sink_height(std::size_t v) const { return sink_height_[v]; }

  const std::vector<std::size_t>& out_edges(std::size_t v) const { return out_[v]; }
  const std::vector<std::size_t>& in_edges(std::size_t v) const { return in_[v]; }

  const Rational& x_min() const { return nodes_[sources_[0]].x; }
  const Rational& x_max() const { return nodes_[sinks_[0]].x; }

  std::size_t count_tag(EdgeTag tag) const {
    return static_cast<std::size_t>(
        std::count_if(edges_.begin(), edges_.end(), [tag](const Edge& e) { return e.tag == tag; }));
  }

 private:
  void canonicalize(std::vector<Node> nodes, std::vector<Edge> edges) {
    std::vector<std::size_t> order(nodes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (nodes[a].x != nodes[b].x) return nodes[a].x < nodes[b].x;
      return nodes[a].y < nodes[b].y;
    });
    std::vector<std::size_t> remap(nodes.size());
    nodes_.reserve(nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      remap[order[i]] = i;
      nodes_.push_back(nodes[order[i]]);
    }
    for (std::size_t i = 1; i < nodes_.size(); ++i)
      if (nodes_[i].x == nodes_[i - 1].x && nodes_[i].y == nodes_[i - 1].y)
        throw NetworkError("duplicate node coordinates");
    for (auto& e : edges) {
      if (e.tail >= nodes.size() || e.head >= nodes.size()) throw NetworkError("edge endpoint out of range");
      e.tail = remap[e.tail];
      e.head = remap[e.head];
    }
    // Sorted node order is (x, y), so comparing indices compares coordinates.
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
      if (a.tail != b.tail) return a.tail < b.tail;
      return a.head < b.head;
    });
    for (std::size_t i = 1; i < edges.size(); ++i)
      if (edges[i].tail == edges[i - 1].tail && edges[i].head == edges[i - 1].head)
        throw NetworkError("parallel edges are not allowed");
    edges_ = std::move(edges);
  }

  void validate() {
    if (nodes_.empty()) throw NetworkError("network has no nodes");
    const std::size_t nv = nodes_.size();
    out_.assign(nv, {});
    in_.assign(nv, {});
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const Edge& ed = edges_[e];
      if (!(nodes_[ed.tail].x < nodes_[ed.head].x))
        throw NetworkError("edges must point strictly left to right");
      out_[ed.tail].push_back(e);
      in_[ed.head].push_back(e);
    }
    const Rational& lo = nodes_.front().x;
    const Rational& hi = nodes_.back().x;
    source_height_.assign(nv, 0);
    sink_height_.assign(nv, 0);
    sources_.assign(rank_, nv);
    sinks_.assign(rank_, nv);
    auto boundary_height = [&](std::size_t v) -> std::size_t {
      const Rational& y = nodes_[v].y;
      if (y.get_den() != 1 || y < 1 || y > static_cast<long>(rank_))
        throw NetworkError("boundary nodes must sit at integer heights 1..n");
      return static_cast<std::size_t>(y.get_num().get_ui());
    };
    for (std::size_t v = 0; v < nv; ++v) {
      if (nodes_[v].x == lo) {
        std::size_t h = boundary_height(v);
        if (sources_[h - 1] != nv) throw NetworkError("two sources at one height");
        sources_[h - 1] = v;
        source_height_[v] = h;
      } else if (nodes_[v].x == hi) {
        std::size_t h = boundary_height(v);
        if (sinks_[h - 1] != nv) throw NetworkError("two sinks at one height");
        sinks_[h - 1] = v;
        sink_height_[v] = h;
      }
    }
    for (std::size_t h = 0; h < rank_; ++h)
      if (sources_[h] == nv || sinks_[h] == nv)
        throw NetworkError("need exactly one source and one sink at each height 1..n");
    check_planar();
  }

  static int orientation(const Node& a, const Node& b, const Node& c) {
    Rational v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    return sgn(v);
  }

  static bool on_segment(const Node& a, const Node& b, const Node& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
  }

  // Edges may meet only at shared endpoints; no node may sit inside an edge.
  void check_planar() const {
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const Node& a = nodes_[edges_[e].tail];
      const Node& b = nodes_[edges_[e].head];
      for (std::size_t v = 0; v < nodes_.size(); ++v) {
        if (v == edges_[e].tail || v == edges_[e].head) continue;
        const Node& p = nodes_[v];
        if (p.x <= a.x || p.x >= b.x) continue;
        if (orientation(a, b, p) == 0) throw NetworkError("a node lies inside an edge");
      }
      for (std::size_t f = e + 1; f < edges_.size(); ++f) {
        const Node& c = nodes_[edges_[f].tail];
        const Node& d = nodes_[edges_[f].head];
        if (d.x <= a.x || c.x >= b.x) continue;
        const bool share = edges_[e].tail == edges_[f].tail || edges_[e].tail == edges_[f].head ||
                           edges_[e].head == edges_[f].tail || edges_[e].head == edges_[f].head;
        int o1 = orientation(a, b, c), o2 = orientation(a, b, d);
        int o3 = orientation(c, d, a), o4 = orientation(c, d, b);
        if (share) {
          if (o1 == 0 && o2 == 0) throw NetworkError("overlapping collinear edges");
          continue;
        }
        bool cross = o1 * o2 < 0 && o3 * o4 < 0;
        bool touch = (o1 == 0 && on_segment(a, b, c)) || (o2 == 0 && on_segment(a, b, d)) ||
                     (o3 == 0 && on_segment(c, d, a)) || (o4 == 0 && on_segment(c, d, b));
        if (cross || touch) throw NetworkError("edges intersect away from a shared node");
      }
    }
  }

  std::size_t rank_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> sources_, sinks_;
  std::vector<std::size_t> source_height_, sink_height_;
  std::vector<std::vector<std::size_t>> out_, in_;
};

namespace detail {

/// Connects each line's marked x positions with horizontal edges; the last
/// segment of every line (the one ending on the sink) gets the sink tag.
inline PlanarNetwork assemble_lines(std::size_t n, const Rational& x_source, const Rational& x_sink,
                                    const std::vector<std::pair<Node, Node>>& diagonals) {
  std::vector<Node> nodes;
  std::map<std::pair<Rational, Rational>, std::size_t> index;
  auto node_at = [&](const Rational& x, const Rational& y) {
    auto key = std::make_pair(x, y);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    nodes.push_back({x, y});
    index.emplace(key, nodes.size() - 1);
    return nodes.size() - 1;
  };
  std::vector<Edge> edges;
  for (const auto& [from, to] : diagonals)
    edges.push_back({node_at(from.x, from.y), node_at(to.x, to.y), EdgeTag::diagonal});
  for (std::size_t h = 1; h <= n; ++h) {
    Rational y(static_cast<long>(h));
    std::vector<Rational> xs{x_source, x_sink};
    for (const auto& [from, to] : diagonals) {
      if (from.y == y) xs.push_back(from.x);
      if (to.y == y) xs.push_back(to.x);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      EdgeTag tag = i + 2 == xs.size() ? EdgeTag::sink_horizontal : EdgeTag::horizontal;
      edges.push_back({node_at(xs[i], y), node_at(xs[i + 1], y), tag});
    }
  }
  return PlanarNetwork(n, std::move(nodes), std::move(edges));
}

}  // namespace detail

/// The triangular network Gamma_0 of rank n: n horizontal lines at heights
/// 1..n and n(n-1)/2 diagonals arranged in staircases. Staircase s (1..n-1)
/// starts on the top line and drops one level per step, n-s steps in all.
inline PlanarNetwork build_gamma0(std::size_t n) {
  if (n == 0) throw NetworkError("build_gamma0: rank must be positive");
  const Rational half(1, 2);
  std::vector<std::pair<Node, Node>> diagonals;
  Rational x_last(0);
  for (std::size_t s = 1; s < n; ++s)
    for (std::size_t t = 0; t + s < n; ++t) {
      Rational x0 = half + Rational(3, 2) * Rational(static_cast<long>(s - 1)) + Rational(static_cast<long>(t));
      Rational y0(static_cast<long>(n - t));
      diagonals.push_back({Node{x0, y0}, Node{x0 + half, y0 - 1}});
      x_last = std::max(x_last, Rational(x0 + half));
    }
  return detail::assemble_lines(n, Rational(-1), x_last + 2, diagonals);
}

/// Lines at heights 1..n with one diagonal per move (from_line, to_line),
/// adjacent lines only, placed left to right in disjoint x slots.
inline PlanarNetwork build_layered(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& moves) {
  if (n == 0) throw NetworkError("build_layered: rank must be positive");
  std::vector<std::pair<Node, Node>> diagonals;
  long slot = 0;
  for (const auto& [from, to] : moves) {
    if (from < 1 || from > n || to < 1 || to > n || (from + 1 != to && to + 1 != from))
      throw NetworkError("build_layered: moves must join adjacent lines");
    Rational x0(2 * slot + 1);
    diagonals.push_back({Node{x0, Rational(static_cast<long>(from))},
                         Node{x0 + 1, Rational(static_cast<long>(to))}});
    ++slot;
  }
  return detail::assemble_lines(n, Rational(0), Rational(2 * slot + 1), diagonals);
}

/// Gamma_1 o Gamma_2: the sinks of g1 are glued to the sources of g2. The
/// edges of g1 come first in the canonical order, so w1 o w2 is w1 ++ w2.
inline PlanarNetwork concatenate(const PlanarNetwork& g1, const PlanarNetwork& g2) {
  if (g1.rank() != g2.rank()) throw NetworkError("concatenate: rank mismatch");
  const Rational shift = g1.x_max() - g2.x_min();
  std::vector<Node> nodes = g1.nodes();
  std::vector<Edge> edges;
  for (const Edge& e : g1.edges()) {
    EdgeTag tag = e.tag == EdgeTag::sink_horizontal ? EdgeTag::horizontal : e.tag;
    edges.push_back({e.tail, e.head, tag});
  }
  std::vector<std::size_t> remap(g2.nodes().size());
  for (std::size_t v = 0; v < g2.nodes().size(); ++v) {
    std::size_t h = g2.source_height(v);
    if (h != 0) {
      remap[v] = g1.sink(h);
    } else {
      nodes.push_back({g2.node(v).x + shift, g2.node(v).y});
      remap[v] = nodes.size() - 1;
    }
  }
  for (const Edge& e : g2.edges()) edges.push_back({remap[e.tail], remap[e.head], e.tag});
  return PlanarNetwork(g1.rank(), std::move(nodes), std::move(edges));
}

template <class T>
Weighting<T> compose(const Weighting<T>& w1, const Weighting<T>& w2) {
  Weighting<T> w = w1;
  w.insert(w.end(), w2.begin(), w2.end());
  return w;
}

struct Subnetwork {
  PlanarNetwork network;
  std::vector<std::size_t> parent_edge;  // subnetwork edge -> edge of the parent

  template <class T>
  Weighting<T> restrict_weighting(const Weighting<T>& w) const {
    Weighting<T> out;
    out.reserve(parent_edge.size());
    for (std::size_t e : parent_edge) out.push_back(w.at(e));
    return out;
  }
};

/// Gamma^(k): drops the sources and sinks above height k, then everything
/// that no longer lies on a path from a remaining source to a remaining sink.
inline Subnetwork subnetwork(const PlanarNetwork& g, std::size_t k) {
  if (k < 1 || k > g.rank()) throw NetworkError("subnetwork: k must be in 1..n");
  const std::size_t nv = g.nodes().size();
  std::vector<bool> from_source(nv, false), to_sink(nv, false);
  for (std::size_t v = 0; v < nv; ++v) {
    std::size_t h = g.source_height(v);
    if (h != 0 && h <= k) from_source[v] = true;
    for (std::size_t e : g.in_edges(v))
      if (from_source[g.edge(e).tail]) from_source[v] = true;
  }
  for (std::size_t v = nv; v-- > 0;) {
    std::size_t h = g.sink_height(v);
    if (h != 0 && h <= k) to_sink[v] = true;
    for (std::size_t e : g.out_edges(v))
      if (to_sink[g.edge(e).head]) to_sink[v] = true;
  }
  std::vector<std::size_t> remap(nv, nv);
  std::vector<Node> nodes;
  for (std::size_t v = 0; v < nv; ++v)
    if (from_source[v] && to_sink[v]) {
      remap[v] = nodes.size();
      nodes.push_back(g.node(v));
    }
  std::vector<Edge> edges;
  std::vector<std::size_t> parent;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    if (remap[ed.tail] == nv || remap[ed.head] == nv) continue;
    edges.push_back({remap[ed.tail], remap[ed.head], ed.tag});
    parent.push_back(e);
  }
  // Node order is preserved, so the canonical edge order is too.
  return Subnetwork{PlanarNetwork(k, std::move(nodes), std::move(edges)), std::move(parent)};
}

namespace detail {

inline nlohmann::json rational_to_json(const Rational& q) {
  if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
  double d = q.get_d();
  if (rational_from_double(d) == q) return d;
  return q.get_str();
}

inline Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number()) return rational_from_double(j.get<double>());
  throw NetworkError("expected a number or rational string");
}

}  // namespace detail

inline nlohmann::json to_json(const PlanarNetwork& g) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t v = 0; v < g.nodes().size(); ++v)
    nodes.push_back({{"id", v}, {"x", detail::rational_to_json(g.node(v).x)},
                     {"y", detail::rational_to_json(g.node(v).y)}});
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : g.edges())
    edges.push_back({{"tail", e.tail}, {"head", e.head}, {"tag", to_string(e.tag)}});
  return {{"rank", g.rank()}, {"nodes", nodes}, {"edges", edges}};
}

inline PlanarNetwork network_from_json(const nlohmann::json& j) {
  try {
    std::size_t rank = j.at("rank").get<std::size_t>();
    std::vector<Node> nodes;
    std::map<long, std::size_t> ids;
    for (const auto& jn : j.at("nodes")) {
      long id = jn.at("id").get<long>();
      if (!ids.emplace(id, nodes.size()).second) throw NetworkError("duplicate node id");
      nodes.push_back({detail::rational_from_json(jn.at("x")), detail::rational_from_json(jn.at("y"))});
    }
    std::vector<Edge> edges;
    for (const auto& je : j.at("edges")) {
      auto tail = ids.find(je.at("tail").get<long>());
      auto head = ids.find(je.at("head").get<long>());
      if (tail == ids.end() || head == ids.end()) throw NetworkError("edge refers to unknown node");
      EdgeTag tag = je.contains("tag") ? edge_tag_from_string(je.at("tag").get<std::string>())
                                       : EdgeTag::horizontal;
      edges.push_back({tail->second, head->second, tag});
    }
    return PlanarNetwork(rank, std::move(nodes), std::move(edges));
  } catch (const nlohmann::json::exception& e) {
    throw NetworkError(std::string("malformed network JSON: ") + e.what());
  }
}

/// Graphviz rendering with pinned coordinates (use `neato -n`).
inline std::string to_dot(const PlanarNetwork& g) {
  std::ostringstream os;
  os << "digraph network {\n  rankdir=LR;\n  node [shape=point];\n";
  for (std::size_t v = 0; v < g.nodes().size(); ++v) {
    os << "  n" << v << " [pos=\"" << g.node(v).x.get_d() * 72.0 << "," << g.node(v).y.get_d() * 72.0
       << "!\"";
    if (g.source_height(v) != 0) os << ", xlabel=\"s" << g.source_height(v) << "\"";
    if (g.sink_height(v) != 0) os << ", xlabel=\"t" << g.sink_height(v) << "\"";
    os << "];\n";
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    os << "  n" << ed.tail << " -> n" << ed.head << " [label=\"e" << e << "\"";
    if (ed.tag == EdgeTag::diagonal) os << ", color=blue";
    if (ed.tag == EdgeTag::sink_horizontal) os << ", color=red";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace hornlab
