#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hornlab/matrix.hpp"
#include "hornlab/network.hpp"
#include "hornlab/semiring.hpp"
#include "hornlab/tableau.hpp"

namespace hornlab {

/// k vertex-disjoint paths; path p runs from source height sources[p] to
/// sink height sinks[p] and is stored as a list of edge indices.
struct MultiPath {
  std::vector<std::vector<std::size_t>> paths;
  std::vector<std::size_t> sources;
  std::vector<std::size_t> sinks;

  std::size_t k() const { return paths.size(); }

  /// Sorted edge set of the whole system.
  std::vector<std::size_t> support() const {
    std::vector<std::size_t> s;
    for (const auto& p : paths) s.insert(s.end(), p.begin(), p.end());
    std::sort(s.begin(), s.end());
    return s;
  }

  template <Semiring S>
  typename S::value_type weight(const Weighting<typename S::value_type>& w) const {
    auto acc = S::one();
    for (const auto& p : paths)
      for (std::size_t e : p) acc = S::mul(acc, w.at(e));
    return acc;
  }

  friend bool operator==(const MultiPath& a, const MultiPath& b) { return a.paths == b.paths; }
  friend bool operator<(const MultiPath& a, const MultiPath& b) { return a.paths < b.paths; }
};

using HeightSet = std::vector<std::size_t>;

inline std::uint32_t height_mask(const HeightSet& hs) {
  std::uint32_t m = 0;
  for (std::size_t h : hs) {
    if (h == 0 || h > 31) throw std::out_of_range("height out of range");
    m |= std::uint32_t{1} << (h - 1);
  }
  return m;
}

inline HeightSet mask_heights(std::uint32_t mask) {
  HeightSet hs;
  for (std::size_t h = 1; mask != 0; ++h, mask >>= 1)
    if (mask & 1u) hs.push_back(h);
  return hs;
}

namespace detail {

inline void check_weighting_size(const PlanarNetwork& g, std::size_t size) {
  if (size != g.num_edges()) throw std::invalid_argument("weighting size does not match the edge count");
}

inline void check_heights(const PlanarNetwork& g, const HeightSet& hs) {
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (hs[i] < 1 || hs[i] > g.rank()) throw std::invalid_argument("height outside 1..n");
    if (i > 0 && hs[i] <= hs[i - 1]) throw std::invalid_argument("height set must be strictly increasing");
  }
}

}  // namespace detail

/// Every vertex-disjoint system of |I| paths from the sources at heights I
/// onto the sinks at heights J, in lexicographic order of edge lists.
/// Brute force; intended as a reference for small networks.
inline std::vector<MultiPath> enumerate_kpaths(const PlanarNetwork& g, const HeightSet& I, const HeightSet& J) {
  detail::check_heights(g, I);
  detail::check_heights(g, J);
  std::vector<MultiPath> out;
  if (I.size() != J.size()) return out;
  const std::uint32_t want_sinks = height_mask(J);
  std::vector<bool> used(g.nodes().size(), false);
  MultiPath current;
  std::vector<std::size_t> path;

  auto recurse = [&](auto&& self, std::size_t idx, std::uint32_t sinks_taken) -> void {
    if (idx == I.size()) {
      out.push_back(current);
      return;
    }
    auto dfs = [&](auto&& walk, std::size_t v) -> void {
      std::size_t h = g.sink_height(v);
      if (h != 0) {
        std::uint32_t bit = std::uint32_t{1} << (h - 1);
        if ((want_sinks & bit) && !(sinks_taken & bit)) {
          current.paths.push_back(path);
          current.sources.push_back(I[idx]);
          current.sinks.push_back(h);
          std::vector<std::size_t> saved;
          saved.swap(path);
          self(self, idx + 1, sinks_taken | bit);
          path.swap(saved);
          current.paths.pop_back();
          current.sources.pop_back();
          current.sinks.pop_back();
        }
        return;
      }
      for (std::size_t e : g.out_edges(v)) {
        std::size_t u = g.edge(e).head;
        if (used[u]) continue;
        used[u] = true;
        path.push_back(e);
        walk(walk, u);
        path.pop_back();
        used[u] = false;
      }
    };
    std::size_t s = g.source(I[idx]);
    if (used[s]) return;
    used[s] = true;
    dfs(dfs, s);
    used[s] = false;
  };
  recurse(recurse, 0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

/// All k-path systems for every pair of height sets of size k.
inline std::vector<MultiPath> enumerate_all_kpaths(const PlanarNetwork& g, std::size_t k) {
  std::vector<MultiPath> out;
  const std::uint32_t full = (std::uint32_t{1} << g.rank()) - 1;
  for (std::uint32_t a = 0; a <= full; ++a) {
    if (static_cast<std::size_t>(std::popcount(a)) != k) continue;
    for (std::uint32_t b = 0; b <= full; ++b) {
      if (static_cast<std::size_t>(std::popcount(b)) != k) continue;
      auto part = enumerate_kpaths(g, mask_heights(a), mask_heights(b));
      out.insert(out.end(), part.begin(), part.end());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

template <Semiring S>
typename S::value_type minor_by_enumeration(const PlanarNetwork& g, const Weighting<typename S::value_type>& w,
                                            const HeightSet& I, const HeightSet& J) {
  detail::check_weighting_size(g, w.size());
  auto acc = S::zero();
  if (I.empty() && J.empty()) return S::one();
  for (const auto& mp : enumerate_kpaths(g, I, J)) acc = S::add(acc, mp.template weight<S>(w));
  return acc;
}

/// Key (source mask, sink mask) over heights; bit h-1 stands for height h.
using MinorKey = std::pair<std::uint32_t, std::uint32_t>;

/// Every minor M_{I,J} with I, J inside the allowed height masks, from one
/// left-to-right sweep. A sweep state is the set of edges currently carrying
/// a partial path plus the sources used and sinks reached so far; two paths
/// entering one node kill the state, which enforces vertex-disjointness.
/// Absent keys have no path system (semiring zero).
template <Semiring S>
std::map<MinorKey, typename S::value_type> all_minors(const PlanarNetwork& g,
                                                      const Weighting<typename S::value_type>& w,
                                                      std::uint32_t allowed_sources = ~std::uint32_t{0},
                                                      std::uint32_t allowed_sinks = ~std::uint32_t{0}) {
  using V = typename S::value_type;
  detail::check_weighting_size(g, w.size());
  struct Key {
    std::uint32_t src = 0, snk = 0;
    std::vector<std::uint32_t> active;
    bool operator<(const Key& o) const {
      if (src != o.src) return src < o.src;
      if (snk != o.snk) return snk < o.snk;
      return active < o.active;
    }
  };
  std::map<Key, V> states;
  states.emplace(Key{}, S::one());
  auto accumulate = [](std::map<Key, V>& m, Key&& k, V&& v) {
    auto it = m.find(k);
    if (it == m.end())
      m.emplace(std::move(k), std::move(v));
    else
      it->second = S::add(it->second, v);
  };
  for (std::size_t v = 0; v < g.nodes().size(); ++v) {
    const auto& ins = g.in_edges(v);
    const auto& outs = g.out_edges(v);
    const std::size_t src_h = g.source_height(v);
    const std::size_t snk_h = g.sink_height(v);
    std::map<Key, V> next;
    for (auto& [key, val] : states) {
      std::size_t entering = 0;
      std::uint32_t hit = 0;
      for (std::size_t e : ins)
        if (std::binary_search(key.active.begin(), key.active.end(), static_cast<std::uint32_t>(e))) {
          ++entering;
          hit = static_cast<std::uint32_t>(e);
        }
      if (entering >= 2) continue;
      if (entering == 1) {
        Key base = key;
        base.active.erase(std::lower_bound(base.active.begin(), base.active.end(), hit));
        if (snk_h != 0) {
          std::uint32_t bit = std::uint32_t{1} << (snk_h - 1);
          if (!(allowed_sinks & bit)) continue;
          base.snk |= bit;
          accumulate(next, std::move(base), V(val));
          continue;
        }
        for (std::size_t e : outs) {
          Key k = base;
          k.active.insert(std::upper_bound(k.active.begin(), k.active.end(), static_cast<std::uint32_t>(e)),
                          static_cast<std::uint32_t>(e));
          accumulate(next, std::move(k), S::mul(val, w[e]));
        }
        continue;
      }
      accumulate(next, Key(key), V(val));
      if (src_h != 0 && (allowed_sources & (std::uint32_t{1} << (src_h - 1)))) {
        for (std::size_t e : outs) {
          Key k = key;
          k.src |= std::uint32_t{1} << (src_h - 1);
          k.active.insert(std::upper_bound(k.active.begin(), k.active.end(), static_cast<std::uint32_t>(e)),
                          static_cast<std::uint32_t>(e));
          accumulate(next, std::move(k), S::mul(val, w[e]));
        }
      }
    }
    states = std::move(next);
  }
  std::map<MinorKey, V> result;
  for (auto& [key, val] : states) {
    if (!key.active.empty()) continue;
    MinorKey mk{key.src, key.snk};
    auto it = result.find(mk);
    if (it == result.end())
      result.emplace(mk, val);
    else
      it->second = S::add(it->second, val);
  }
  return result;
}

/// Lindstrom minor over the heights I -> J.
template <Semiring S>
typename S::value_type minor(const PlanarNetwork& g, const Weighting<typename S::value_type>& w, const HeightSet& I,
                             const HeightSet& J) {
  detail::check_heights(g, I);
  detail::check_heights(g, J);
  if (I.size() != J.size()) return S::zero();
  if (I.empty()) return S::one();
  const std::uint32_t a = height_mask(I), b = height_mask(J);
  auto all = all_minors<S>(g, w, a, b);
  auto it = all.find({a, b});
  return it == all.end() ? S::zero() : it->second;
}

namespace detail {

template <Semiring S>
std::vector<typename S::value_type> fold_by_size(const std::map<MinorKey, typename S::value_type>& minors,
                                                 std::size_t n) {
  std::vector<typename S::value_type> m(n, S::zero());
  for (const auto& [key, val] : minors) {
    std::size_t k = static_cast<std::size_t>(std::popcount(key.first));
    if (k >= 1 && k <= n) m[k - 1] = S::add(m[k - 1], val);
  }
  return m;
}

}  // namespace detail

/// (m_1, ..., m_n): m_k is the semiring sum of all k x k minors.
template <Semiring S>
std::vector<typename S::value_type> m_all(const PlanarNetwork& g, const Weighting<typename S::value_type>& w) {
  return detail::fold_by_size<S>(all_minors<S>(g, w), g.rank());
}

template <Semiring S>
typename S::value_type m_k(const PlanarNetwork& g, const Weighting<typename S::value_type>& w, std::size_t k) {
  if (k < 1 || k > g.rank()) throw std::invalid_argument("m_k: k must be in 1..n");
  return m_all<S>(g, w)[k - 1];
}

template <Semiring S>
typename S::value_type m_k_by_enumeration(const PlanarNetwork& g, const Weighting<typename S::value_type>& w,
                                          std::size_t k) {
  detail::check_weighting_size(g, w.size());
  auto acc = S::zero();
  for (const auto& mp : enumerate_all_kpaths(g, k)) acc = S::add(acc, mp.template weight<S>(w));
  return acc;
}

/// Row i / column j of the matrix correspond to source / sink height n-i
/// (0-based), i.e. heights are listed top-down. With this indexing Gamma_0
/// gives upper-triangular matrices, and the minor over heights I, J equals
/// the determinant minor on the reversed indices.
inline std::size_t matrix_index(std::size_t n, std::size_t height) { return n - height; }
inline std::size_t index_height(std::size_t n, std::size_t index) { return n - index; }

template <Semiring S>
Matrix<typename S::value_type> correspondence_matrix(const PlanarNetwork& g,
                                                     const Weighting<typename S::value_type>& w) {
  using V = typename S::value_type;
  detail::check_weighting_size(g, w.size());
  const std::size_t n = g.rank();
  const std::size_t nv = g.nodes().size();
  Matrix<V> m(n, n, S::zero());
  for (std::size_t hs = 1; hs <= n; ++hs) {
    std::vector<V> acc(nv, S::zero());
    std::vector<bool> reached(nv, false);
    const std::size_t s = g.source(hs);
    acc[s] = S::one();
    reached[s] = true;
    for (std::size_t v = s; v < nv; ++v) {
      if (!reached[v]) continue;
      for (std::size_t e : g.out_edges(v)) {
        std::size_t u = g.edge(e).head;
        acc[u] = S::add(acc[u], S::mul(acc[v], w[e]));
        reached[u] = true;
      }
    }
    for (std::size_t ht = 1; ht <= n; ++ht) {
      std::size_t t = g.sink(ht);
      if (reached[t]) m(matrix_index(n, hs), matrix_index(n, ht)) = acc[t];
    }
  }
  return m;
}

/// Determinant minor of M on the rows/columns of the height sets.
template <class T>
T matrix_minor(const Matrix<T>& m, const HeightSet& I, const HeightSet& J) {
  if (I.size() != J.size()) throw std::invalid_argument("matrix_minor: |I| != |J|");
  if (I.empty()) return T(1);
  const std::size_t n = m.rows();
  std::vector<std::size_t> rows, cols;
  for (auto it = I.rbegin(); it != I.rend(); ++it) rows.push_back(matrix_index(n, *it));
  for (auto it = J.rbegin(); it != J.rend(); ++it) cols.push_back(matrix_index(n, *it));
  return determinant(submatrix(m, rows, cols));
}

template <class T>
Weighting<Tropical<T>> to_tropical(const Weighting<T>& w) {
  return Weighting<Tropical<T>>(w.begin(), w.end());
}

/// lambda_i = m_i - m_{i-1} in the tropical semiring.
template <class T>
std::vector<Tropical<T>> tropical_singular_values(const PlanarNetwork& g, const Weighting<Tropical<T>>& w) {
  auto m = m_all<TropicalSemiring<T>>(g, w);
  std::vector<Tropical<T>> lambda(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    lambda[i] = i == 0 ? m[0] : tropical_difference(m[i], m[i - 1]);
  return lambda;
}

template <class T>
std::vector<Tropical<T>> tropical_singular_values(const PlanarNetwork& g, const Weighting<T>& w) {
  return tropical_singular_values<T>(g, to_tropical(w));
}

/// Row k holds m_i of the subnetwork Gamma^(k), i = 1..k, and l^k_0 = 0.
/// The paths between sources and sinks of height <= k are exactly the
/// paths of Gamma^(k), so one sweep over g covers every row.
template <class T>
Tableau<Tropical<T>> tropical_gz(const PlanarNetwork& g, const Weighting<Tropical<T>>& w) {
  using S = TropicalSemiring<T>;
  const std::size_t n = g.rank();
  auto minors = all_minors<S>(g, w);
  Tableau<Tropical<T>> t(n, TableauRole::tropical_gz, Tropical<T>(T(0)));
  for (std::size_t k = 1; k <= n; ++k) {
    const std::uint32_t below = (std::uint32_t{1} << k) - 1;
    std::vector<Tropical<T>> row(k, S::zero());
    for (const auto& [key, val] : minors) {
      if ((key.first & ~below) || (key.second & ~below)) continue;
      std::size_t size = static_cast<std::size_t>(std::popcount(key.first));
      if (size >= 1) row[size - 1] = S::add(row[size - 1], val);
    }
    for (std::size_t i = 1; i <= k; ++i) t.at(k, i) = row[i - 1];
  }
  return t;
}

template <class T>
Tableau<Tropical<T>> tropical_gz(const PlanarNetwork& g, const Weighting<T>& w) {
  return tropical_gz<T>(g, to_tropical(w));
}

/// M_{ij} = sum over single paths of exp(tau * u(alpha)) * phi(alpha).
inline Matrix<std::complex<double>> complex_lift(const PlanarNetwork& g, const std::vector<double>& u,
                                                 const std::vector<std::complex<double>>& phi, double tau) {
  detail::check_weighting_size(g, u.size());
  detail::check_weighting_size(g, phi.size());
  if (!(tau > 0.0)) throw std::invalid_argument("complex_lift: tau must be positive");
  Weighting<std::complex<double>> w(u.size());
  for (std::size_t e = 0; e < u.size(); ++e) {
    if (std::abs(std::abs(phi[e]) - 1.0) > 1e-12) throw std::invalid_argument("complex_lift: phase is not unimodular");
    w[e] = std::exp(tau * u[e]) * phi[e];
  }
  return correspondence_matrix<ComplexRing>(g, w);
}

}  // namespace hornlab
