#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hornlab/gz_sampler.hpp"
#include "hornlab/hive.hpp"
#include "hornlab/matrix.hpp"
#include "hornlab/network.hpp"
#include "hornlab/paths.hpp"
#include "hornlab/tableau.hpp"

namespace hornlab {

/// Gamma_0 together with the edges that carry the restricted weightings:
/// the diagonals in canonical edge order, then the sink-adjacent
/// horizontals of lines 1..n.
struct Gamma0Layout {
  PlanarNetwork network;
  std::vector<std::size_t> parameter_edges;

  explicit Gamma0Layout(std::size_t n) : network(build_gamma0(n)) {
    for (std::size_t e = 0; e < network.num_edges(); ++e)
      if (network.edge(e).tag == EdgeTag::diagonal) parameter_edges.push_back(e);
    std::vector<std::size_t> sinks(n);
    for (std::size_t e = 0; e < network.num_edges(); ++e)
      if (network.edge(e).tag == EdgeTag::sink_horizontal)
        sinks[network.sink_height(network.edge(e).head) - 1] = e;
    parameter_edges.insert(parameter_edges.end(), sinks.begin(), sinks.end());
  }

  std::size_t n() const { return network.rank(); }
  std::size_t num_parameters() const { return parameter_edges.size(); }
};

/// Weighting of Gamma_0 vanishing on every horizontal edge except those
/// ending on a sink. N = n(n+1)/2 stored values.
template <class T>
struct BasicWbarWeighting {
  std::size_t n = 0;
  std::vector<T> diagonals;         // Gamma_0 diagonal edges, canonical order
  std::vector<T> sink_horizontals;  // lines 1..n, bottom to top

  static BasicWbarWeighting from_parameters(std::size_t n, const std::vector<T>& p) {
    const std::size_t nd = n * (n - 1) / 2;
    if (p.size() != nd + n) throw std::invalid_argument("WbarWeighting: need n(n+1)/2 values");
    BasicWbarWeighting w;
    w.n = n;
    w.diagonals.assign(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(nd));
    w.sink_horizontals.assign(p.begin() + static_cast<std::ptrdiff_t>(nd), p.end());
    return w;
  }

  std::vector<T> parameters() const {
    std::vector<T> p = diagonals;
    p.insert(p.end(), sink_horizontals.begin(), sink_horizontals.end());
    return p;
  }

  void validate() const {
    if (n == 0 || diagonals.size() != n * (n - 1) / 2 || sink_horizontals.size() != n)
      throw std::invalid_argument("WbarWeighting: wrong number of values");
  }

  friend bool operator==(const BasicWbarWeighting& a, const BasicWbarWeighting& b) {
    return a.n == b.n && a.diagonals == b.diagonals && a.sink_horizontals == b.sink_horizontals;
  }
};

using WbarWeighting = BasicWbarWeighting<Rational>;

/// Full Gamma_0 weighting with zeros on the remaining horizontals.
template <class T>
Weighting<T> embed(const Gamma0Layout& layout, const BasicWbarWeighting<T>& w) {
  w.validate();
  if (w.n != layout.n()) throw std::invalid_argument("embed: rank mismatch");
  Weighting<T> out(layout.network.num_edges(), T(0));
  auto p = w.parameters();
  for (std::size_t j = 0; j < p.size(); ++j) out[layout.parameter_edges[j]] = p[j];
  return out;
}

inline nlohmann::json to_json(const WbarWeighting& w) {
  nlohmann::json d = nlohmann::json::array(), s = nlohmann::json::array();
  for (const auto& x : w.diagonals) d.push_back(detail::rational_to_json(x));
  for (const auto& x : w.sink_horizontals) s.push_back(detail::rational_to_json(x));
  return {{"n", w.n}, {"diagonals", d}, {"sink_horizontals", s}};
}

inline WbarWeighting wbar_from_json(const nlohmann::json& j) {
  WbarWeighting w;
  try {
    w.n = j.at("n").get<std::size_t>();
    for (const auto& x : j.at("diagonals")) w.diagonals.push_back(detail::rational_from_json(x));
    for (const auto& x : j.at("sink_horizontals")) w.sink_horizontals.push_back(detail::rational_from_json(x));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed weighting JSON: ") + e.what());
  }
  w.validate();
  return w;
}

/// Tableau slot (k, i), 1 <= i <= k <= n, in row-major order.
inline std::size_t slot_index(std::size_t k, std::size_t i) { return k * (k - 1) / 2 + (i - 1); }

template <class T>
std::vector<T> slot_vector(const Tableau<T>& t) {
  std::vector<T> v;
  for (std::size_t k = 1; k <= t.n(); ++k)
    for (std::size_t i = 1; i <= k; ++i) v.push_back(t.at(k, i));
  return v;
}

template <class T>
Tableau<T> tableau_from_slots(std::size_t n, const std::vector<T>& v, TableauRole role = TableauRole::gz) {
  Tableau<T> t(n, role, T(0));
  for (std::size_t k = 1; k <= n; ++k)
    for (std::size_t i = 1; i <= k; ++i) t.at(k, i) = v.at(slot_index(k, i));
  return t;
}

/// A multipath of Gamma_0^(k) with P_i membership, recorded by its edges in
/// Gamma_0 and its 0/1 incidence on the parameter edges.
struct SlotCandidate {
  MultiPath path;
  std::vector<int> incidence;
};

/// For each slot (k, i): the multipaths of P_i(Gamma_0^(k)), one per
/// distinct parameter incidence (the lexicographically first one kept).
inline std::vector<std::vector<SlotCandidate>> slot_candidates(const Gamma0Layout& layout) {
  const std::size_t n = layout.n();
  std::map<std::size_t, std::size_t> param_of;
  for (std::size_t j = 0; j < layout.parameter_edges.size(); ++j) param_of[layout.parameter_edges[j]] = j;
  std::vector<std::vector<SlotCandidate>> out(n * (n + 1) / 2);
  for (std::size_t k = 1; k <= n; ++k) {
    Subnetwork sub = subnetwork(layout.network, k);
    for (std::size_t i = 1; i <= k; ++i) {
      std::set<std::vector<int>> seen;
      for (const auto& mp : enumerate_all_kpaths(sub.network, i)) {
        MultiPath lifted = mp;
        for (auto& p : lifted.paths)
          for (auto& e : p) e = sub.parent_edge[e];
        std::vector<int> inc(layout.num_parameters(), 0);
        for (const auto& p : lifted.paths)
          for (std::size_t e : p) {
            auto it = param_of.find(e);
            if (it != param_of.end()) inc[it->second] += 1;
          }
        if (seen.insert(inc).second) out[slot_index(k, i)].push_back({std::move(lifted), std::move(inc)});
      }
    }
  }
  return out;
}

/// The linear chart of the tropical GZ map on the chamber Delta_0.
struct ChamberMap {
  std::shared_ptr<const Gamma0Layout> layout;
  std::vector<MultiPath> selection;  // per slot
  Matrix<Rational> matrix;           // slots x parameters, 0/1 incidence
  Matrix<Rational> inverse;
  bool integral_inverse = false;
  Matrix<std::int64_t> inverse_int;  // valid when integral_inverse

  std::size_t n() const { return layout->n(); }
};

namespace detail {

/// Random point of the open GZ cone with small denominators: a random
/// integer spectrum on top, then each lower row strictly interlaced at a
/// random rational position.
inline Tableau<Rational> random_interior_gz(std::size_t n, Rng& rng, long spread = 40) {
  std::uniform_int_distribution<long> value(-spread, spread);
  std::vector<Rational> lambda;
  std::set<long> used;
  while (lambda.size() < n) {
    long v = value(rng);
    if (used.insert(v).second) lambda.push_back(Rational(v));
  }
  std::sort(lambda.begin(), lambda.end(), [](const Rational& a, const Rational& b) { return a > b; });
  Tableau<Rational> t(n, TableauRole::gz, Rational(0));
  std::uniform_int_distribution<long> den(2, 9);
  for (std::size_t k = n; k >= 1; --k) {
    Rational acc(0);
    for (std::size_t i = 1; i <= k; ++i) {
      acc += lambda[i - 1];
      t.at(k, i) = acc;
    }
    if (k == 1) break;
    std::vector<Rational> mu(k - 1);
    for (std::size_t i = 0; i + 1 < k; ++i) {
      long q = den(rng);
      long p = std::uniform_int_distribution<long>(1, q - 1)(rng);
      mu[i] = lambda[i + 1] + (lambda[i] - lambda[i + 1]) * make_rational(p, q);
    }
    lambda = std::move(mu);
  }
  return t;
}

inline Rational dot(const std::vector<int>& inc, const std::vector<Rational>& w) {
  Rational s(0);
  for (std::size_t j = 0; j < inc.size(); ++j)
    if (inc[j] != 0) s += inc[j] * w[j];
  return s;
}

/// Argmax candidate per slot (first in order on ties) and the slot values.
inline std::pair<std::vector<std::size_t>, std::vector<Rational>> select(
    const std::vector<std::vector<SlotCandidate>>& cands, const std::vector<Rational>& w) {
  std::vector<std::size_t> sel(cands.size());
  std::vector<Rational> val(cands.size());
  for (std::size_t s = 0; s < cands.size(); ++s) {
    for (std::size_t c = 0; c < cands[s].size(); ++c) {
      Rational v = dot(cands[s][c].incidence, w);
      if (c == 0 || v > val[s]) {
        val[s] = v;
        sel[s] = c;
      }
    }
  }
  return {sel, val};
}

inline std::optional<Matrix<Rational>> try_inverse(const Matrix<Rational>& a) {
  try {
    return inverse(a);
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
}

}  // namespace detail

/// Tropical GZ image of a restricted weighting, computed by the sweep.
template <class T>
Tableau<T> lt_forward(const Gamma0Layout& layout, const BasicWbarWeighting<T>& w) {
  return finite_tableau(tropical_gz<T>(layout.network, embed(layout, w)));
}

/// Probe-and-verify search for the chamber Delta_0. From a random start
/// the argmax selection at the current weighting defines a linear system
/// L w = Xi for a random interior target Xi; its solution becomes the next
/// weighting until the selection reproduces Xi. A consistent selection is
/// then checked on `checks` further interior targets by the exact sweep.
inline ChamberMap find_delta0_chamber(std::size_t n, std::uint64_t seed = 1, std::size_t checks = 100) {
  if (n == 0 || n > 6) throw std::invalid_argument("find_delta0_chamber: n must be in 1..6");
  auto layout = std::make_shared<const Gamma0Layout>(n);
  const auto cands = slot_candidates(*layout);
  const std::size_t N = layout->num_parameters();
  Rng rng(seed);
  std::uniform_int_distribution<long> start(-20, 20);

  auto build = [&](const std::vector<std::size_t>& sel) {
    Matrix<Rational> a(N, N, Rational(0));
    for (std::size_t s = 0; s < N; ++s)
      for (std::size_t j = 0; j < N; ++j) a(s, j) = cands[s][sel[s]].incidence[j];
    return a;
  };

  auto verify = [&](const Matrix<Rational>& inv) {
    for (std::size_t t = 0; t < checks; ++t) {
      auto xi = detail::random_interior_gz(n, rng);
      auto w = BasicWbarWeighting<Rational>::from_parameters(n, matvec(inv, slot_vector(xi)));
      if (!(lt_forward(*layout, w) == xi)) return false;
    }
    return true;
  };

  std::set<std::vector<std::size_t>> rejected;
  for (std::size_t attempt = 0; attempt < 2000; ++attempt) {
    auto xi = slot_vector(detail::random_interior_gz(n, rng));
    std::vector<Rational> w(N);
    // Early attempts start deep in the region of heavy diagonals.
    const std::size_t nd = n * (n - 1) / 2;
    for (std::size_t j = 0; j < N; ++j)
      w[j] = Rational(start(rng)) + (attempt % 2 == 0 && j < nd ? Rational(1000) : Rational(0));
    std::set<std::vector<std::size_t>> seen;
    for (std::size_t iter = 0; iter < 200; ++iter) {
      auto [sel, val] = detail::select(cands, w);
      if (!seen.insert(sel).second) break;
      auto a = build(sel);
      auto inv = detail::try_inverse(a);
      if (!inv) break;
      auto next = matvec(*inv, xi);
      auto [sel2, val2] = detail::select(cands, next);
      if (val2 == xi) {
        auto a2 = build(sel2);
        auto inv2 = detail::try_inverse(a2);
        if (!inv2 || rejected.count(sel2)) break;
        if (!verify(*inv2)) {
          rejected.insert(sel2);
          break;
        }
        ChamberMap cm;
        cm.layout = layout;
        for (std::size_t s = 0; s < N; ++s) cm.selection.push_back(cands[s][sel2[s]].path);
        cm.matrix = a2;
        cm.inverse = *inv2;
        cm.integral_inverse = true;
        cm.inverse_int = Matrix<std::int64_t>(N, N, 0);
        for (std::size_t r = 0; r < N; ++r)
          for (std::size_t c = 0; c < N; ++c) {
            const Rational& q = cm.inverse(r, c);
            if (q.get_den() != 1 || !q.get_num().fits_slong_p())
              cm.integral_inverse = false;
            else
              cm.inverse_int(r, c) = q.get_num().get_si();
          }
        return cm;
      }
      w = std::move(next);
    }
  }
  throw std::runtime_error("find_delta0_chamber: no chamber verified");
}

class ChamberError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// w = L^{-1} xi on the chamber, re-verified by the exact tropical sweep.
inline WbarWeighting lt_inverse(const Tableau<Rational>& xi, const ChamberMap& chamber) {
  if (xi.n() != chamber.n()) throw std::invalid_argument("lt_inverse: rank mismatch");
  if (!gz_check(xi)) throw std::domain_error("lt_inverse: tableau is outside the GZ cone");
  auto w = WbarWeighting::from_parameters(xi.n(), matvec(chamber.inverse, slot_vector(xi)));
  if (!(lt_forward(*chamber.layout, w) == xi))
    throw ChamberError("lt_inverse: chamber does not reproduce the tableau");
  return w;
}

/// Exact fixed-point variant: entries are integers (values times a fixed
/// power of two); requires an integral chamber inverse.
inline BasicWbarWeighting<std::int64_t> lt_inverse_fixed(const Tableau<std::int64_t>& xi, const ChamberMap& chamber) {
  if (!chamber.integral_inverse) throw std::logic_error("lt_inverse_fixed: chamber inverse is not integral");
  if (!gz_check(xi)) throw std::domain_error("lt_inverse: tableau is outside the GZ cone");
  auto v = slot_vector(xi);
  const std::size_t N = v.size();
  std::vector<std::int64_t> p(N, 0);
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) p[r] += chamber.inverse_int(r, c) * v[c];
  auto w = BasicWbarWeighting<std::int64_t>::from_parameters(xi.n(), p);
  if (!(lt_forward(*chamber.layout, w) == xi))
    throw ChamberError("lt_inverse: chamber does not reproduce the tableau");
  return w;
}

/// Gamma_0 o Gamma_0 with its layout, built once per rank.
struct DoubleGamma0 {
  PlanarNetwork network;
  explicit DoubleGamma0(const Gamma0Layout& layout) : network(concatenate(layout.network, layout.network)) {}
};

/// kappa(u, v) = m^T(L^{-1}(u) o L^{-1}(v)) on Gamma_0 o Gamma_0.
inline std::vector<Rational> kappa(const Tableau<Rational>& u, const Tableau<Rational>& v, const ChamberMap& chamber,
                                   const DoubleGamma0* twice = nullptr) {
  auto w1 = lt_inverse(u, chamber);
  auto w2 = lt_inverse(v, chamber);
  std::optional<DoubleGamma0> own;
  if (!twice) twice = &own.emplace(*chamber.layout);
  auto w = compose(embed(*chamber.layout, w1), embed(*chamber.layout, w2));
  auto m = m_all<TropicalQSemiring>(twice->network, to_tropical(w));
  std::vector<Rational> out;
  for (const auto& x : m) out.push_back(x.value());
  return out;
}

/// Fixed-point kappa: inputs already scaled to integers.
inline std::vector<std::int64_t> kappa_fixed(const Tableau<std::int64_t>& u, const Tableau<std::int64_t>& v,
                                             const ChamberMap& chamber, const DoubleGamma0& twice) {
  auto w1 = lt_inverse_fixed(u, chamber);
  auto w2 = lt_inverse_fixed(v, chamber);
  auto w = compose(embed(*chamber.layout, w1), embed(*chamber.layout, w2));
  auto m = m_all<TropicalSemiring<std::int64_t>>(twice.network, to_tropical(w));
  std::vector<std::int64_t> out;
  for (const auto& x : m) out.push_back(x.value());
  return out;
}

/// H_T(w1, w2) = (m^T(Gamma_0, w1), m^T(Gamma_0, w2), m^T(Gamma_0 o Gamma_0, w1 o w2)).
template <class T>
HornTriple<T> horn_triple_tropical(const Gamma0Layout& layout, const BasicWbarWeighting<T>& w1,
                                   const BasicWbarWeighting<T>& w2, const DoubleGamma0* twice = nullptr) {
  if (w1.n != w2.n) throw std::invalid_argument("horn_triple_tropical: rank mismatch");
  auto e1 = embed(layout, w1), e2 = embed(layout, w2);
  std::optional<DoubleGamma0> own;
  if (!twice) twice = &own.emplace(layout);
  auto unwrap = [](const std::vector<Tropical<T>>& m) {
    std::vector<T> out;
    for (const auto& x : m) out.push_back(x.value());
    return out;
  };
  using S = TropicalSemiring<T>;
  return {unwrap(m_all<S>(layout.network, to_tropical(e1))), unwrap(m_all<S>(layout.network, to_tropical(e2))),
          unwrap(m_all<S>(twice->network, to_tropical(compose(e1, e2))))};
}

struct GenericityReport {
  Rational delta;
  std::optional<Rational> min_gap;     // smallest separation of distinct multipath values
  std::optional<Rational> min_margin;  // smallest interlacing margin
  std::optional<std::pair<MultiPath, MultiPath>> closest_pair;
  std::optional<std::pair<Rational, Rational>> closest_values;
  std::string where;  // which network / subnetwork / k realizes the gap
  bool generic = false;
};

namespace detail {

/// Separation among distinct multipath values within each P_i of each
/// subnetwork Gamma^(k); multipaths are identified when they cross the same
/// parameter edges (other edges weigh zero).
inline void scan_gaps(const PlanarNetwork& g, const Weighting<Rational>& w, const std::vector<bool>& is_param,
                      const std::string& label, GenericityReport& rep) {
  for (std::size_t k = 1; k <= g.rank(); ++k) {
    Subnetwork sub = subnetwork(g, k);
    Weighting<Rational> ws = sub.restrict_weighting(w);
    for (std::size_t i = 1; i <= k; ++i) {
      std::map<std::vector<std::size_t>, std::pair<Rational, MultiPath>> by_support;
      for (const auto& mp : enumerate_all_kpaths(sub.network, i)) {
        std::vector<std::size_t> key;
        for (std::size_t e : mp.support())
          if (is_param[sub.parent_edge[e]]) key.push_back(sub.parent_edge[e]);
        if (by_support.count(key)) continue;
        Rational val(0);
        for (std::size_t e : mp.support()) val += ws[e];
        MultiPath lifted = mp;
        for (auto& p : lifted.paths)
          for (auto& e : p) e = sub.parent_edge[e];
        by_support.emplace(std::move(key), std::make_pair(val, std::move(lifted)));
      }
      std::vector<const std::pair<Rational, MultiPath>*> items;
      for (const auto& [key, item] : by_support) items.push_back(&item);
      std::sort(items.begin(), items.end(), [](auto* a, auto* b) {
        if (a->first != b->first) return a->first < b->first;
        return a->second < b->second;
      });
      for (std::size_t j = 1; j < items.size(); ++j) {
        Rational gap = items[j]->first - items[j - 1]->first;
        if (!rep.min_gap || gap < *rep.min_gap) {
          rep.min_gap = gap;
          rep.closest_pair = std::make_pair(items[j - 1]->second, items[j]->second);
          rep.closest_values = std::make_pair(items[j - 1]->first, items[j]->first);
          rep.where = label + ", k=" + std::to_string(k) + ", P_" + std::to_string(i);
        }
      }
    }
  }
}

inline void scan_margin(const Tableau<Rational>& t, GenericityReport& rep) {
  auto m = gz_min_margin(t);
  if (m && (!rep.min_margin || *m < *rep.min_margin)) rep.min_margin = *m;
}

inline void finish(GenericityReport& rep) {
  bool gap_ok = !rep.min_gap || *rep.min_gap > rep.delta;
  bool margin_ok = !rep.min_margin || *rep.min_margin > rep.delta;
  rep.generic = gap_ok && margin_ok;
}

}  // namespace detail

/// Membership of w in W_delta with the interlacing margins of Delta_GZ(delta).
inline GenericityReport genericity_check(const Gamma0Layout& layout, const WbarWeighting& w, const Rational& delta) {
  GenericityReport rep;
  rep.delta = delta;
  std::vector<bool> is_param(layout.network.num_edges(), false);
  for (std::size_t e : layout.parameter_edges) is_param[e] = true;
  auto full = embed(layout, w);
  detail::scan_gaps(layout.network, full, is_param, "Gamma_0", rep);
  detail::scan_margin(lt_forward(layout, w), rep);
  detail::finish(rep);
  return rep;
}

/// Pair version: W_delta conditions on w1, w2 and w1 o w2, and the three
/// tropical GZ images in Delta_GZ(delta).
inline GenericityReport genericity_check(const Gamma0Layout& layout, const WbarWeighting& w1, const WbarWeighting& w2,
                                         const Rational& delta) {
  GenericityReport rep;
  rep.delta = delta;
  std::vector<bool> is_param(layout.network.num_edges(), false);
  for (std::size_t e : layout.parameter_edges) is_param[e] = true;
  auto e1 = embed(layout, w1), e2 = embed(layout, w2);
  detail::scan_gaps(layout.network, e1, is_param, "first factor", rep);
  detail::scan_gaps(layout.network, e2, is_param, "second factor", rep);
  DoubleGamma0 twice(layout);
  std::vector<bool> both = is_param;
  both.insert(both.end(), is_param.begin(), is_param.end());
  auto composed = compose(e1, e2);
  detail::scan_gaps(twice.network, composed, both, "product", rep);
  detail::scan_margin(lt_forward(layout, w1), rep);
  detail::scan_margin(lt_forward(layout, w2), rep);
  detail::scan_margin(finite_tableau(tropical_gz<Rational>(twice.network, composed)), rep);
  detail::finish(rep);
  return rep;
}

}  // namespace hornlab
