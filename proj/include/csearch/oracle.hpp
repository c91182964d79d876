#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <string>
#include <unordered_set>
#include <vector>

#include "semantics.hpp"
#include "tree.hpp"

namespace csearch {

inline constexpr int kOracleMaxEdges = 20;

struct OracleResult {
    Weight searchers = 0;
    SearchStrategy strategy;
};

/// Pareto staircase over all partial strategies from a fixed start: for each
/// searcher budget, the least guard weight any budget-respecting partial can
/// end in. `points` has strictly increasing peaks and strictly decreasing
/// guard weights.
struct GuardProfile {
    struct Point {
        Weight peak = 0;
        Weight guard = 0;
    };
    std::vector<Point> points;

    Weight min_guard(Weight budget) const {
        Weight best = kInfWeight;
        for (const Point& p : points) {
            if (p.peak > budget) break;
            best = p.guard;
        }
        return best;
    }
};

namespace detail {

// Shared environment for the state-lattice sweep: edges of the searched
// subgraph re-indexed 0..m-1, incidence bitmasks per vertex.
struct Lattice {
    const WeightedRootedTree* t;
    VertexId start;
    CostModel model;
    std::vector<EdgeId> eid;    // local index -> tree edge id
    std::vector<VertexId> ea, eb;
    std::vector<Weight> ew;
    std::map<VertexId, std::uint32_t> inc;  // touched vertex -> local incidence mask

    Lattice(const WeightedRootedTree& tree, VertexId s, CostModel m,
            const std::vector<EdgeId>* filter)
        : t(&tree), start(s), model(m) {
        if (filter) {
            eid = *filter;
            std::sort(eid.begin(), eid.end());
        } else {
            eid.resize(static_cast<size_t>(tree.edge_count()));
            for (EdgeId e = 0; e < tree.edge_count(); ++e) eid[static_cast<size_t>(e)] = e;
        }
        if (static_cast<int>(eid.size()) > kOracleMaxEdges)
            throw CapError("oracle: subgraph exceeds " + std::to_string(kOracleMaxEdges) +
                           " edges");
        inc[s];  // ensure the start is tracked even when isolated
        for (size_t i = 0; i < eid.size(); ++i) {
            const EdgeRec& r = tree.edge(eid[i]);
            ea.push_back(r.a);
            eb.push_back(r.b);
            ew.push_back(r.w);
            inc[r.a] |= 1u << i;
            inc[r.b] |= 1u << i;
        }
    }

    int m() const { return static_cast<int>(eid.size()); }

    bool occupied(VertexId v, std::uint32_t mask) const {
        return v == start || (inc.at(v) & mask) != 0;
    }

    Weight guard(std::uint32_t mask) const {
        if (mask == 0 && model == CostModel::Primitive) return 0;
        Weight g = 0;
        for (const auto& [v, iv] : inc)
            if ((iv & ~mask) != 0 && occupied(v, mask)) g = checked_add(g, t->weight(v));
        return g;
    }

    // cost of clearing local edge i from configuration `mask`; guard_before
    // must equal guard(mask)
    Weight move_cost(std::uint32_t mask, int i, Weight guard_before) const {
        const std::uint32_t bit = 1u << i;
        VertexId u = ea[static_cast<size_t>(i)], v = eb[static_cast<size_t>(i)];
        if (!occupied(u, mask)) std::swap(u, v);
        const std::uint32_t rest = ~mask & ~bit;
        const bool u_keeps = (inc.at(u) & rest) != 0;
        const bool v_needs = (inc.at(v) & rest) != 0;
        const Weight slide = std::max(ew[static_cast<size_t>(i)],
                                      v_needs ? t->weight(v) : Weight{0});
        if (mask == 0 && model == CostModel::Primitive)
            return checked_add(u_keeps ? t->weight(u) : Weight{0}, slide);
        if (u_keeps) return checked_add(guard_before, slide);
        return checked_add(checked_sub(guard_before, t->weight(u)),
                           std::max(t->weight(u), slide));
    }
};

// Best-first sweep over cleared-edge subsets. best[mask] = fewest searchers
// that let some prefix-connected order reach exactly that cleared set.
struct LatticeSweep {
    Lattice lat;
    std::vector<Weight> best;
    std::vector<std::uint8_t> via;  // local edge cleared last on an optimal way in

    LatticeSweep(const WeightedRootedTree& t, VertexId start, CostModel model,
                 const std::vector<EdgeId>* filter)
        : lat(t, start, model, filter) {
        const int m = lat.m();
        const size_t states = size_t{1} << m;
        best.assign(states, kInfWeight);
        via.assign(states, 0xff);
        best[0] = lat.guard(0);
        using QE = std::pair<Weight, std::uint32_t>;
        std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
        pq.push({best[0], 0});
        while (!pq.empty()) {
            auto [val, mask] = pq.top();
            pq.pop();
            if (val != best[mask]) continue;
            const Weight g = lat.guard(mask);
            for (int i = 0; i < m; ++i) {
                const std::uint32_t bit = 1u << i;
                if (mask & bit) continue;
                const bool oa = lat.occupied(lat.ea[static_cast<size_t>(i)], mask);
                const bool ob = lat.occupied(lat.eb[static_cast<size_t>(i)], mask);
                if (!oa && !ob) continue;
                const Weight nv = std::max(val, lat.move_cost(mask, i, g));
                if (nv < best[mask | bit]) {
                    best[mask | bit] = nv;
                    via[mask | bit] = static_cast<std::uint8_t>(i);
                    pq.push({nv, mask | bit});
                }
            }
        }
    }

    SearchStrategy witness(std::uint32_t mask) const {
        SearchStrategy s{lat.start, {}};
        while (mask != 0) {
            const int i = via[mask];
            s.moves.push_back(lat.eid[static_cast<size_t>(i)]);
            mask ^= 1u << i;
        }
        std::reverse(s.moves.begin(), s.moves.end());
        return s;
    }
};

}  // namespace detail

/// Exact minimum searcher count for clearing the whole subgraph (all edges
/// when `filter` is null, otherwise exactly the filtered edges, which must
/// form a subtree containing `start`), with an optimal strategy as witness.
/// Exhaustive over cleared-set states; refuses subgraphs above
/// kOracleMaxEdges edges.
inline OracleResult oracle_search(const WeightedRootedTree& t, VertexId start, CostModel model,
                                  const std::vector<EdgeId>* filter = nullptr) {
    detail::LatticeSweep sweep(t, start, model, filter);
    const std::uint32_t full =
        sweep.lat.m() == 32 ? ~0u : (1u << sweep.lat.m()) - 1;
    if (sweep.best[full] == kInfWeight)
        throw Error("oracle: filtered edges are not reachable from the start");
    return OracleResult{sweep.best[full], sweep.witness(full)};
}

inline Weight oracle_cs(const WeightedRootedTree& t, VertexId start, CostModel model,
                        const std::vector<EdgeId>* filter = nullptr) {
    return oracle_search(t, start, model, filter).searchers;
}

/// Guard-weight Pareto front over every partial strategy from `start`.
inline GuardProfile oracle_guard_profile(const WeightedRootedTree& t, VertexId start,
                                         CostModel model,
                                         const std::vector<EdgeId>* filter = nullptr) {
    detail::LatticeSweep sweep(t, start, model, filter);
    std::vector<GuardProfile::Point> raw;
    for (std::uint32_t mask = 0; mask < sweep.best.size(); ++mask)
        if (sweep.best[mask] != kInfWeight)
            raw.push_back({sweep.best[mask], sweep.lat.guard(mask)});
    std::sort(raw.begin(), raw.end(), [](const auto& x, const auto& y) {
        return x.peak != y.peak ? x.peak < y.peak : x.guard < y.guard;
    });
    GuardProfile out;
    for (const auto& p : raw)
        if (out.points.empty() || p.guard < out.points.back().guard) out.points.push_back(p);
    return out;
}

/// Least guard weight reachable with peak <= budget (kInfWeight when even the
/// empty partial exceeds the budget).
inline Weight oracle_min_guard(const WeightedRootedTree& t, VertexId start, Weight budget,
                               CostModel model,
                               const std::vector<EdgeId>* filter = nullptr) {
    return oracle_guard_profile(t, start, model, filter).min_guard(budget);
}

/// True when the partial strategy stays within `k` searchers and ends with the
/// least guard weight any k-bounded partial from the same start can reach.
inline bool is_guard_minimal_partial(const WeightedRootedTree& t, const SearchStrategy& s,
                                     Weight k, CostModel model = CostModel::Composed,
                                     EdgeId excluded = kNoEdge) {
    SearchState st(t, s.start, model, excluded);
    for (EdgeId e : s.moves) {
        if (st.cost_of(e).total() > k) return false;
        st.apply(e);
    }
    if (st.peak_so_far() > k) return false;
    std::vector<EdgeId> filter;
    const bool use_filter = excluded != kNoEdge;
    if (use_filter) {
        const EdgeRec& r = t.edge(excluded);
        const VertexId head = (r.a == s.start || r.b == s.start)
                                  ? s.start
                                  : throw Error("excluded edge must touch the start");
        const VertexId away = r.a == head ? r.b : r.a;
        filter = t.subtree_edges(head, away);
    }
    return st.guard_weight() ==
           oracle_min_guard(t, s.start, k, model, use_filter ? &filter : nullptr);
}

/// Second, structurally different ground truth: tries every prefix-connected
/// clearing order outright (replaying each through the incremental state) and
/// keeps the best peak. Only for very small trees.
inline Weight oracle_cs_by_enumeration(const WeightedRootedTree& t, VertexId start,
                                       CostModel model) {
    if (t.edge_count() > 8) throw CapError("enumeration oracle limited to 8 edges");
    Weight best = kInfWeight;
    std::function<void(const SearchState&)> go = [&](const SearchState& st) {
        if (st.peak_so_far() >= best) return;
        if (st.cleared_count() == t.edge_count()) {
            best = st.peak_so_far();
            return;
        }
        for (EdgeId e = 0; e < t.edge_count(); ++e) {
            if (st.cleared(e)) continue;
            const EdgeRec& r = t.edge(e);
            if (st.occupied(r.a) == st.occupied(r.b)) continue;
            SearchState next = st;
            next.apply(e);
            go(next);
        }
    };
    go(SearchState(t, start, model));
    return best;
}

/// Rooted canonical signature: equal exactly for isomorphic weighted rooted
/// trees (vertex and edge weights both participate).
inline std::string canonical_signature(const WeightedRootedTree& t) {
    std::function<std::string(VertexId)> sig = [&](VertexId v) {
        std::vector<std::string> parts;
        for (VertexId c : t.children(v))
            parts.push_back(std::to_string(t.edge(t.parent_edge(c)).w) + sig(c));
        std::sort(parts.begin(), parts.end());
        std::string out = "(" + std::to_string(t.weight(v));
        for (const std::string& p : parts) out += p;
        return out + ")";
    };
    return sig(t.root());
}

namespace detail {

struct Shape {
    std::vector<int> kids;  // indices into the pool of shapes with fewer edges
    int edges = 0;
};

// pool[e] = all canonical rooted shapes with e edges; children are chosen as a
// non-increasing sequence of (size, index) pairs so each multiset appears once
inline const std::vector<std::vector<Shape>>& shape_pool(int max_edges) {
    static std::vector<std::vector<Shape>> pool{{Shape{{}, 0}}};
    for (int m = static_cast<int>(pool.size()); m <= max_edges; ++m) {
        std::vector<Shape> out;
        std::vector<int> kids;
        // child recorded as size * 1e6 + index; strictly for ordering
        std::function<void(int, long long)> extend = [&](int left, long long cap) {
            if (left == 0) {
                out.push_back(Shape{kids, m});
                return;
            }
            for (int c = std::min(left - 1, m - 1); c >= 0; --c) {
                if (c + 1 > left) continue;
                const int hi = static_cast<int>(pool[static_cast<size_t>(c)].size()) - 1;
                for (int i = hi; i >= 0; --i) {
                    const long long key = static_cast<long long>(c) * 1000000 + i;
                    if (key > cap) continue;
                    kids.push_back(static_cast<int>(key));
                    extend(left - (c + 1), key);
                    kids.pop_back();
                }
            }
        };
        extend(m, static_cast<long long>(m) * 1000000 + 1000000);
        pool.push_back(std::move(out));
    }
    return pool;
}

inline const Shape& shape_at(long long key) {
    const auto& pool = shape_pool(static_cast<int>(key / 1000000));
    return pool[static_cast<size_t>(key / 1000000)][static_cast<size_t>(key % 1000000)];
}

inline void materialize(long long key, VertexId parent, std::vector<EdgeRec>& edges,
                        int& next_id) {
    const VertexId me = next_id++;
    if (parent != kNoVertex) edges.push_back(EdgeRec{parent, me, 1});
    for (int k : shape_at(key).kids)
        materialize(k, me, edges, next_id);
}

inline int shape_max_degree(long long key, bool is_root) {
    const Shape& s = shape_at(key);
    int d = static_cast<int>(s.kids.size()) + (is_root ? 0 : 1);
    for (int k : s.kids) d = std::max(d, shape_max_degree(k, false));
    return d;
}

}  // namespace detail

/// Streams every rooted tree with exactly `edges` edges, maximum degree at
/// most `max_degree` (0 = unbounded), and vertex weights drawn from `weights`,
/// one representative per weighted rooted isomorphism class. Root is vertex 0,
/// ids are preorder, edge weights are 1. Returns the number of trees visited.
inline std::size_t enumerate_small_trees(
    int edges, int max_degree, std::vector<Weight> weights,
    const std::function<void(const WeightedRootedTree&)>& visit) {
    if (edges < 1) throw Error("enumerate_small_trees: need at least one edge");
    if (edges > 12) throw CapError("enumerate_small_trees: too many edges");
    std::sort(weights.begin(), weights.end());
    weights.erase(std::unique(weights.begin(), weights.end()), weights.end());
    if (weights.empty()) throw Error("enumerate_small_trees: empty weight set");
    const auto& pool = detail::shape_pool(edges);
    std::size_t count = 0;
    const int n = edges + 1;
    for (std::size_t si = 0; si < pool[static_cast<size_t>(edges)].size(); ++si) {
        const long long key = static_cast<long long>(edges) * 1000000 + static_cast<long long>(si);
        if (max_degree > 0 && detail::shape_max_degree(key, true) > max_degree) continue;
        std::vector<EdgeRec> erecs;
        int next_id = 0;
        detail::materialize(key, kNoVertex, erecs, next_id);
        std::unordered_set<std::string> seen;
        std::vector<std::size_t> pick(static_cast<size_t>(n), 0);
        while (true) {
            std::vector<Weight> vw(static_cast<size_t>(n));
            for (int v = 0; v < n; ++v) vw[static_cast<size_t>(v)] = weights[pick[static_cast<size_t>(v)]];
            WeightedRootedTree t(std::move(vw), erecs, 0);
            if (seen.insert(canonical_signature(t)).second) {
                ++count;
                visit(t);
            }
            int pos = n - 1;
            while (pos >= 0 && pick[static_cast<size_t>(pos)] + 1 == weights.size()) {
                pick[static_cast<size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
            ++pick[static_cast<size_t>(pos)];
        }
    }
    return count;
}

}  // namespace csearch
