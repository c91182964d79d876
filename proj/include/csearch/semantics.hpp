#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tree.hpp"

namespace csearch {

/// A (partial) connected search strategy: searchers start on `start` and each
/// move clears one edge incident to the already-cleared region.
struct SearchStrategy {
    VertexId start = 0;
    std::vector<EdgeId> moves;
};

/// Who pays for the first slide away from the start vertex.
///
/// * Composed: the start is treated as guarded from the beginning (w(start)
///   searchers are pinned there before the first move). This is the model the
///   solver works in: a subtree head is always guarded by its parent strategy
///   at the moment its own moves begin, and the verifier uses the same rule so
///   that solver output and referee agree.
/// * Primitive: before anything is cleared there is nothing to protect, so
///   the initial stash at the start is free. A degree-1 start never needs
///   guarding at all. This is the ground-truth game the oracle plays, and the
///   two models coincide on trees whose degree<=1 vertices have weight 1.
enum class CostModel { Composed, Primitive };

/// Incrementally maintained state of a partial search on (a filtered part of)
/// a tree. `excluded` hides one edge from contamination accounting, which is
/// how a subtree is searched in isolation while the host tree keeps the
/// connecting edge contaminated.
class SearchState {
  public:
    SearchState(const WeightedRootedTree& t, VertexId start, CostModel model = CostModel::Composed,
                EdgeId excluded = kNoEdge)
        : t_(&t), start_(start), model_(model), excluded_(excluded) {
        const int n = t.vertex_count();
        if (start < 0 || start >= n) throw Error("start vertex out of range");
        cleared_.assign(static_cast<size_t>(t.edge_count()), 0);
        occupied_.assign(static_cast<size_t>(n), 0);
        contaminated_deg_.assign(static_cast<size_t>(n), 0);
        for (EdgeId e = 0; e < t.edge_count(); ++e) {
            if (e == excluded_) continue;
            ++contaminated_deg_[static_cast<size_t>(t.edge(e).a)];
            ++contaminated_deg_[static_cast<size_t>(t.edge(e).b)];
        }
        occupied_[static_cast<size_t>(start)] = 1;
        if (model_ == CostModel::Composed && contaminated_deg_[static_cast<size_t>(start)] > 0)
            guard_total_ = t.weight(start);
        peak_ = guard_total_;
    }

    struct Cost {
        Weight guarding = 0;  // searchers pinned on guarded vertices during the move
        Weight clearing = 0;  // the sliding group (plus a released source it absorbs)
        Weight total() const { return checked_add(guarding, clearing); }
    };

    /// Concurrent searcher requirement of clearing `e` next. With the cleared
    /// side at u and the far side at v, the slide needs max(w(uv), w(v)) when v
    /// keeps contaminated edges and w(uv) otherwise; u's guards either stay
    /// pinned (u keeps other contaminated edges) or are released into the
    /// sliding group, in which case the move costs max(w(u), slide) on top of
    /// the remaining guards.
    Cost cost_of(EdgeId e) const {
        auto [u, v] = classify(e);
        const Weight we = t_->edge(e).w;
        const bool u_keeps = contaminated_deg_[static_cast<size_t>(u)] > 1;
        const bool v_needs = contaminated_deg_[static_cast<size_t>(v)] > 1;
        const Weight slide = std::max(we, v_needs ? t_->weight(v) : Weight{0});
        const bool source_guarded = model_ == CostModel::Composed || cleared_count_ > 0;
        if (!source_guarded) {
            // primitive model, first move: the stash at the start is unpinned
            return Cost{0, checked_add(u_keeps ? t_->weight(u) : Weight{0}, slide)};
        }
        if (u_keeps) return Cost{guard_total_, slide};
        return Cost{checked_sub(guard_total_, t_->weight(u)), std::max(t_->weight(u), slide)};
    }

    void apply(EdgeId e) {
        Cost c = cost_of(e);
        peak_ = std::max(peak_, c.total());
        auto [u, v] = classify(e);
        if (cleared_count_ == 0 && model_ == CostModel::Primitive &&
            contaminated_deg_[static_cast<size_t>(start_)] > 0) {
            // from now on the start is an ordinary occupied vertex
            guard_total_ = checked_add(guard_total_, t_->weight(start_));
        }
        cleared_[static_cast<size_t>(e)] = 1;
        ++cleared_count_;
        --contaminated_deg_[static_cast<size_t>(u)];
        --contaminated_deg_[static_cast<size_t>(v)];
        if (contaminated_deg_[static_cast<size_t>(u)] == 0)
            guard_total_ = checked_sub(guard_total_, t_->weight(u));
        occupied_[static_cast<size_t>(v)] = 1;
        if (contaminated_deg_[static_cast<size_t>(v)] > 0)
            guard_total_ = checked_add(guard_total_, t_->weight(v));
    }

    bool cleared(EdgeId e) const { return cleared_[static_cast<size_t>(e)] != 0; }
    int cleared_count() const { return cleared_count_; }
    bool occupied(VertexId v) const { return occupied_[static_cast<size_t>(v)] != 0; }

    bool guarded(VertexId v) const {
        if (!occupied_[static_cast<size_t>(v)] || contaminated_deg_[static_cast<size_t>(v)] == 0)
            return false;
        return model_ == CostModel::Composed || cleared_count_ > 0;
    }

    /// Total weight of the guarded vertices.
    Weight guard_weight() const { return guard_total_; }

    /// Largest concurrent requirement seen so far (for Composed this starts at
    /// w(start), the cost of holding the head of an otherwise empty strategy).
    Weight peak_so_far() const { return peak_; }

    std::vector<VertexId> guarded_vertices() const {
        std::vector<VertexId> out;
        for (VertexId v = 0; v < t_->vertex_count(); ++v)
            if (guarded(v)) out.push_back(v);
        return out;
    }

    VertexId start() const { return start_; }
    const WeightedRootedTree& tree() const { return *t_; }

  private:
    // returns {cleared-side endpoint, far endpoint}
    std::pair<VertexId, VertexId> classify(EdgeId e) const {
        if (e < 0 || e >= t_->edge_count()) throw Error("edge id out of range");
        if (e == excluded_) throw Error("edge is outside the searched subtree");
        if (cleared_[static_cast<size_t>(e)]) throw Error("edge already cleared (monotonicity violation)");
        const EdgeRec& r = t_->edge(e);
        const bool oa = occupied_[static_cast<size_t>(r.a)];
        const bool ob = occupied_[static_cast<size_t>(r.b)];
        if (oa && ob) throw Error("both endpoints occupied on an uncleared edge");
        if (!oa && !ob) throw Error("edge not incident to the cleared region (connectivity violation)");
        return oa ? std::pair{r.a, r.b} : std::pair{r.b, r.a};
    }

    const WeightedRootedTree* t_;
    VertexId start_;
    CostModel model_;
    EdgeId excluded_;
    std::vector<char> cleared_, occupied_;
    std::vector<int> contaminated_deg_;
    Weight guard_total_ = 0;
    Weight peak_ = 0;
    int cleared_count_ = 0;
};

/// Guard set recomputed from scratch: occupied vertices (endpoints of cleared
/// edges, plus the start) that still touch a contaminated edge. Used to
/// cross-check the incremental accounting in SearchState.
inline std::vector<VertexId> guarded_set(const WeightedRootedTree& t,
                                         const std::set<EdgeId>& cleared, VertexId start,
                                         CostModel model = CostModel::Composed,
                                         EdgeId excluded = kNoEdge) {
    std::vector<VertexId> out;
    if (model == CostModel::Primitive && cleared.empty()) return out;
    auto occupied = [&](VertexId v) {
        if (v == start) return true;
        for (const auto& [nb, e] : t.neighbors(v))
            if (cleared.count(e)) return true;
        return false;
    };
    for (VertexId v = 0; v < t.vertex_count(); ++v) {
        if (!occupied(v)) continue;
        bool contaminated = false;
        for (const auto& [nb, e] : t.neighbors(v))
            if (e != excluded && !cleared.count(e)) contaminated = true;
        if (contaminated) out.push_back(v);
    }
    return out;
}

struct MoveReport {
    EdgeId edge = kNoEdge;
    Weight clearing = 0;
    Weight guarding = 0;
    Weight total() const { return clearing + guarding; }
};

struct VerificationReport {
    bool ok = false;
    Weight searchers_used = 0;
    std::vector<MoveReport> per_move;
    std::string failure_reason;
    int failure_move = -1;  // index into the strategy, -1 if not move-specific
};

/// Referee for complete strategies in the composed unit-edge model: every
/// prefix must stay connected and monotone, every move must fit the budget,
/// and every edge must be cleared at the end. Trees with non-unit edge
/// weights are rejected; canonicalize them first.
inline VerificationReport verify(const WeightedRootedTree& t, const SearchStrategy& s, Weight k) {
    VerificationReport rep;
    if (!t.unit_edges()) {
        rep.failure_reason = "tree has non-unit edge weights; canonicalize before verifying";
        return rep;
    }
    if (s.start < 0 || s.start >= t.vertex_count()) {
        rep.failure_reason = "start vertex out of range";
        return rep;
    }
    SearchState st(t, s.start, CostModel::Composed);
    if (t.edge_count() > 0 && k < t.weight(s.start)) {
        rep.failure_reason = "budget below the weight of the start vertex";
        return rep;
    }
    for (size_t i = 0; i < s.moves.size(); ++i) {
        EdgeId e = s.moves[i];
        SearchState::Cost c;
        try {
            c = st.cost_of(e);
        } catch (const Error& err) {
            rep.failure_reason = err.what();
            rep.failure_move = static_cast<int>(i);
            return rep;
        }
        if (c.total() > k) {
            rep.failure_reason = "budget exceeded at move " + std::to_string(i + 1) + ": needs " +
                                 std::to_string(c.total()) + " > " + std::to_string(k);
            rep.failure_move = static_cast<int>(i);
            rep.searchers_used = std::max(st.peak_so_far(), c.total());
            return rep;
        }
        st.apply(e);
        rep.per_move.push_back(MoveReport{e, c.clearing, c.guarding});
    }
    rep.searchers_used = st.peak_so_far();
    if (st.cleared_count() != t.edge_count()) {
        rep.failure_reason = "incomplete cover: " + std::to_string(st.cleared_count()) + " of " +
                             std::to_string(t.edge_count()) + " edges cleared";
        return rep;
    }
    rep.ok = true;
    return rep;
}

/// Replays a partial strategy (no completeness requirement) and returns the
/// final state; throws on structural violations, and on budget violations when
/// a finite budget is given.
inline SearchState replay_partial(const WeightedRootedTree& t, const SearchStrategy& s,
                                  Weight budget = kInfWeight,
                                  CostModel model = CostModel::Composed,
                                  EdgeId excluded = kNoEdge) {
    SearchState st(t, s.start, model, excluded);
    for (size_t i = 0; i < s.moves.size(); ++i) {
        SearchState::Cost c = st.cost_of(s.moves[i]);
        if (c.total() > budget)
            throw Error("budget exceeded at move " + std::to_string(i + 1));
        st.apply(s.moves[i]);
    }
    return st;
}

/// Guard weight after running a partial strategy from its start.
inline Weight guard_weight(const WeightedRootedTree& t, const SearchStrategy& s) {
    return replay_partial(t, s).guard_weight();
}

/// Concatenates two partial strategies. The cleared sets must be disjoint and
/// every prefix of s2 must stay attached to the region s1 cleared, which the
/// replay enforces (each move must slide out of an occupied vertex).
inline SearchStrategy compose(const WeightedRootedTree& t, const SearchStrategy& s1,
                              const SearchStrategy& s2) {
    std::set<EdgeId> seen(s1.moves.begin(), s1.moves.end());
    for (EdgeId e : s2.moves)
        if (!seen.insert(e).second)
            throw Error("compose: strategies clear overlapping edges");
    if (!replay_partial(t, s1).occupied(s2.start))
        throw Error("compose: second strategy starts outside the cleared region");
    SearchStrategy out{s1.start, s1.moves};
    out.moves.insert(out.moves.end(), s2.moves.begin(), s2.moves.end());
    replay_partial(t, out);  // throws if s2 detaches from the cleared region
    return out;
}

}  // namespace csearch
