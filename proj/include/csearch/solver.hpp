#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "semantics.hpp"
#include "transform.hpp"
#include "tree.hpp"

namespace csearch {

struct SolverOptions {
    // crawl budgets k, k+1, k+2, ... instead of jumping to the next budget at
    // which an outcome changes; reference mode for differential testing
    bool naive_budget = false;
    // refuse instances whose permutation enumeration would be factorial in a
    // degree above this (0 = unbounded)
    int max_degree_cap = 8;
    // skip child permutations whose subtree-shape sequence repeats an already
    // processed one; off until validated against the exhaustive mode
    bool dedup_sibling_permutations = false;
};

struct FrontierEntry {
    Weight searchers = 0;  // peak concurrent searchers of the strategy
    Weight guard = 0;      // terminal guard weight
    std::vector<EdgeId> moves;
};

/// Pareto set of partial strategies for one subtree, sorted by searchers
/// ascending (guard weight then strictly descends). The do-nothing partial —
/// peak and guard both w(head) — is kept implicit: stored entries all beat it.
class StrategyFrontier {
  public:
    StrategyFrontier() = default;
    StrategyFrontier(VertexId head, Weight head_weight)
        : head_(head), head_weight_(head_weight) {}

    VertexId head() const { return head_; }
    Weight head_weight() const { return head_weight_; }
    const std::vector<FrontierEntry>& entries() const { return entries_; }

    void insert(FrontierEntry e) {
        if (e.searchers >= head_weight_ && e.guard >= head_weight_) return;
        for (const FrontierEntry& x : entries_)
            if (x.searchers <= e.searchers && x.guard <= e.guard) return;
        std::erase_if(entries_, [&](const FrontierEntry& x) {
            return x.searchers >= e.searchers && x.guard >= e.guard;
        });
        entries_.insert(std::lower_bound(entries_.begin(), entries_.end(), e.searchers,
                                         [](const FrontierEntry& x, Weight s) {
                                             return x.searchers < s;
                                         }),
                        std::move(e));
    }

    /// Deepest-clearing (max searchers) nonempty entry affordable at `budget`.
    const FrontierEntry* best_within(Weight budget) const {
        const FrontierEntry* best = nullptr;
        for (const FrontierEntry& x : entries_) {
            if (x.searchers > budget) break;
            if (!x.moves.empty()) best = &x;
        }
        return best;
    }

    /// Smallest stored searcher count above `budget` — the next budget at
    /// which a lookup here would return more.
    Weight next_above(Weight budget) const {
        for (const FrontierEntry& x : entries_)
            if (x.searchers > budget) return x.searchers;
        return kInfWeight;
    }

    /// Least guard weight reachable within `budget`, counting the implicit
    /// do-nothing partial. kInfWeight when even that is unaffordable.
    Weight min_guard(Weight budget) const {
        Weight best = budget >= head_weight_ ? head_weight_ : kInfWeight;
        for (const FrontierEntry& x : entries_) {
            if (x.searchers > budget) break;
            best = std::min(best, x.guard);
        }
        return best;
    }

    /// The complete-search entry (guard 0); null while none is known.
    const FrontierEntry* complete() const {
        return !entries_.empty() && entries_.back().guard == 0 ? &entries_.back() : nullptr;
    }

  private:
    VertexId head_ = kNoVertex;
    Weight head_weight_ = 0;
    std::vector<FrontierEntry> entries_;
};

struct MinimalPartialOutcome {
    enum class Status { Complete, Partial, Failure };
    Status status = Status::Failure;
    std::vector<EdgeId> moves;
    Weight peak = 0;
    Weight guard = 0;
    // smallest budget > k at which this permutation's outcome changes
    Weight next_budget = kInfWeight;
};

/// Bottom-up frontier construction over directed subtrees. A frontier for
/// (head, parent) covers the subtree hanging off `head` away from `parent`;
/// the memo is keyed by that pair, so re-rooted solves share all common
/// directed subtrees (at most 3n of them exist).
class ConnectedSearchSolver {
  public:
    explicit ConnectedSearchSolver(const WeightedRootedTree& t, SolverOptions opt = {})
        : t_(&t), opt_(opt) {
        if (!t.unit_edges())
            throw Error("solver requires unit edge weights; canonicalize the tree first");
        if (opt_.max_degree_cap > 0 && t.max_degree() > opt_.max_degree_cap)
            throw CapError("maximum degree " + std::to_string(t.max_degree()) +
                           " exceeds the cap of " + std::to_string(opt_.max_degree_cap) +
                           "; child permutations are factorial in the degree");
    }

    const WeightedRootedTree& tree() const { return *t_; }

    /// One pass of the greedy minimal-partial construction at budget k: clear
    /// the edges from `head` to each of `order` in turn, absorbing after each
    /// the deepest affordable frontier entry at the new guard, then keep
    /// absorbing anywhere until nothing fits (smallest guard vertex first).
    MinimalPartialOutcome minimal_partial_strategy(Weight k, VertexId head, VertexId parent,
                                                   const std::vector<VertexId>& order) {
        validate_order(head, parent, order);
        for (VertexId c : order) frontier(c, head);

        const EdgeId excluded = parent == kNoVertex ? kNoEdge : t_->edge_between(head, parent);
        SearchState st(*t_, head, CostModel::Composed, excluded);
        MinimalPartialOutcome out;
        Weight next = kInfWeight;
        std::vector<VertexId> toward_head(static_cast<size_t>(t_->vertex_count()), kNoVertex);
        toward_head[static_cast<size_t>(head)] = parent;

        auto apply = [&](EdgeId e) {
            const EdgeRec& r = t_->edge(e);
            const VertexId src = st.occupied(r.a) ? r.a : r.b;
            const VertexId dst = src == r.a ? r.b : r.a;
            if (st.cost_of(e).total() > k)
                throw Error("internal: absorbed move exceeds the budget");
            toward_head[static_cast<size_t>(dst)] = src;
            st.apply(e);
            out.moves.push_back(e);
        };
        auto absorb = [&](VertexId v) {
            const StrategyFrontier& f =
                memo_.at({v, toward_head[static_cast<size_t>(v)]});
            const Weight outside = checked_sub(st.guard_weight(), t_->weight(v));
            const Weight budget = checked_sub(k, outside);
            const Weight above = f.next_above(budget);
            if (above != kInfWeight) next = std::min(next, checked_add(outside, above));
            const FrontierEntry* e = f.best_within(budget);
            if (!e) return false;
            for (EdgeId m : e->moves) apply(m);
            return true;
        };

        for (VertexId c : order) {
            const EdgeId e = t_->edge_between(head, c);
            const Weight cost = st.cost_of(e).total();
            if (cost > k) {
                out.status = MinimalPartialOutcome::Status::Failure;
                out.peak = st.peak_so_far();
                out.guard = st.guard_weight();
                out.next_budget = std::min(next, cost);
                return out;
            }
            apply(e);
            if (st.guarded(c)) absorb(c);
        }
        for (bool progress = true; progress;) {
            progress = false;
            for (VertexId v : st.guarded_vertices()) {
                if (absorb(v)) {
                    progress = true;
                    break;
                }
            }
        }
        out.peak = st.peak_so_far();
        out.guard = st.guard_weight();
        out.next_budget = next;
        out.status = out.guard == 0 ? MinimalPartialOutcome::Status::Complete
                                    : MinimalPartialOutcome::Status::Partial;
        if (out.status == MinimalPartialOutcome::Status::Partial && next == kInfWeight)
            throw Error("internal: partial outcome with no continuation budget");
        return out;
    }

    /// Frontier for the subtree at `head` away from `parent` (kNoVertex for
    /// the whole tree), built recursively and memoized.
    const StrategyFrontier& frontier(VertexId head, VertexId parent) {
        const std::pair<VertexId, VertexId> key{head, parent};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        std::vector<VertexId> children;
        for (const auto& [nb, e] : t_->neighbors(head))
            if (nb != parent) children.push_back(nb);
        for (VertexId c : children) frontier(c, head);

        StrategyFrontier f(head, t_->weight(head));
        if (children.empty()) {
            f.insert(FrontierEntry{0, 0, {}});
        } else {
            const Weight cap = checked_add(t_->total_vertex_weight(), 1);
            std::set<std::string> seen;
            std::vector<VertexId> perm = children;
            do {
                if (opt_.dedup_sibling_permutations && !seen.insert(perm_shape(perm, head)).second)
                    continue;
                Weight k = 1;
                while (true) {
                    MinimalPartialOutcome res = minimal_partial_strategy(k, head, parent, perm);
                    const bool complete = res.status == MinimalPartialOutcome::Status::Complete;
                    if (res.status != MinimalPartialOutcome::Status::Failure)
                        f.insert(FrontierEntry{res.peak, res.guard, std::move(res.moves)});
                    if (complete) break;
                    k = opt_.naive_budget ? k + 1 : res.next_budget;
                    if (k > cap) throw Error("internal: budget exceeded the total weight");
                }
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        return memo_.emplace(key, std::move(f)).first->second;
    }

  private:
    void validate_order(VertexId head, VertexId parent, const std::vector<VertexId>& order) const {
        std::vector<VertexId> expect;
        for (const auto& [nb, e] : t_->neighbors(head))
            if (nb != parent) expect.push_back(nb);
        std::vector<VertexId> got = order;
        std::sort(got.begin(), got.end());
        if (got != expect)
            throw Error("child order must list every child of the head exactly once");
    }

    // signature of a child permutation by the weighted shapes of the subtrees,
    // for optional sibling-permutation dedup
    std::string perm_shape(const std::vector<VertexId>& perm, VertexId head) {
        std::string s;
        for (VertexId c : perm) s += dir_signature(c, head) + "|";
        return s;
    }

    const std::string& dir_signature(VertexId v, VertexId parent) {
        const std::pair<VertexId, VertexId> key{v, parent};
        if (auto it = sig_.find(key); it != sig_.end()) return it->second;
        std::vector<std::string> parts;
        for (const auto& [nb, e] : t_->neighbors(v))
            if (nb != parent) parts.push_back(dir_signature(nb, v));
        std::sort(parts.begin(), parts.end());
        std::string s = "(" + std::to_string(t_->weight(v));
        for (const std::string& p : parts) s += p;
        s += ")";
        return sig_.emplace(key, std::move(s)).first->second;
    }

    const WeightedRootedTree* t_;
    SolverOptions opt_;
    std::map<std::pair<VertexId, VertexId>, StrategyFrontier> memo_;
    std::map<std::pair<VertexId, VertexId>, std::string> sig_;
};

struct SolveResult {
    VertexId root = kNoVertex;  // start vertex of the strategy
    Weight searchers = 0;
    SearchStrategy strategy;           // refers to `tree`
    WeightedRootedTree tree;           // the canonical (unit-edge) tree searched
    std::vector<VertexOrigin> origins; // tree vertex -> input provenance
};

/// Optimal connected search of t from its root. The instance is canonicalized
/// internally; the returned strategy lives on the canonical tree (which equals
/// the input up to leaf-weight normalization whenever the input already has
/// unit edges), with provenance back to input vertices.
inline SolveResult solve_rooted(const WeightedRootedTree& t, SolverOptions opt = {}) {
    TransformedTree ct = canonicalize(t);
    ConnectedSearchSolver solver(ct.tree, opt);
    const StrategyFrontier& f = solver.frontier(ct.tree.root(), kNoVertex);
    const FrontierEntry* e = f.complete();
    if (!e) throw Error("internal: frontier lacks a complete strategy");
    SolveResult r;
    r.root = ct.tree.root();
    r.searchers = e->searchers;
    r.strategy = SearchStrategy{ct.tree.root(), e->moves};
    r.tree = std::move(ct.tree);
    r.origins = std::move(ct.origins);
    return r;
}

/// Optimal connected search over all start vertices of t (smallest optimal
/// start id on ties): min over v of solve_rooted(t rerooted at v).
///
/// Unit-edge input canonicalizes the same way from every root, so one solver
/// instance shares the ≤3n directed-subtree frontiers across all candidate
/// roots. Weighted edges make the canonical form root-directed — lifting uses
/// the parent orientation — so each start gets its own canonicalization.
inline SolveResult solve_unrooted(const WeightedRootedTree& t, SolverOptions opt = {}) {
    if (t.unit_edges()) {
        TransformedTree ct = canonicalize(t);
        ConnectedSearchSolver solver(ct.tree, opt);
        VertexId best_v = kNoVertex;
        const FrontierEntry* best = nullptr;
        for (VertexId v = 0; v < ct.tree.vertex_count(); ++v) {
            const FrontierEntry* e = solver.frontier(v, kNoVertex).complete();
            if (!e) throw Error("internal: frontier lacks a complete strategy");
            if (!best || e->searchers < best->searchers) {
                best = e;
                best_v = v;
            }
        }
        SolveResult r;
        r.root = best_v;
        r.searchers = best->searchers;
        r.strategy = SearchStrategy{best_v, best->moves};
        r.tree = std::move(ct.tree);
        r.origins = std::move(ct.origins);
        return r;
    }
    SolveResult best;
    bool have = false;
    for (VertexId v = 0; v < t.vertex_count(); ++v) {
        SolveResult r = solve_rooted(t.rerooted(v), opt);
        if (!have || r.searchers < best.searchers) {
            best = std::move(r);
            have = true;
        }
    }
    return best;
}

}  // namespace csearch
