#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace csearch {

using Weight = std::uint64_t;
using VertexId = int;
using EdgeId = int;

inline constexpr VertexId kNoVertex = -1;
inline constexpr EdgeId kNoEdge = -1;
inline constexpr Weight kInfWeight = std::numeric_limits<Weight>::max();

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input (files, instance descriptions). CLI exit code 2.
struct ParseError : Error {
    using Error::Error;
};

/// A deliberate resource limit was hit (oracle size, degree cap). Exit code 3.
struct CapError : Error {
    using Error::Error;
};

/// All weight arithmetic goes through these helpers so that a sum that
/// exceeds the 64-bit range stops the computation instead of wrapping.
inline Weight checked_add(Weight a, Weight b) {
    Weight r;
    if (__builtin_add_overflow(a, b, &r)) throw Error("weight addition overflows 64 bits");
    return r;
}

inline Weight checked_mul(Weight a, Weight b) {
    Weight r;
    if (__builtin_mul_overflow(a, b, &r)) throw Error("weight multiplication overflows 64 bits");
    return r;
}

inline Weight checked_sub(Weight a, Weight b) {
    if (b > a) throw Error("weight subtraction underflows");
    return a - b;
}

struct EdgeRec {
    VertexId a = kNoVertex;  // parent endpoint under the current root
    VertexId b = kNoVertex;  // child endpoint
    Weight w = 1;
};

/// A tree with positive integer weights on vertices and edges, oriented from a
/// root. Vertex ids are dense (0..n-1) and edge ids are indices into `edges()`;
/// both stay stable under re-rooting, which only recomputes the orientation.
class WeightedRootedTree {
  public:
    WeightedRootedTree() = default;

    WeightedRootedTree(std::vector<Weight> vertex_weights, std::vector<EdgeRec> edges,
                       VertexId root)
        : vw_(std::move(vertex_weights)), edges_(std::move(edges)), root_(root) {
        validate_and_index();
    }

    int vertex_count() const { return static_cast<int>(vw_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    VertexId root() const { return root_; }

    Weight weight(VertexId v) const { return vw_.at(static_cast<size_t>(v)); }
    void set_weight(VertexId v, Weight w) {
        if (w == 0) throw Error("vertex weight must be positive");
        vw_.at(static_cast<size_t>(v)) = w;
    }

    const EdgeRec& edge(EdgeId e) const { return edges_.at(static_cast<size_t>(e)); }
    const std::vector<EdgeRec>& edges() const { return edges_; }
    void set_edge_weight(EdgeId e, Weight w) {
        if (w == 0) throw Error("edge weight must be positive");
        edges_.at(static_cast<size_t>(e)).w = w;
    }

    bool unit_edges() const {
        return std::all_of(edges_.begin(), edges_.end(), [](const EdgeRec& e) { return e.w == 1; });
    }

    int degree(VertexId v) const { return static_cast<int>(adj_.at(static_cast<size_t>(v)).size()); }

    int max_degree() const {
        int d = 0;
        for (VertexId v = 0; v < vertex_count(); ++v) d = std::max(d, degree(v));
        return d;
    }

    bool is_leaf(VertexId v) const { return degree(v) <= 1 && v != root_; }

    VertexId parent(VertexId v) const { return parent_.at(static_cast<size_t>(v)); }
    EdgeId parent_edge(VertexId v) const { return parent_edge_.at(static_cast<size_t>(v)); }

    /// Children in ascending vertex-id order.
    const std::vector<VertexId>& children(VertexId v) const {
        return children_.at(static_cast<size_t>(v));
    }

    /// Neighbours in ascending vertex-id order, with the connecting edge ids.
    const std::vector<std::pair<VertexId, EdgeId>>& neighbors(VertexId v) const {
        return adj_.at(static_cast<size_t>(v));
    }

    EdgeId edge_between(VertexId u, VertexId v) const {
        for (const auto& [nb, e] : adj_.at(static_cast<size_t>(u)))
            if (nb == v) return e;
        throw Error("no edge between vertices " + std::to_string(u) + " and " + std::to_string(v));
    }

    /// Edge ids of the subtree hanging below `v` when `p` is treated as its
    /// parent (p == kNoVertex means v is the root of the view). The connecting
    /// edge v-p itself is not included.
    std::vector<EdgeId> subtree_edges(VertexId v, VertexId p) const {
        std::vector<EdgeId> out;
        std::vector<std::pair<VertexId, VertexId>> stack{{v, p}};
        while (!stack.empty()) {
            auto [x, from] = stack.back();
            stack.pop_back();
            for (const auto& [nb, e] : adj_.at(static_cast<size_t>(x))) {
                if (nb == from) continue;
                out.push_back(e);
                stack.emplace_back(nb, x);
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<EdgeId> subtree_edges(VertexId v) const { return subtree_edges(v, parent(v)); }

    Weight total_vertex_weight() const {
        Weight s = 0;
        for (Weight w : vw_) s = checked_add(s, w);
        return s;
    }

    /// Same vertices, weights and edge ids; orientation recomputed from the new root.
    WeightedRootedTree rerooted(VertexId new_root) const {
        WeightedRootedTree t(*this);
        t.root_ = new_root;
        t.orient_from_root();
        return t;
    }

  private:
    void validate_and_index() {
        const int n = vertex_count();
        if (n == 0) throw Error("tree must have at least one vertex");
        if (root_ < 0 || root_ >= n) throw Error("root id out of range");
        if (static_cast<int>(edges_.size()) != n - 1)
            throw Error("tree must have exactly n-1 edges, got " + std::to_string(edges_.size()));
        for (Weight w : vw_)
            if (w == 0) throw Error("vertex weight must be positive");
        adj_.assign(static_cast<size_t>(n), {});
        for (EdgeId e = 0; e < edge_count(); ++e) {
            const EdgeRec& r = edges_[static_cast<size_t>(e)];
            if (r.a < 0 || r.a >= n || r.b < 0 || r.b >= n) throw Error("edge endpoint out of range");
            if (r.a == r.b) throw Error("self-loop edge");
            if (r.w == 0) throw Error("edge weight must be positive");
            adj_[static_cast<size_t>(r.a)].emplace_back(r.b, e);
            adj_[static_cast<size_t>(r.b)].emplace_back(r.a, e);
        }
        for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
        orient_from_root();
    }

    void orient_from_root() {
        const int n = vertex_count();
        parent_.assign(static_cast<size_t>(n), kNoVertex);
        parent_edge_.assign(static_cast<size_t>(n), kNoEdge);
        children_.assign(static_cast<size_t>(n), {});
        std::vector<char> seen(static_cast<size_t>(n), 0);
        std::vector<VertexId> stack{root_};
        seen[static_cast<size_t>(root_)] = 1;
        int reached = 1;
        while (!stack.empty()) {
            VertexId x = stack.back();
            stack.pop_back();
            for (const auto& [nb, e] : adj_[static_cast<size_t>(x)]) {
                if (seen[static_cast<size_t>(nb)]) continue;
                seen[static_cast<size_t>(nb)] = 1;
                ++reached;
                parent_[static_cast<size_t>(nb)] = x;
                parent_edge_[static_cast<size_t>(nb)] = e;
                children_[static_cast<size_t>(x)].push_back(nb);
                stack.push_back(nb);
            }
        }
        if (reached != n) throw Error("edges do not form a connected tree");
        for (auto& c : children_) std::sort(c.begin(), c.end());
        // store edge endpoints parent-first so emitted files read top-down
        for (VertexId v = 0; v < n; ++v) {
            EdgeId e = parent_edge_[static_cast<size_t>(v)];
            if (e == kNoEdge) continue;
            EdgeRec& r = edges_[static_cast<size_t>(e)];
            if (r.a == v) std::swap(r.a, r.b);
        }
    }

    std::vector<Weight> vw_;
    std::vector<EdgeRec> edges_;
    VertexId root_ = 0;
    std::vector<VertexId> parent_;
    std::vector<EdgeId> parent_edge_;
    std::vector<std::vector<VertexId>> children_;
    std::vector<std::vector<std::pair<VertexId, EdgeId>>> adj_;
};

/// A view of the subtree hanging below `head`; `head_parent` fixes the
/// direction (kNoVertex when the whole tree is meant).
struct SubtreeRef {
    const WeightedRootedTree* tree;
    VertexId head;
    VertexId head_parent;

    SubtreeRef(const WeightedRootedTree& t, VertexId h)
        : tree(&t), head(h), head_parent(t.parent(h)) {}
    SubtreeRef(const WeightedRootedTree& t, VertexId h, VertexId p)
        : tree(&t), head(h), head_parent(p) {}
};

}  // namespace csearch
