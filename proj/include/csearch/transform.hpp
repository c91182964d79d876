#pragma once

#include <string>
#include <vector>

#include "tree.hpp"

namespace csearch {

/// Where a vertex of a transformed tree came from.
struct VertexOrigin {
    enum class Kind {
        Original,   // same vertex as in the input (id in `vertex`)
        EdgeSplit,  // subdivision point of input edge `edge`
        Copy,       // vertex `vertex` of the input, in gadget copy `copy` (1-based)
        Apex,       // the fresh hub vertex of the three-copy gadget
    };
    Kind kind = Kind::Original;
    VertexId vertex = kNoVertex;
    EdgeId edge = kNoEdge;
    int copy = 0;

    std::string describe() const {
        switch (kind) {
            case Kind::Original:
                return "v" + std::to_string(vertex);
            case Kind::EdgeSplit:
                return "split(e" + std::to_string(edge) + ")";
            case Kind::Copy:
                return "copy" + std::to_string(copy) + "(v" + std::to_string(vertex) + ")";
            case Kind::Apex:
                return "apex";
        }
        return "?";
    }
};

struct TransformedTree {
    WeightedRootedTree tree;
    std::vector<VertexOrigin> origins;  // indexed by new vertex id
};

namespace detail {
inline std::vector<VertexOrigin> identity_origins(int n) {
    std::vector<VertexOrigin> o(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) o[static_cast<size_t>(v)] = {VertexOrigin::Kind::Original, v, kNoEdge, 0};
    return o;
}
}  // namespace detail

/// Sets the weight of every vertex of degree <= 1 to 1 (non-root leaves, and
/// the root itself when it hangs off at most one edge). The weight of such a
/// vertex never appears in any move cost, so the search number is unchanged;
/// afterwards the guarded-start and unguarded-start cost models agree.
inline WeightedRootedTree normalize_leaf_weights(const WeightedRootedTree& t) {
    std::vector<Weight> vw;
    vw.reserve(static_cast<size_t>(t.vertex_count()));
    for (VertexId v = 0; v < t.vertex_count(); ++v)
        vw.push_back(t.degree(v) <= 1 ? Weight{1} : t.weight(v));
    return WeightedRootedTree(std::move(vw), t.edges(), t.root());
}

/// Raises each edge weight to at least the weight of its child endpoint:
/// w(uv) := max(w(uv), w(v)) with u the parent. Sliding into v already takes
/// w(v) searchers whenever v must be held, so the search number is unchanged.
inline WeightedRootedTree lift_edge_weights(const WeightedRootedTree& t) {
    std::vector<EdgeRec> es = t.edges();
    for (EdgeRec& e : es) e.w = std::max(e.w, t.weight(e.b));
    std::vector<Weight> vw;
    vw.reserve(static_cast<size_t>(t.vertex_count()));
    for (VertexId v = 0; v < t.vertex_count(); ++v) vw.push_back(t.weight(v));
    return WeightedRootedTree(std::move(vw), std::move(es), t.root());
}

/// Replaces every edge uv by a path u—x—v where the fresh vertex x carries the
/// old edge weight and both new edges have weight 1. Expects lifted input
/// (w(uv) >= w(v)); output has 2|E| unit edges and the same search number.
/// Input vertices keep their ids; x for edge e gets id n+e.
inline TransformedTree subdivide_to_unit_edges(const WeightedRootedTree& t) {
    const int n = t.vertex_count();
    std::vector<Weight> vw;
    vw.reserve(static_cast<size_t>(n + t.edge_count()));
    for (VertexId v = 0; v < n; ++v) vw.push_back(t.weight(v));
    std::vector<VertexOrigin> origins = detail::identity_origins(n);
    std::vector<EdgeRec> es;
    es.reserve(2 * static_cast<size_t>(t.edge_count()));
    for (EdgeId e = 0; e < t.edge_count(); ++e) {
        const EdgeRec& r = t.edge(e);
        const VertexId x = n + e;
        vw.push_back(r.w);
        origins.push_back({VertexOrigin::Kind::EdgeSplit, kNoVertex, e, 0});
        es.push_back(EdgeRec{r.a, x, 1});
        es.push_back(EdgeRec{x, r.b, 1});
    }
    return TransformedTree{WeightedRootedTree(std::move(vw), std::move(es), t.root()),
                           std::move(origins)};
}

/// Full normalization pipeline to the node-weighted unit-edge form the solver
/// and verifier work on. Trees that already have unit edges only get their
/// degree-<=1 weights normalized (lifting and subdividing them would change
/// nothing the cost model can see); everything else goes through
/// normalize -> lift -> subdivide. Applying this to its own output is the
/// identity.
inline TransformedTree canonicalize(const WeightedRootedTree& t) {
    if (t.unit_edges())
        return TransformedTree{normalize_leaf_weights(t),
                               detail::identity_origins(t.vertex_count())};
    return subdivide_to_unit_edges(lift_edge_weights(normalize_leaf_weights(t)));
}

/// All vertex and edge weights doubled. Every move cost doubles with them, so
/// the search number of the result is exactly twice the original's.
inline WeightedRootedTree double_weights(const WeightedRootedTree& t) {
    std::vector<Weight> vw;
    vw.reserve(static_cast<size_t>(t.vertex_count()));
    for (VertexId v = 0; v < t.vertex_count(); ++v) vw.push_back(checked_mul(t.weight(v), 2));
    std::vector<EdgeRec> es = t.edges();
    for (EdgeRec& e : es) e.w = checked_mul(e.w, 2);
    return WeightedRootedTree(std::move(vw), std::move(es), t.root());
}

/// Start-vertex-free hardness gadget: three copies of the doubled input hang
/// under a fresh apex of weight 1 (unit apex edges). Searching the result from
/// anywhere takes exactly 2k+1 searchers iff searching the input from its root
/// takes at most k. Copy c of input vertex v gets id c*n+v (c = 0,1,2), the
/// apex gets id 3n, and the root field points at the apex (the instance is
/// meant to be searched from an arbitrary start). The input is leaf-normalized
/// first, which leaves its rooted search number untouched.
inline TransformedTree unrooted_hardness_gadget(const WeightedRootedTree& t) {
    const WeightedRootedTree base = double_weights(normalize_leaf_weights(t));
    const int n = base.vertex_count();
    const VertexId apex = 3 * n;
    std::vector<Weight> vw(static_cast<size_t>(3 * n + 1));
    std::vector<VertexOrigin> origins(static_cast<size_t>(3 * n + 1));
    std::vector<EdgeRec> es;
    es.reserve(3 * static_cast<size_t>(base.edge_count()) + 3);
    for (int c = 0; c < 3; ++c) {
        for (VertexId v = 0; v < n; ++v) {
            vw[static_cast<size_t>(c * n + v)] = base.weight(v);
            origins[static_cast<size_t>(c * n + v)] = {VertexOrigin::Kind::Copy, v, kNoEdge,
                                                       c + 1};
        }
        for (const EdgeRec& r : base.edges())
            es.push_back(EdgeRec{c * n + r.a, c * n + r.b, r.w});
    }
    vw[static_cast<size_t>(apex)] = 1;
    origins[static_cast<size_t>(apex)] = {VertexOrigin::Kind::Apex, kNoVertex, kNoEdge, 0};
    for (int c = 0; c < 3; ++c) es.push_back(EdgeRec{apex, c * n + base.root(), 1});
    return TransformedTree{WeightedRootedTree(std::move(vw), std::move(es), apex),
                           std::move(origins)};
}

}  // namespace csearch
