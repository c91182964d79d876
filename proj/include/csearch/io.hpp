#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "scheduling.hpp"
#include "semantics.hpp"
#include "tree.hpp"

namespace csearch::io {

// ordered_json keeps insertion order, so a given value always serializes to
// the same bytes.
using json = nlohmann::ordered_json;

inline std::string render(const json& j) { return j.dump(2) + "\n"; }

inline json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

inline json load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

inline void save_file(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << render(j);
}

inline const json& field(const json& j, const std::string& key) {
    if (!j.is_object()) throw ParseError("expected an object with field \"" + key + "\"");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError("missing field \"" + key + "\"");
    return *it;
}

inline std::int64_t int_field(const json& j, const std::string& key) {
    const json& f = field(j, key);
    if (!f.is_number_integer() && !f.is_number_unsigned())
        throw ParseError("field \"" + key + "\" must be an integer");
    return f.get<std::int64_t>();
}

inline Weight weight_field(const json& j, const std::string& key) {
    const json& f = field(j, key);
    if (f.is_number_unsigned()) {
        const Weight w = f.get<Weight>();
        if (w == 0) throw ParseError("field \"" + key + "\" must be a positive weight");
        return w;
    }
    if (f.is_number_integer() && f.get<std::int64_t>() > 0)
        return static_cast<Weight>(f.get<std::int64_t>());
    throw ParseError("field \"" + key + "\" must be a positive weight");
}

inline void expect_envelope(const json& j, const std::string& kind) {
    if (!j.is_object()) throw ParseError("top level must be a JSON object");
    if (int_field(j, "version") != 1)
        throw ParseError("unsupported version (this build reads version 1)");
    const json& k = field(j, "kind");
    if (!k.is_string() || k.get<std::string>() != kind)
        throw ParseError("expected kind \"" + kind + "\"");
}

inline json meta_of(const json& j) {
    return j.is_object() && j.contains("meta") ? j.at("meta") : json::object();
}

// ---- trees ----

inline json tree_to_json(const WeightedRootedTree& t, json meta = json::object()) {
    json j;
    j["version"] = 1;
    j["kind"] = "tree";
    json vs = json::array();
    for (VertexId v = 0; v < t.vertex_count(); ++v)
        vs.push_back({{"id", v}, {"w", t.weight(v)}});
    j["vertices"] = std::move(vs);
    json es = json::array();
    for (const EdgeRec& e : t.edges()) es.push_back({{"u", e.a}, {"v", e.b}, {"w", e.w}});
    j["edges"] = std::move(es);
    j["root"] = t.root();
    if (!meta.empty()) j["meta"] = std::move(meta);
    return j;
}

inline WeightedRootedTree tree_from_json(const json& j) {
    expect_envelope(j, "tree");
    const json& vs = field(j, "vertices");
    if (!vs.is_array() || vs.empty()) throw ParseError("\"vertices\" must be a nonempty array");
    const auto n = static_cast<std::int64_t>(vs.size());
    std::vector<Weight> w(vs.size(), 0);
    std::vector<char> seen(vs.size(), 0);
    for (const json& v : vs) {
        const std::int64_t id = int_field(v, "id");
        if (id < 0 || id >= n) throw ParseError("vertex ids must be exactly 0..n-1");
        if (seen[static_cast<size_t>(id)])
            throw ParseError("duplicate vertex id " + std::to_string(id));
        seen[static_cast<size_t>(id)] = 1;
        w[static_cast<size_t>(id)] = weight_field(v, "w");
    }
    const json& es = field(j, "edges");
    if (!es.is_array()) throw ParseError("\"edges\" must be an array");
    auto vertex_ref = [n](const json& o, const char* key) {
        const std::int64_t x = int_field(o, key);
        if (x < 0 || x >= n)
            throw ParseError("edge endpoint " + std::to_string(x) + " is not a vertex id");
        return static_cast<VertexId>(x);
    };
    std::vector<EdgeRec> edges;
    for (const json& e : es)
        edges.push_back(EdgeRec{vertex_ref(e, "u"), vertex_ref(e, "v"), weight_field(e, "w")});
    const std::int64_t root = int_field(j, "root");
    if (root < 0 || root >= n) throw ParseError("root is not a vertex id");
    try {
        return WeightedRootedTree(std::move(w), std::move(edges), static_cast<VertexId>(root));
    } catch (const Error& e) {
        throw ParseError(std::string("invalid tree: ") + e.what());
    }
}

// ---- strategies ----

inline json strategy_to_json(const WeightedRootedTree& t, const SearchStrategy& s,
                             json meta = json::object()) {
    json j;
    j["version"] = 1;
    j["kind"] = "strategy";
    j["start"] = s.start;
    json mv = json::array();
    for (EdgeId e : s.moves) {
        const EdgeRec& r = t.edge(e);
        mv.push_back(std::to_string(r.a) + "-" + std::to_string(r.b));
    }
    j["moves"] = std::move(mv);
    if (!meta.empty()) j["meta"] = std::move(meta);
    return j;
}

/// Moves are "u-v" strings; either endpoint order is accepted.
inline SearchStrategy strategy_from_json(const WeightedRootedTree& t, const json& j) {
    expect_envelope(j, "strategy");
    const std::int64_t start = int_field(j, "start");
    if (start < 0 || start >= t.vertex_count()) throw ParseError("start vertex out of range");
    SearchStrategy s{static_cast<VertexId>(start), {}};
    const json& mv = field(j, "moves");
    if (!mv.is_array()) throw ParseError("\"moves\" must be an array");
    auto parse_id = [&](std::string_view part, const std::string& whole) {
        int x = 0;
        auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), x);
        if (ec != std::errc() || p != part.data() + part.size() || x < 0 ||
            x >= t.vertex_count())
            throw ParseError("malformed move \"" + whole + "\"");
        return static_cast<VertexId>(x);
    };
    for (const json& m : mv) {
        if (!m.is_string()) throw ParseError("moves must be \"u-v\" strings");
        const std::string str = m.get<std::string>();
        const auto dash = str.find('-');
        if (dash == std::string::npos) throw ParseError("malformed move \"" + str + "\"");
        const VertexId u = parse_id(std::string_view(str).substr(0, dash), str);
        const VertexId v = parse_id(std::string_view(str).substr(dash + 1), str);
        try {
            s.moves.push_back(t.edge_between(u, v));
        } catch (const Error&) {
            throw ParseError("move \"" + str + "\" is not an edge of the tree");
        }
    }
    return s;
}

// ---- task systems ----

/// Profiles longer than this are stored run-length encoded.
inline constexpr Time kProfileRleThreshold = 16;

inline json tds_to_json(const TdsInstance& inst, json meta = json::object()) {
    json j;
    j["version"] = 1;
    j["kind"] = "tds";
    json ts = json::array();
    for (const Task& t : inst.tasks) {
        json tj;
        tj["id"] = t.id;
        tj["d"] = t.deadline;
        if (t.deadline > kProfileRleThreshold) {
            json rle = json::array();
            size_t i = 0;
            while (i < t.exec.size()) {
                size_t k = i;
                while (k < t.exec.size() && t.exec[k] == t.exec[i]) ++k;
                rle.push_back(json::array({k - i, t.exec[i]}));
                i = k;
            }
            tj["p_rle"] = std::move(rle);
        } else {
            tj["p"] = t.exec;
        }
        ts.push_back(std::move(tj));
    }
    j["tasks"] = std::move(ts);
    if (!meta.empty()) j["meta"] = std::move(meta);
    return j;
}

inline TdsInstance tds_from_json(const json& j) {
    expect_envelope(j, "tds");
    const json& ts = field(j, "tasks");
    if (!ts.is_array()) throw ParseError("\"tasks\" must be an array");
    TdsInstance inst;
    for (const json& tj : ts) {
        Task t;
        t.id = static_cast<int>(int_field(tj, "id"));
        t.deadline = int_field(tj, "d");
        const bool plain = tj.is_object() && tj.contains("p");
        const bool rle = tj.is_object() && tj.contains("p_rle");
        if (plain == rle)
            throw ParseError("task " + std::to_string(t.id) +
                             " needs exactly one of \"p\" and \"p_rle\"");
        if (plain) {
            const json& p = tj.at("p");
            if (!p.is_array()) throw ParseError("\"p\" must be an array");
            for (const json& x : p) {
                if (!x.is_number_integer() && !x.is_number_unsigned())
                    throw ParseError("durations must be integers");
                t.exec.push_back(x.get<Time>());
            }
        } else {
            const json& p = tj.at("p_rle");
            if (!p.is_array()) throw ParseError("\"p_rle\" must be an array");
            for (const json& run : p) {
                if (!run.is_array() || run.size() != 2 || !run[0].is_number_integer() ||
                    !run[1].is_number_integer())
                    throw ParseError("\"p_rle\" entries must be [length, duration] pairs");
                const std::int64_t len = run[0].get<std::int64_t>();
                const Time val = run[1].get<Time>();
                if (len < 1) throw ParseError("\"p_rle\" run lengths must be positive");
                t.exec.insert(t.exec.end(), static_cast<size_t>(len), val);
            }
        }
        inst.tasks.push_back(std::move(t));
    }
    try {
        validate_tds(inst);
    } catch (const Error& e) {
        throw ParseError(std::string("invalid task system: ") + e.what());
    }
    return inst;
}

inline json gadget_meta(const ThreePartitionInstance& tp) {
    json m;
    m["generator"] = "three-partition";
    m["B"] = tp.B;
    m["m"] = tp.m();
    m["A"] = tp.A;
    return m;
}

/// Recovers the 3-partition instance recorded in a generated task system's
/// meta block, if present.
inline std::optional<ThreePartitionInstance> gadget_from_meta(const json& j) {
    const json m = meta_of(j);
    if (!m.is_object() || !m.contains("generator") || m.at("generator") != "three-partition")
        return std::nullopt;
    ThreePartitionInstance tp;
    tp.B = int_field(m, "B");
    const json& a = field(m, "A");
    if (!a.is_array()) throw ParseError("meta field \"A\" must be an array");
    for (const json& x : a) {
        if (!x.is_number_integer() && !x.is_number_unsigned())
            throw ParseError("meta field \"A\" must hold integers");
        tp.A.push_back(x.get<Time>());
    }
    try {
        validate_three_partition(tp);
    } catch (const Error& e) {
        throw ParseError(std::string("invalid gadget meta: ") + e.what());
    }
    return tp;
}

// ---- 3-partition instances ----

inline json three_partition_to_json(const ThreePartitionInstance& tp,
                                    json meta = json::object()) {
    json j;
    j["version"] = 1;
    j["kind"] = "three-partition";
    j["B"] = tp.B;
    j["A"] = tp.A;
    if (!meta.empty()) j["meta"] = std::move(meta);
    return j;
}

inline ThreePartitionInstance three_partition_from_json(const json& j) {
    expect_envelope(j, "three-partition");
    ThreePartitionInstance tp;
    tp.B = int_field(j, "B");
    const json& a = field(j, "A");
    if (!a.is_array()) throw ParseError("\"A\" must be an array");
    for (const json& x : a) {
        if (!x.is_number_integer() && !x.is_number_unsigned())
            throw ParseError("\"A\" must hold integers");
        tp.A.push_back(x.get<Time>());
    }
    try {
        validate_three_partition(tp);
    } catch (const Error& e) {
        throw ParseError(std::string("invalid 3-partition instance: ") + e.what());
    }
    return tp;
}

// ---- schedules ----

inline json schedule_to_json(const Schedule& d, json meta = json::object()) {
    json j;
    j["version"] = 1;
    j["kind"] = "schedule";
    j["order"] = d.order;
    j["start"] = d.start;
    j["completion"] = d.completion;
    j["feasible"] = d.feasible;
    if (!meta.empty()) j["meta"] = std::move(meta);
    return j;
}

/// Only the order is authoritative; times are re-derived by simulation.
inline std::vector<int> schedule_order_from_json(const json& j) {
    expect_envelope(j, "schedule");
    const json& o = field(j, "order");
    if (!o.is_array()) throw ParseError("\"order\" must be an array");
    std::vector<int> order;
    for (const json& x : o) {
        if (!x.is_number_integer() && !x.is_number_unsigned())
            throw ParseError("\"order\" must hold task ids");
        order.push_back(x.get<int>());
    }
    return order;
}

}  // namespace csearch::io
