#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "semantics.hpp"
#include "tree.hpp"

namespace csearch {

using Time = std::int64_t;

/// A task whose duration depends on its integer start time. `exec[t]` is the
/// duration when started at time t; the profile covers [0, deadline) and must
/// be positive and nondecreasing.
struct Task {
    int id = 0;
    Time deadline = 0;
    std::vector<Time> exec;

    Time duration_at(Time t) const {
        if (t < 0 || t >= deadline)
            throw Error("task " + std::to_string(id) + " cannot start at time " +
                        std::to_string(t));
        return exec[static_cast<size_t>(t)];
    }

    /// Latest integer start that still meets the deadline; -1 when none does.
    Time latest_feasible_start() const {
        for (Time t = deadline - 1; t >= 0; --t)
            if (t + exec[static_cast<size_t>(t)] <= deadline) return t;
        return -1;
    }
};

inline void validate_task(const Task& t) {
    const std::string who = "task " + std::to_string(t.id);
    if (t.deadline < 1) throw Error(who + ": deadline must be at least 1");
    if (static_cast<Time>(t.exec.size()) != t.deadline)
        throw Error(who + ": execution profile must have one entry per start time in [0, " +
                    std::to_string(t.deadline) + ")");
    for (size_t i = 0; i < t.exec.size(); ++i) {
        if (t.exec[i] < 1) throw Error(who + ": durations must be positive");
        if (i > 0 && t.exec[i] < t.exec[i - 1])
            throw Error(who + ": durations must be nondecreasing in the start time");
    }
}

struct TdsInstance {
    std::vector<Task> tasks;

    /// L: the latest deadline (1 for the empty instance, so downstream
    /// constructions stay well-defined).
    Time horizon() const {
        Time L = 1;
        for (const Task& t : tasks) L = std::max(L, t.deadline);
        return L;
    }

    const Task& task(int id) const {
        for (const Task& t : tasks)
            if (t.id == id) return t;
        throw Error("no task with id " + std::to_string(id));
    }
};

inline void validate_tds(const TdsInstance& inst) {
    std::vector<int> ids;
    for (const Task& t : inst.tasks) {
        validate_task(t);
        ids.push_back(t.id);
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        throw Error("task ids must be distinct");
}

struct Schedule {
    std::vector<int> order;        // task ids in execution order
    std::vector<Time> start;       // parallel to order (may be shorter on a hard stop)
    std::vector<Time> completion;  // parallel to start
    Time makespan = 0;
    bool feasible = false;
    std::string diagnostic;

    std::optional<Time> start_of(int id) const {
        for (size_t i = 0; i < start.size(); ++i)
            if (order[i] == id) return start[i];
        return std::nullopt;
    }
    std::optional<Time> completion_of(int id) const {
        for (size_t i = 0; i < completion.size(); ++i)
            if (order[i] == id) return completion[i];
        return std::nullopt;
    }
};

/// Runs the tasks back to back in the given order (idle time never helps when
/// durations are nondecreasing in time). Feasible iff every task completes by
/// its deadline; a task whose turn comes at or after its deadline has no
/// defined duration, which stops the simulation with a diagnostic.
inline Schedule simulate(const TdsInstance& inst, const std::vector<int>& order) {
    std::vector<int> sorted_ids;
    for (const Task& t : inst.tasks) sorted_ids.push_back(t.id);
    std::sort(sorted_ids.begin(), sorted_ids.end());
    std::vector<int> sorted_order = order;
    std::sort(sorted_order.begin(), sorted_order.end());
    if (sorted_order != sorted_ids) throw Error("order must be a permutation of the task ids");

    Schedule d;
    d.order = order;
    d.feasible = true;
    Time now = 0;
    for (int id : order) {
        const Task& t = inst.task(id);
        if (now >= t.deadline) {
            d.feasible = false;
            d.diagnostic = "task " + std::to_string(id) + " cannot begin at time " +
                           std::to_string(now) + " (deadline " + std::to_string(t.deadline) +
                           ")";
            break;
        }
        d.start.push_back(now);
        now += t.exec[static_cast<size_t>(now)];
        d.completion.push_back(now);
        d.makespan = now;
        if (now > t.deadline) {
            d.feasible = false;
            if (d.diagnostic.empty())
                d.diagnostic = "task " + std::to_string(id) + " completes at " +
                               std::to_string(now) + " after its deadline " +
                               std::to_string(t.deadline);
        }
    }
    return d;
}

struct ThreePartitionInstance {
    Time B = 0;
    std::vector<Time> A;

    int m() const { return static_cast<int>(A.size()) / 3; }
};

inline void validate_three_partition(const ThreePartitionInstance& tp) {
    if (tp.A.empty() || tp.A.size() % 3 != 0)
        throw Error("a 3-partition instance needs 3m values");
    Time sum = 0;
    for (Time a : tp.A) {
        if (4 * a <= tp.B || 2 * a >= tp.B)
            throw Error("every value must lie strictly between B/4 and B/2");
        sum += a;
    }
    if (sum != static_cast<Time>(tp.m()) * tp.B)
        throw Error("values must sum to m*B");
}

/// Interval I_i = [l_i, r_i) of the scheduling gadget, 1-based i.
inline Time gadget_interval_low(const ThreePartitionInstance& tp, int i) {
    const Time B3 = tp.B * tp.B * tp.B;
    return (i - 1) * B3 + static_cast<Time>(i - 1) * i * tp.B / 2;
}
inline Time gadget_interval_high(const ThreePartitionInstance& tp, int i) {
    const Time B3 = tp.B * tp.B * tp.B;
    return i * B3 + static_cast<Time>(i) * (i + 1) * tp.B / 2;
}

/// The hardness gadget: 3m value tasks (id j+1 for value a_j; deadline L;
/// duration i*a_j anywhere in interval I_i) plus m blocker tasks (id 3m+i;
/// deadline l_i + B^3; constant duration B^3) that pin the free time down to
/// windows of total length iB inside each I_i.
inline TdsInstance three_partition_to_tds(const ThreePartitionInstance& tp) {
    validate_three_partition(tp);
    const int m = tp.m();
    const Time B3 = tp.B * tp.B * tp.B;
    const Time L = gadget_interval_high(tp, m);
    TdsInstance inst;
    for (int j = 0; j < 3 * m; ++j) {
        Task t;
        t.id = j + 1;
        t.deadline = L;
        t.exec.reserve(static_cast<size_t>(L));
        for (int i = 1; i <= m; ++i)
            t.exec.insert(t.exec.end(),
                          static_cast<size_t>(gadget_interval_high(tp, i) -
                                              gadget_interval_low(tp, i)),
                          static_cast<Time>(i) * tp.A[static_cast<size_t>(j)]);
        inst.tasks.push_back(std::move(t));
    }
    for (int i = 1; i <= m; ++i) {
        Task t;
        t.id = 3 * m + i;
        t.deadline = gadget_interval_low(tp, i) + B3;
        t.exec.assign(static_cast<size_t>(t.deadline), B3);
        inst.tasks.push_back(std::move(t));
    }
    return inst;
}

/// Exhaustive 3-partition decision (unordered triples), for cross-checking the
/// scheduling reduction at desk scale.
inline bool three_partition_exists(const ThreePartitionInstance& tp) {
    validate_three_partition(tp);
    const int n = static_cast<int>(tp.A.size());
    std::vector<char> used(static_cast<size_t>(n), 0);
    std::function<bool(int)> go = [&](int left) {
        if (left == 0) return true;
        int first = 0;
        while (used[static_cast<size_t>(first)]) ++first;
        used[static_cast<size_t>(first)] = 1;
        for (int x = first + 1; x < n; ++x) {
            if (used[static_cast<size_t>(x)]) continue;
            used[static_cast<size_t>(x)] = 1;
            for (int y = x + 1; y < n; ++y) {
                if (used[static_cast<size_t>(y)]) continue;
                if (tp.A[static_cast<size_t>(first)] + tp.A[static_cast<size_t>(x)] +
                        tp.A[static_cast<size_t>(y)] !=
                    tp.B)
                    continue;
                used[static_cast<size_t>(y)] = 1;
                if (go(left - 1)) return true;
                used[static_cast<size_t>(y)] = 0;
            }
            used[static_cast<size_t>(x)] = 0;
        }
        used[static_cast<size_t>(first)] = 0;
        return false;
    };
    return go(tp.m());
}

/// The free windows a feasible gadget schedule leaves between blockers, with
/// their required containment (window i inside I_i) and length (exactly iB).
struct BlockerWindow {
    int i = 0;
    Time from = 0, to = 0;                    // [from, to): after blocker i, before blocker i+1
    Time interval_low = 0, interval_high = 0;  // I_i
    bool contained = false;
    Time expected_length = 0;
};

struct StructuralReport {
    bool ok = true;
    bool blockers_ordered = false;
    std::vector<BlockerWindow> windows;
    std::string violation;
};

/// Checks, on a feasible schedule of a generated gadget instance: blockers run
/// in index order, each window sits inside its interval, and each window has
/// length exactly iB.
inline StructuralReport check_structural_lemmas(const ThreePartitionInstance& tp,
                                                const TdsInstance& inst, const Schedule& d) {
    if (!d.feasible) throw Error("structural checks only apply to feasible schedules");
    const int m = tp.m();
    if (static_cast<int>(inst.tasks.size()) != 4 * m)
        throw Error("instance does not have the 3m value + m blocker tasks of the gadget");
    const Time L = gadget_interval_high(tp, m);
    StructuralReport rep;
    std::vector<int> blocker_pos;
    for (int i = 1; i <= m; ++i) {
        const int id = 3 * m + i;
        auto it = std::find(d.order.begin(), d.order.end(), id);
        if (it == d.order.end()) throw Error("schedule lacks blocker task " + std::to_string(id));
        blocker_pos.push_back(static_cast<int>(it - d.order.begin()));
    }
    rep.blockers_ordered = std::is_sorted(blocker_pos.begin(), blocker_pos.end());
    if (!rep.blockers_ordered) {
        rep.ok = false;
        rep.violation = "blocker tasks run out of index order";
    }
    for (int i = 1; i <= m; ++i) {
        BlockerWindow w;
        w.i = i;
        w.from = *d.completion_of(3 * m + i);
        w.to = i < m ? *d.start_of(3 * m + i + 1) : L;
        w.interval_low = gadget_interval_low(tp, i);
        w.interval_high = gadget_interval_high(tp, i);
        w.contained = w.from >= w.interval_low && w.to <= w.interval_high;
        w.expected_length = static_cast<Time>(i) * tp.B;
        if (!w.contained || w.to - w.from != w.expected_length) {
            rep.ok = false;
            if (rep.violation.empty())
                rep.violation = "window " + std::to_string(i) + " = [" + std::to_string(w.from) +
                                ", " + std::to_string(w.to) + ") violates its interval bounds";
        }
        rep.windows.push_back(w);
    }
    return rep;
}

/// Reads the 3-partition solution back out of a feasible gadget schedule: the
/// values of the tasks run inside window i form group i.
inline std::vector<std::vector<Time>> extract_three_partition(const ThreePartitionInstance& tp,
                                                              const TdsInstance& inst,
                                                              const Schedule& d) {
    StructuralReport rep = check_structural_lemmas(tp, inst, d);
    if (!rep.ok) throw Error("schedule violates the gadget structure: " + rep.violation);
    const int m = tp.m();
    std::vector<std::vector<Time>> groups(static_cast<size_t>(m));
    for (int j = 1; j <= 3 * m; ++j) {
        const Time s = *d.start_of(j);
        bool placed = false;
        for (const BlockerWindow& w : rep.windows)
            if (s >= w.from && s < w.to) {
                groups[static_cast<size_t>(w.i - 1)].push_back(tp.A[static_cast<size_t>(j - 1)]);
                placed = true;
                break;
            }
        if (!placed) throw Error("value task starts outside every blocker window");
    }
    for (const auto& g : groups) {
        Time sum = 0;
        for (Time a : g) sum += a;
        if (g.size() != 3 || sum != tp.B)
            throw Error("extracted groups do not form a 3-partition");
    }
    return groups;
}

inline constexpr int kBruteMaxTasks = 9;

struct BruteSweep {
    std::size_t orders_tried = 0;
    std::size_t feasible_count = 0;
    std::optional<Schedule> first_feasible;  // lexicographically first feasible order
    std::size_t structural_violations = 0;   // only counted when a gadget is given
};

/// Tries every execution order. When `gadget` is non-null every feasible
/// schedule is additionally checked against the blocker-window structure.
/// Deterministic for any job count: results depend only on the instance.
inline BruteSweep brute_force_schedules(const TdsInstance& inst, int jobs = 1,
                                        const ThreePartitionInstance* gadget = nullptr) {
    validate_tds(inst);
    if (static_cast<int>(inst.tasks.size()) > kBruteMaxTasks)
        throw CapError("brute-force sweep capped at " + std::to_string(kBruteMaxTasks) +
                       " tasks");
    std::vector<int> ids;
    for (const Task& t : inst.tasks) ids.push_back(t.id);
    std::sort(ids.begin(), ids.end());

    const int blocks = std::max<int>(1, static_cast<int>(ids.size()));
    auto sweep_block = [&](int first_index, BruteSweep& out) {
        std::vector<int> rest = ids;
        std::vector<int> order;
        if (!ids.empty()) {
            order.push_back(ids[static_cast<size_t>(first_index)]);
            rest.erase(rest.begin() + first_index);
        }
        std::sort(rest.begin(), rest.end());
        do {
            std::vector<int> full = order;
            full.insert(full.end(), rest.begin(), rest.end());
            ++out.orders_tried;
            Schedule d = simulate(inst, full);
            if (!d.feasible) continue;
            ++out.feasible_count;
            if (!out.first_feasible) out.first_feasible = d;
            if (gadget && !check_structural_lemmas(*gadget, inst, d).ok)
                ++out.structural_violations;
        } while (std::next_permutation(rest.begin(), rest.end()));
    };

    std::vector<BruteSweep> parts(static_cast<size_t>(blocks));
    if (ids.empty()) {
        BruteSweep out;
        out.orders_tried = 1;
        out.feasible_count = 1;
        out.first_feasible = simulate(inst, {});
        return out;
    }
    if (jobs <= 1) {
        for (int i = 0; i < blocks; ++i) sweep_block(i, parts[static_cast<size_t>(i)]);
    } else {
        const int stride = std::min<int>(jobs, blocks);
        std::vector<std::thread> pool;
        for (int w = 0; w < stride; ++w)
            pool.emplace_back([&, w] {
                for (int i = w; i < blocks; i += stride)
                    sweep_block(i, parts[static_cast<size_t>(i)]);
            });
        for (auto& th : pool) th.join();
    }
    BruteSweep total;
    for (const BruteSweep& p : parts) {
        total.orders_tried += p.orders_tried;
        total.feasible_count += p.feasible_count;
        total.structural_violations += p.structural_violations;
        if (!total.first_feasible && p.first_feasible) total.first_feasible = p.first_feasible;
    }
    return total;
}

/// The weighted tree a TDS instance maps to, with enough construction detail
/// retained to build and read back search strategies.
struct ReductionTree {
    WeightedRootedTree tree;
    Weight budget = 0;  // 4L
    Time horizon = 0;   // L

    struct TaskPath {
        int task_id = 0;
        Time f = 0;                    // latest feasible start
        EdgeId root_edge = kNoEdge;    // r — u^f
        std::vector<VertexId> u, v;    // u[i], v[i] for i = 0..f
        VertexId y = kNoVertex, z = kNoVertex;
        std::vector<EdgeId> chain;     // u^f—v^f, v^f—u^{f-1}, ..., u^0—v^0, v^0—y, y—z
    };
    std::vector<TaskPath> paths;  // in instance order
    VertexId y0 = kNoVertex, z0 = kNoVertex;
    EdgeId root_y_edge = kNoEdge, y0_z0_edge = kNoEdge;

    struct Role {
        char kind = '?';  // r, y, z, u, v
        int task = -1;    // -1 for r/y_0/z_0
        Time index = -1;  // i of u^i / v^i
    };
    std::vector<Role> roles;  // by vertex id

    const TaskPath& path_of(int task_id) const {
        for (const TaskPath& p : paths)
            if (p.task_id == task_id) return p;
        throw Error("no path gadget for task " + std::to_string(task_id));
    }
};

/// Builds the search-game encoding of a TDS instance: a root of weight 2L, a
/// chain u^i/v^i per task whose u-weights 2L-i block everything else while the
/// task's gadget is open and whose v-weights carry the duration profile, and a
/// heavy y/z arm per task (plus one at the root) that can only be afforded
/// once 2L searchers are free. Budget 4L.
inline ReductionTree tds_to_tree(const TdsInstance& inst) {
    validate_tds(inst);
    const Time L = inst.horizon();
    const Weight wL = static_cast<Weight>(L);
    std::vector<Weight> vw;
    std::vector<EdgeRec> es;
    std::vector<ReductionTree::Role> roles;
    auto add_vertex = [&](Weight w, char kind, int task, Time index) {
        vw.push_back(w);
        roles.push_back({kind, task, index});
        return static_cast<VertexId>(vw.size() - 1);
    };
    auto add_edge = [&](VertexId a, VertexId b) {
        es.push_back(EdgeRec{a, b, 1});
        return static_cast<EdgeId>(es.size() - 1);
    };

    ReductionTree rt;
    rt.horizon = L;
    rt.budget = checked_mul(4, wL);
    const VertexId r = add_vertex(checked_mul(2, wL), 'r', -1, -1);
    rt.y0 = add_vertex(checked_mul(3, wL), 'y', -1, -1);
    rt.z0 = add_vertex(1, 'z', -1, -1);
    rt.root_y_edge = add_edge(r, rt.y0);
    rt.y0_z0_edge = add_edge(rt.y0, rt.z0);

    for (const Task& t : inst.tasks) {
        const Time f = t.latest_feasible_start();
        if (f < 0)
            throw Error("task " + std::to_string(t.id) + " can never meet its deadline");
        ReductionTree::TaskPath p;
        p.task_id = t.id;
        p.f = f;
        p.u.assign(static_cast<size_t>(f) + 1, kNoVertex);
        p.v.assign(static_cast<size_t>(f) + 1, kNoVertex);
        for (Time i = f; i >= 0; --i) {
            if (static_cast<Weight>(2 * L - i) <= wL || static_cast<Time>(t.exec[static_cast<size_t>(i)]) > L)
                throw Error("internal: blocking weights out of range");
            p.u[static_cast<size_t>(i)] =
                add_vertex(static_cast<Weight>(2 * L - i), 'u', t.id, i);
            p.v[static_cast<size_t>(i)] =
                add_vertex(static_cast<Weight>(t.exec[static_cast<size_t>(i)]), 'v', t.id, i);
        }
        for (Time i = 1; i <= f; ++i)
            if (t.exec[static_cast<size_t>(i)] < t.exec[static_cast<size_t>(i - 1)])
                throw Error("internal: duration profile not nondecreasing");
        p.y = add_vertex(checked_mul(3, wL), 'y', t.id, -1);
        p.z = add_vertex(1, 'z', t.id, -1);
        p.root_edge = add_edge(r, p.u[static_cast<size_t>(f)]);
        p.chain.push_back(add_edge(p.u[static_cast<size_t>(f)], p.v[static_cast<size_t>(f)]));
        for (Time i = f; i >= 1; --i) {
            p.chain.push_back(add_edge(p.v[static_cast<size_t>(i)], p.u[static_cast<size_t>(i - 1)]));
            p.chain.push_back(add_edge(p.u[static_cast<size_t>(i - 1)], p.v[static_cast<size_t>(i - 1)]));
        }
        p.chain.push_back(add_edge(p.v[0], p.y));
        p.chain.push_back(add_edge(p.y, p.z));
        rt.paths.push_back(std::move(p));
    }
    rt.tree = WeightedRootedTree(std::move(vw), std::move(es), r);
    rt.roles = std::move(roles);
    return rt;
}

/// Builds the 4L-searcher strategy a feasible schedule induces: per task in
/// schedule order, clear the root edge and walk the chain down to v^{s_j}
/// (leaving its duration-weight guard hanging); then spend the freed root on
/// the y_0 arm; then collect the hanging tails in the same order. Verifies its
/// own output and the guard-weight accounting before returning.
inline SearchStrategy schedule_to_strategy(const TdsInstance& inst, const Schedule& given,
                                           const ReductionTree& rt) {
    const Schedule d = simulate(inst, given.order);
    if (!d.feasible)
        throw Error("only feasible schedules translate to strategies: " + d.diagnostic);
    const Time L = rt.horizon;
    if (d.makespan > L) throw Error("internal: feasible schedule with makespan above L");

    SearchStrategy s{rt.tree.root(), {}};
    SearchState st(rt.tree, s.start, CostModel::Composed);
    auto put = [&](EdgeId e) {
        if (st.cost_of(e).total() > rt.budget)
            throw Error("internal: translated move exceeds budget 4L");
        st.apply(e);
        s.moves.push_back(e);
    };

    for (size_t pos = 0; pos < d.order.size(); ++pos) {
        const ReductionTree::TaskPath& p = rt.path_of(d.order[pos]);
        const Time sj = d.start[pos];
        if (sj > p.f) throw Error("internal: start time after the latest feasible start");
        put(p.root_edge);
        const size_t down_to = 2 * static_cast<size_t>(p.f - sj);
        for (size_t c = 0; c <= down_to; ++c) put(p.chain[c]);
        const Weight expected_guard =
            checked_add(checked_mul(2, static_cast<Weight>(L)),
                        static_cast<Weight>(d.completion[pos]));
        if (st.guard_weight() != expected_guard)
            throw Error("internal: guard weight disagrees with 2L + completion time");
    }
    put(rt.root_y_edge);
    put(rt.y0_z0_edge);
    for (size_t pos = 0; pos < d.order.size(); ++pos) {
        const ReductionTree::TaskPath& p = rt.path_of(d.order[pos]);
        const Time sj = d.start[pos];
        for (size_t c = 2 * static_cast<size_t>(p.f - sj) + 1; c < p.chain.size(); ++c)
            put(p.chain[c]);
    }

    const Weight expected_peak = rt.paths.empty()
                                     ? checked_mul(3, static_cast<Weight>(L))
                                     : rt.budget;
    if (st.peak_so_far() != expected_peak)
        throw Error("internal: translated strategy peak differs from the expected value");
    VerificationReport rep = verify(rt.tree, s, rt.budget);
    if (!rep.ok) throw Error("internal: translated strategy fails verification: " +
                             rep.failure_reason);
    return s;
}

/// Reads a feasible schedule back out of any strategy that verifies at budget
/// 4L: the order the root edges are cleared in is the task order. The result
/// is certified by rebuilding the canonical strategy for it and re-verifying.
inline Schedule strategy_to_schedule(const TdsInstance& inst, const ReductionTree& rt,
                                     const SearchStrategy& s) {
    VerificationReport rep = verify(rt.tree, s, rt.budget);
    if (!rep.ok)
        throw Error("strategy does not verify at budget 4L: " + rep.failure_reason);

    std::vector<int> order;
    bool seen_root_y = false;
    for (EdgeId e : s.moves) {
        if (e == rt.root_y_edge) {
            seen_root_y = true;
            continue;
        }
        for (const ReductionTree::TaskPath& p : rt.paths)
            if (p.root_edge == e) {
                if (seen_root_y)
                    throw Error("internal: root arm cleared before some task gadget");
                order.push_back(p.task_id);
            }
    }
    Schedule d = simulate(inst, order);
    if (!d.feasible)
        throw Error("internal: extracted schedule infeasible despite a verified strategy");
    for (size_t pos = 0; pos < d.order.size(); ++pos)
        if (d.start[pos] > rt.path_of(d.order[pos]).f)
            throw Error("internal: extracted start time exceeds the latest feasible start");

    SearchStrategy canon = schedule_to_strategy(inst, d, rt);
    for (size_t i = 1, task = 1; i < canon.moves.size() && task < d.order.size(); ++i) {
        const ReductionTree::TaskPath& p = rt.path_of(d.order[task]);
        if (canon.moves[i] != p.root_edge) continue;
        const ReductionTree::TaskPath& prev = rt.path_of(d.order[task - 1]);
        const Time sp = d.start[task - 1];
        if (canon.moves[i - 1] != prev.chain[2 * static_cast<size_t>(prev.f - sp)])
            throw Error("internal: canonical strategy breaks the per-gadget burst shape");
        ++task;
    }
    return d;
}

}  // namespace csearch
