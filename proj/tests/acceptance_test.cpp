// Acceptance gate: one PASS/FAIL line per criterion, exit code = number of
// failures. All comparisons are exact unless a line says otherwise; the only
// tolerances are the runtime bounds in criterion 8, pinned as constants there.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

using namespace csearch;
using testsupport::pick;
using testsupport::random_tree;
using testsupport::run_cli;
using testsupport::staged_tree;
using testsupport::star3;
using testsupport::two_task_instance;
using testsupport::unit_path;

namespace {

namespace fs = std::filesystem;

int failures = 0;

void report(int idx, const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s criterion %d (%s): %s\n", ok ? "PASS" : "FAIL", idx, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

template <typename F>
void guarded(int idx, const std::string& name, F body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(idx, name, false, std::string("unhandled exception: ") + e.what());
    }
}

const fs::path& work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "csearch_acceptance";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string put(const std::string& name, const io::json& j) {
    const fs::path p = work_dir() / name;
    io::save_file(p.string(), j);
    return p.string();
}

std::string at(const std::string& name) { return (work_dir() / name).string(); }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- criteria 1 and 2 share one enumeration sweep ----

struct SweepOutcome {
    std::size_t instances = 0;
    std::size_t solve_mismatches = 0;
    std::size_t guard_mismatches = 0;
    std::string first_solve_bad, first_guard_bad;
};

SweepOutcome sweep_all_small_trees() {
    SweepOutcome out;
    for (int e = 1; e <= 7; ++e) {
        enumerate_small_trees(e, 3, {1, 2, 3}, [&](const WeightedRootedTree& t) {
            ++out.instances;
            const Weight want = oracle_cs(t, t.root(), CostModel::Primitive);
            const Weight got = solve_rooted(t).searchers;
            if (want != got) {
                if (out.solve_mismatches == 0)
                    out.first_solve_bad = canonical_signature(t) + " expected " +
                                          std::to_string(want) + " got " + std::to_string(got);
                ++out.solve_mismatches;
            }
            ConnectedSearchSolver solver(t);
            const StrategyFrontier& f = solver.frontier(t.root(), kNoVertex);
            const GuardProfile p = oracle_guard_profile(t, t.root(), CostModel::Composed);
            const Weight top = t.total_vertex_weight() + 1;
            for (Weight k = 0; k <= top; ++k) {
                if (f.min_guard(k) == p.min_guard(k)) continue;
                if (out.guard_mismatches == 0)
                    out.first_guard_bad =
                        canonical_signature(t) + " at budget " + std::to_string(k);
                ++out.guard_mismatches;
                break;
            }
        });
    }
    return out;
}

void criterion_1_and_2() {
    SweepOutcome s = sweep_all_small_trees();
    report(1, "solver equals exhaustive search on every small tree", s.solve_mismatches == 0,
           s.solve_mismatches == 0
               ? "checked " + std::to_string(s.instances) + " rooted trees, 1..7 edges"
               : std::to_string(s.solve_mismatches) + " mismatches, first: " + s.first_solve_bad);
    report(2, "frontier guard minima equal the exhaustive profile at every budget",
           s.guard_mismatches == 0,
           s.guard_mismatches == 0
               ? "checked every budget on " + std::to_string(s.instances) + " trees"
               : std::to_string(s.guard_mismatches) + " trees disagree, first: " +
                     s.first_guard_bad);
}

// ---- criterion 3 ----

void criterion_3() {
    std::mt19937_64 g(20260819);
    std::size_t trees = 0, checks = 0;
    std::string bad;
    for (int it = 0; it < 200 && bad.empty(); ++it) {
        const int edges = static_cast<int>(pick(g, 1, 6));
        WeightedRootedTree t = random_tree(g, edges, 3, 3);
        ++trees;
        // the lift follows the parent orientation, so each start gets the
        // pipeline applied to the tree rerooted at it
        for (VertexId v = 0; v < t.vertex_count(); ++v) {
            WeightedRootedTree norm = normalize_leaf_weights(t.rerooted(v));
            WeightedRootedTree lifted = lift_edge_weights(norm);
            TransformedTree sub = subdivide_to_unit_edges(lifted);
            if (sub.tree.edge_count() != 2 * t.edge_count()) {
                bad = "subdivision changed the edge count to " +
                      std::to_string(sub.tree.edge_count()) + " from " +
                      std::to_string(t.edge_count());
                break;
            }
            const Weight base = oracle_cs(t, v, CostModel::Primitive);
            const Weight after_norm = oracle_cs(norm, v, CostModel::Primitive);
            const Weight after_lift = oracle_cs(lifted, v, CostModel::Primitive);
            const Weight after_sub = oracle_cs(sub.tree, v, CostModel::Primitive);
            ++checks;
            if (base != after_norm || base != after_lift || base != after_sub) {
                bad = "cost changed from vertex " + std::to_string(v) + ": " +
                      std::to_string(base) + "/" + std::to_string(after_norm) + "/" +
                      std::to_string(after_lift) + "/" + std::to_string(after_sub);
                break;
            }
        }
    }
    report(3, "leaf norm, edge lift, and subdivision never change the cost", bad.empty(),
           bad.empty() ? std::to_string(checks) + " start vertices across " +
                             std::to_string(trees) + " random trees"
                       : bad);
}

// ---- criterion 4 ----

void criterion_4() {
    struct Case {
        ThreePartitionInstance tp;
        bool expect;
    };
    const std::vector<Case> cases = {
        {{12, {4, 4, 4}}, true},
        {{16, {5, 5, 6, 5, 6, 5}}, true},
        {{16, {5, 5, 5, 5, 5, 7}}, false},
    };
    std::string bad;
    std::size_t orders = 0;
    for (const Case& c : cases) {
        const TdsInstance inst = three_partition_to_tds(c.tp);
        const BruteSweep sw = brute_force_schedules(inst, 2, &c.tp);
        orders += sw.orders_tried;
        if (three_partition_exists(c.tp) != c.expect) {
            bad = "partition existence check disagrees with the instance design";
            break;
        }
        if ((sw.feasible_count > 0) != c.expect) {
            bad = "B=" + std::to_string(c.tp.B) + ": " + std::to_string(sw.feasible_count) +
                  " feasible orders but partition existence is " +
                  (c.expect ? "yes" : "no");
            break;
        }
        if (sw.structural_violations != 0) {
            bad = std::to_string(sw.structural_violations) +
                  " feasible schedules broke the blocker-window structure";
            break;
        }
        if (c.expect) {
            const auto groups = extract_three_partition(c.tp, inst, *sw.first_feasible);
            for (const auto& grp : groups) {
                Time sum = 0;
                for (Time a : grp) sum += a;
                if (grp.size() != 3 || sum != c.tp.B) bad = "extracted groups malformed";
            }
        }
    }
    report(4, "schedule feasibility decides number partitioning with clean structure",
           bad.empty(),
           bad.empty() ? "3 instances, " + std::to_string(orders) + " orders swept" : bad);
}

// ---- criterion 5 ----

void criterion_5() {
    std::vector<TdsInstance> cases;
    cases.push_back(TdsInstance{{Task{1, 1, {1}}}});
    cases.push_back(two_task_instance());
    cases.push_back(TdsInstance{{Task{1, 2, {1, 1}}, Task{2, 2, {1, 1}}, Task{3, 2, {1, 1}}}});
    cases.push_back(TdsInstance{{Task{1, 3, {1, 2, 2}}, Task{2, 3, {2, 2, 2}}}});
    cases.push_back(TdsInstance{{Task{1, 4, {1, 2, 3, 4}}}});
    cases.push_back(TdsInstance{{Task{1, 4, {2, 2, 2, 2}}, Task{2, 2, {1, 2}}}});

    std::string bad;
    std::size_t translated = 0, witnesses = 0;
    for (size_t ci = 0; ci < cases.size() && bad.empty(); ++ci) {
        const TdsInstance& inst = cases[ci];
        const ReductionTree rt = tds_to_tree(inst);
        const std::string tag = "instance " + std::to_string(ci + 1);

        std::vector<int> ids;
        for (const Task& t : inst.tasks) ids.push_back(t.id);
        std::sort(ids.begin(), ids.end());
        bool any_feasible = false;
        do {
            const Schedule d = simulate(inst, ids);
            if (!d.feasible) continue;
            any_feasible = true;
            const SearchStrategy s = schedule_to_strategy(inst, d, rt);
            const VerificationReport rep = verify(rt.tree, s, rt.budget);
            ++translated;
            if (!rep.ok) {
                bad = tag + ": translated strategy failed at budget " +
                      std::to_string(rt.budget) + " (" + rep.failure_reason + ")";
                break;
            }
        } while (std::next_permutation(ids.begin(), ids.end()));
        if (!bad.empty()) break;

        const OracleResult best = oracle_search(rt.tree, rt.tree.root(), CostModel::Composed);
        const bool searchable = best.searchers <= rt.budget;
        if (searchable != any_feasible) {
            bad = tag + ": optimal cost " + std::to_string(best.searchers) + " vs budget " +
                  std::to_string(rt.budget) + " but a feasible order " +
                  (any_feasible ? "exists" : "does not exist");
            break;
        }
        if (searchable) {
            const Schedule back = strategy_to_schedule(inst, rt, best.strategy);
            ++witnesses;
            if (!back.feasible) {
                bad = tag + ": optimal witness read back as an infeasible schedule";
                break;
            }
        }
    }
    report(5, "task systems and their trees stay equivalent both ways", bad.empty(),
           bad.empty() ? std::to_string(translated) + " schedules translated, " +
                             std::to_string(witnesses) + " witnesses read back, 6 instances"
                       : bad);
}

// ---- criterion 6 ----

void criterion_6() {
    std::vector<WeightedRootedTree> bases;
    bases.push_back(unit_path(2));
    bases.push_back(WeightedRootedTree({1, 3}, {{0, 1, 1}}, 0));
    bases.push_back(WeightedRootedTree({2, 1}, {{0, 1, 2}}, 0));
    bases.push_back(unit_path(3));
    bases.push_back(WeightedRootedTree({1, 5, 1}, {{0, 1, 1}, {1, 2, 1}}, 0));
    bases.push_back(star3());
    bases.push_back(WeightedRootedTree(
        {1, 1, 1, 1, 1}, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {0, 4, 1}}, 0));
    bases.push_back(unit_path(5));
    bases.push_back(WeightedRootedTree(
        {3, 1, 2, 1, 2}, {{0, 1, 2}, {1, 2, 1}, {1, 3, 1}, {3, 4, 2}}, 0));
    bases.push_back(WeightedRootedTree(
        {1, 1, 1, 1, 1, 1}, {{0, 1, 1}, {1, 2, 1}, {1, 3, 1}, {2, 4, 1}, {2, 5, 1}}, 0));

    std::string bad;
    for (size_t bi = 0; bi < bases.size() && bad.empty(); ++bi) {
        const WeightedRootedTree& base = bases[bi];
        const Weight k = oracle_cs(base, base.root(), CostModel::Primitive);
        const TransformedTree g = unrooted_hardness_gadget(base);
        // the three copies are isomorphic, so it suffices to scan the apex
        // plus the vertices of one copy
        Weight best = oracle_cs(g.tree, g.tree.root(), CostModel::Primitive);
        for (VertexId v = 0; v < base.vertex_count(); ++v)
            best = std::min(best, oracle_cs(g.tree, v, CostModel::Primitive));
        if (best != 2 * k + 1)
            bad = "base " + std::to_string(bi + 1) + ": rooted cost " + std::to_string(k) +
                  " but the gadget's best start needs " + std::to_string(best) +
                  " instead of " + std::to_string(2 * k + 1);
    }
    report(6, "tripled gadget pins the unrooted cost at twice the rooted cost plus one",
           bad.empty(), bad.empty() ? std::to_string(bases.size()) + " base trees" : bad);
}

// ---- criterion 7 ----

void criterion_7() {
    std::string bad;
    std::size_t verified = 0, compared = 0;

    auto reverify = [&](const std::string& tree_file, const std::string& strat_file,
                        Weight budget) {
        if (!bad.empty()) return;
        const auto r = run_cli("verify " + tree_file + " " + strat_file + " --budget " +
                               std::to_string(budget));
        if (r.exit_code != 0)
            bad = strat_file + " failed re-verification at budget " + std::to_string(budget);
        else
            ++verified;
    };
    auto same_bytes = [&](const std::string& a, const std::string& b) {
        if (!bad.empty()) return;
        const std::string sa = slurp(a), sb = slurp(b);
        if (sa.empty() || sa != sb)
            bad = a + " and " + b + " differ between runs";
        else
            ++compared;
    };

    const std::string staged = put("a7_staged.json", io::tree_to_json(staged_tree()));
    for (const char* suffix : {"x", "y"}) {
        const auto r = run_cli("solve " + staged + " --out " + at(std::string("a7_s_") + suffix +
                               ".json") + " --out-tree " +
                               at(std::string("a7_t_") + suffix + ".json"));
        if (r.exit_code != 0) bad = "solve failed on the staged tree";
    }
    same_bytes(at("a7_s_x.json"), at("a7_s_y.json"));
    same_bytes(at("a7_t_x.json"), at("a7_t_y.json"));
    if (bad.empty()) {
        const Weight claimed =
            io::meta_of(io::load_file(at("a7_s_x.json"))).at("searchers").get<Weight>();
        reverify(at("a7_t_x.json"), at("a7_s_x.json"), claimed);
    }

    const std::string star = put("a7_star.json", io::tree_to_json(star3()));
    for (const char* suffix : {"x", "y"}) {
        const auto r = run_cli("oracle " + star + " --start 1 --out " +
                               at(std::string("a7_w_") + suffix + ".json"));
        if (r.exit_code != 0) bad = "oracle failed on the star";
    }
    same_bytes(at("a7_w_x.json"), at("a7_w_y.json"));
    if (bad.empty()) {
        const Weight claimed =
            io::meta_of(io::load_file(at("a7_w_x.json"))).at("searchers").get<Weight>();
        reverify(star, at("a7_w_x.json"), claimed);
    }

    const std::string tp = put("a7_tp.json", io::three_partition_to_json({12, {4, 4, 4}}));
    for (const char* suffix : {"x", "y"}) {
        if (run_cli("gen 3p-to-tds " + tp + " --out " +
                    at(std::string("a7_tds_") + suffix + ".json"))
                .exit_code != 0)
            bad = "task-system generation failed";
    }
    same_bytes(at("a7_tds_x.json"), at("a7_tds_y.json"));

    const std::string tds = put("a7_pair.json", io::tds_to_json(two_task_instance()));
    if (bad.empty() && run_cli("schedule " + tds + " --order 2,1 --out " +
                               at("a7_sched.json")).exit_code != 0)
        bad = "schedule simulation failed";
    for (const char* suffix : {"x", "y"}) {
        if (bad.empty() &&
            run_cli("translate schedule-to-strategy --tds " + tds + " --schedule " +
                    at("a7_sched.json") + " --out " + at(std::string("a7_rs_") + suffix +
                    ".json") + " --out-tree " + at(std::string("a7_rt_") + suffix + ".json"))
                    .exit_code != 0)
            bad = "schedule-to-strategy translation failed";
    }
    same_bytes(at("a7_rs_x.json"), at("a7_rs_y.json"));
    same_bytes(at("a7_rt_x.json"), at("a7_rt_y.json"));
    if (bad.empty()) {
        const Weight claimed =
            io::meta_of(io::load_file(at("a7_rs_x.json"))).at("budget").get<Weight>();
        reverify(at("a7_rt_x.json"), at("a7_rs_x.json"), claimed);
    }

    report(7, "every emitted strategy re-verifies and repeated runs are byte-identical",
           bad.empty(),
           bad.empty() ? std::to_string(verified) + " strategies re-verified, " +
                             std::to_string(compared) + " byte comparisons"
                       : bad);
}

// ---- criterion 8 ----

void criterion_8() {
    constexpr double kMaxSlope = 4.0;
    constexpr double kMaxSecondsAtLargest = 60.0;
    const std::vector<int> sizes = {50, 100, 200};
    std::mt19937_64 g(424242);
    std::vector<double> seconds;
    double largest_single = 0;
    for (int n : sizes) {
        double total = 0;
        for (int rep = 0; rep < 3; ++rep) {
            WeightedRootedTree t = random_tree(g, n - 1, 1, 1, 3);
            const auto from = std::chrono::steady_clock::now();
            const SolveResult r = solve_rooted(t);
            const auto to = std::chrono::steady_clock::now();
            if (r.searchers < 1) throw Error("impossible search number");
            const double s = std::chrono::duration<double>(to - from).count();
            total += s;
            if (n == sizes.back()) largest_single = std::max(largest_single, s);
        }
        seconds.push_back(std::max(total, 1e-3));
    }
    const double slope =
        std::log(seconds.back() / seconds.front()) /
        std::log(static_cast<double>(sizes.back()) / static_cast<double>(sizes.front()));
    const bool ok = slope <= kMaxSlope && largest_single < kMaxSecondsAtLargest;
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "times %.3fs/%.3fs/%.3fs, log-log slope %.2f (limit %.1f), largest run %.3fs",
                  seconds[0], seconds[1], seconds[2], slope, kMaxSlope, largest_single);
    report(8, "solve time grows polynomially and stays fast at two hundred vertices", ok,
           detail);
}

}  // namespace

int main() {
    guarded(1, "solver equals exhaustive search on every small tree", [] { criterion_1_and_2(); });
    guarded(3, "leaf norm, edge lift, and subdivision never change the cost", [] { criterion_3(); });
    guarded(4, "schedule feasibility decides number partitioning with clean structure",
            [] { criterion_4(); });
    guarded(5, "task systems and their trees stay equivalent both ways", [] { criterion_5(); });
    guarded(6, "tripled gadget pins the unrooted cost at twice the rooted cost plus one",
            [] { criterion_6(); });
    guarded(7, "every emitted strategy re-verifies and repeated runs are byte-identical",
            [] { criterion_7(); });
    guarded(8, "solve time grows polynomially and stays fast at two hundred vertices",
            [] { criterion_8(); });
    std::printf("%s\n", failures == 0 ? "acceptance: all criteria passed"
                                      : ("acceptance: " + std::to_string(failures) +
                                         " criterion(s) failed")
                                            .c_str());
    return failures;
}
