#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <csearch/csearch.hpp>

namespace {

using namespace csearch;
using io::json;

void print_trace(const WeightedRootedTree& t, const SearchStrategy& s, CostModel model) {
    SearchState st(t, s.start, model);
    int i = 0;
    for (EdgeId e : s.moves) {
        const auto c = st.cost_of(e);
        const EdgeRec& r = t.edge(e);
        std::cout << "  " << ++i << ". " << r.a << "-" << r.b << "  clearing " << c.clearing
                  << "  guarding " << c.guarding << "  total " << c.total() << "\n";
        st.apply(e);
    }
    std::cout << "peak: " << st.peak_so_far() << "\n";
}

json origins_meta(const std::vector<VertexOrigin>& origins) {
    json roles = json::array();
    for (const VertexOrigin& o : origins) roles.push_back(o.describe());
    return roles;
}

json reduction_meta(const ReductionTree& rt) {
    json m;
    m["generator"] = "tds";
    m["budget"] = rt.budget;
    m["horizon"] = rt.horizon;
    json roles = json::array();
    for (const ReductionTree::Role& role : rt.roles) {
        std::string s(1, role.kind);
        if (role.task >= 0) s += ":" + std::to_string(role.task);
        if (role.index >= 0) s += ":" + std::to_string(role.index);
        roles.push_back(s);
    }
    m["roles"] = std::move(roles);
    return m;
}

void print_schedule(const TdsInstance& inst, const Schedule& d) {
    for (size_t i = 0; i < d.start.size(); ++i) {
        const Task& t = inst.task(d.order[i]);
        std::cout << "  task " << t.id << ": start " << d.start[i] << "  complete "
                  << d.completion[i] << "  deadline " << t.deadline
                  << (d.completion[i] <= t.deadline ? "" : "  LATE") << "\n";
    }
    if (d.feasible)
        std::cout << "feasible: yes (makespan " << d.makespan << ")\n";
    else
        std::cout << "feasible: no (" << d.diagnostic << ")\n";
}

void print_structure(const ThreePartitionInstance& tp, const TdsInstance& inst,
                     const Schedule& d) {
    const StructuralReport rep = check_structural_lemmas(tp, inst, d);
    std::cout << "blocker order: " << (rep.blockers_ordered ? "by index" : "VIOLATED") << "\n";
    for (const BlockerWindow& w : rep.windows)
        std::cout << "  window " << w.i << ": [" << w.from << ", " << w.to << ") in ["
                  << w.interval_low << ", " << w.interval_high << ")  length " << (w.to - w.from)
                  << " (want " << w.expected_length << ")"
                  << (w.contained && w.to - w.from == w.expected_length ? "" : "  VIOLATED")
                  << "\n";
    if (!rep.ok) {
        std::cout << "structure: violated (" << rep.violation << ")\n";
        return;
    }
    std::cout << "structure: ok\n";
    const auto groups = extract_three_partition(tp, inst, d);
    for (size_t g = 0; g < groups.size(); ++g) {
        std::cout << "  group " << g + 1 << ":";
        Time sum = 0;
        for (size_t i = 0; i < groups[g].size(); ++i) {
            std::cout << (i ? " + " : " ") << groups[g][i];
            sum += groups[g][i];
        }
        std::cout << " = " << sum << "\n";
    }
}

struct SolveOpts {
    std::string tree_path;
    int root = -1;
    bool unrooted = false;
    bool naive_k = false;
    bool dedup = false;
    int degree_cap = 8;
    int jobs = 1;
    bool trace = false;
    std::string out, out_tree;
};

int cmd_solve(const SolveOpts& o) {
    WeightedRootedTree t = io::tree_from_json(io::load_file(o.tree_path));
    SolverOptions sopt;
    sopt.naive_budget = o.naive_k;
    sopt.max_degree_cap = o.degree_cap;
    sopt.dedup_sibling_permutations = o.dedup;
    SolveResult res;
    if (o.unrooted) {
        res = solve_unrooted(t, sopt);
    } else {
        if (o.root >= 0) {
            if (o.root >= t.vertex_count())
                throw Error("root " + std::to_string(o.root) + " is not a vertex");
            t = t.rerooted(o.root);
        }
        res = solve_rooted(t, sopt);
    }
    const VerificationReport rep = verify(res.tree, res.strategy, res.searchers);
    if (!rep.ok)
        throw Error("internal: solver strategy failed verification: " + rep.failure_reason);
    std::cout << "searchers: " << res.searchers << "\n";
    std::cout << "start: " << res.root << " ("
              << res.origins[static_cast<size_t>(res.root)].describe() << ")\n";
    std::cout << "moves: " << res.strategy.moves.size() << "\n";
    if (o.trace) print_trace(res.tree, res.strategy, CostModel::Composed);
    if (!o.out.empty()) {
        json meta;
        meta["searchers"] = res.searchers;
        meta["start"] = res.origins[static_cast<size_t>(res.root)].describe();
        io::save_file(o.out, io::strategy_to_json(res.tree, res.strategy, std::move(meta)));
    }
    if (!o.out_tree.empty()) {
        json meta;
        meta["origins"] = origins_meta(res.origins);
        io::save_file(o.out_tree, io::tree_to_json(res.tree, std::move(meta)));
    }
    return 0;
}

struct OracleOpts {
    std::string tree_path;
    int start = 0;
    std::string model = "raw";
    bool trace = false;
    std::string out;
};

int cmd_oracle(const OracleOpts& o) {
    WeightedRootedTree t = io::tree_from_json(io::load_file(o.tree_path));
    if (o.start < 0 || o.start >= t.vertex_count())
        throw Error("start " + std::to_string(o.start) + " is not a vertex");
    const CostModel model =
        o.model == "composed" ? CostModel::Composed : CostModel::Primitive;
    const OracleResult res = oracle_search(t, o.start, model);
    std::cout << "searchers: " << res.searchers << "\n";
    std::cout << "moves: " << res.strategy.moves.size() << "\n";
    if (o.trace) print_trace(t, res.strategy, model);
    if (!o.out.empty()) {
        json meta;
        meta["searchers"] = res.searchers;
        meta["model"] = o.model;
        io::save_file(o.out, io::strategy_to_json(t, res.strategy, std::move(meta)));
    }
    return 0;
}

struct VerifyOpts {
    std::string tree_path, strategy_path;
    Weight budget = 0;
    bool trace = false;
};

int cmd_verify(const VerifyOpts& o) {
    WeightedRootedTree t = io::tree_from_json(io::load_file(o.tree_path));
    SearchStrategy s = io::strategy_from_json(t, io::load_file(o.strategy_path));
    const VerificationReport rep = verify(t, s, o.budget);
    if (o.trace)
        for (size_t i = 0; i < rep.per_move.size(); ++i) {
            const MoveReport& m = rep.per_move[i];
            const EdgeRec& r = t.edge(m.edge);
            std::cout << "  " << i + 1 << ". " << r.a << "-" << r.b << "  clearing "
                      << m.clearing << "  guarding " << m.guarding << "  total " << m.total()
                      << "\n";
        }
    if (rep.ok) {
        std::cout << "valid: " << s.moves.size() << " moves, peak " << rep.searchers_used
                  << " within budget " << o.budget << "\n";
        return 0;
    }
    std::cout << "invalid";
    if (rep.failure_move >= 0) std::cout << " at move " << rep.failure_move + 1;
    std::cout << ": " << rep.failure_reason << "\n";
    return 1;
}

struct GenOpts {
    std::string in_path, out;
    std::optional<Weight> budget_claim;
};

int cmd_gen_3p_to_tds(const GenOpts& o) {
    const ThreePartitionInstance tp = io::three_partition_from_json(io::load_file(o.in_path));
    const TdsInstance inst = three_partition_to_tds(tp);
    io::save_file(o.out, io::tds_to_json(inst, io::gadget_meta(tp)));
    std::cout << "tasks: " << inst.tasks.size() << "\n";
    std::cout << "horizon: " << inst.horizon() << "\n";
    return 0;
}

int cmd_gen_tds_to_tree(const GenOpts& o) {
    const TdsInstance inst = io::tds_from_json(io::load_file(o.in_path));
    const ReductionTree rt = tds_to_tree(inst);
    io::save_file(o.out, io::tree_to_json(rt.tree, reduction_meta(rt)));
    std::cout << "vertices: " << rt.tree.vertex_count() << "\n";
    std::cout << "budget: " << rt.budget << "\n";
    return 0;
}

int cmd_gen_gadget(const GenOpts& o) {
    const WeightedRootedTree t = io::tree_from_json(io::load_file(o.in_path));
    const TransformedTree g = unrooted_hardness_gadget(t);
    json meta;
    meta["generator"] = "gadget-unrooted";
    meta["copies"] = 3;
    if (o.budget_claim)
        meta["claim"] = "best unrooted cost is 2*" + std::to_string(*o.budget_claim) +
                        "+1 iff the rooted cost is at most " + std::to_string(*o.budget_claim);
    meta["origins"] = origins_meta(g.origins);
    io::save_file(o.out, io::tree_to_json(g.tree, std::move(meta)));
    std::cout << "vertices: " << g.tree.vertex_count() << "\n";
    return 0;
}

struct ScheduleOpts {
    std::string tds_path;
    std::vector<int> order;
    std::string order_file;
    bool brute = false;
    int jobs = 1;
    std::string out;
};

int cmd_schedule(const ScheduleOpts& o) {
    const json jt = io::load_file(o.tds_path);
    const TdsInstance inst = io::tds_from_json(jt);
    const std::optional<ThreePartitionInstance> gadget = io::gadget_from_meta(jt);

    if (o.brute) {
        const BruteSweep sw =
            brute_force_schedules(inst, o.jobs, gadget ? &*gadget : nullptr);
        std::cout << "orders tried: " << sw.orders_tried << "\n";
        std::cout << "feasible orders: " << sw.feasible_count << "\n";
        if (gadget)
            std::cout << "structural violations: " << sw.structural_violations << "\n";
        if (sw.first_feasible) {
            std::cout << "first feasible order:";
            for (int id : sw.first_feasible->order) std::cout << " " << id;
            std::cout << "\n";
            print_schedule(inst, *sw.first_feasible);
            if (gadget) print_structure(*gadget, inst, *sw.first_feasible);
            if (!o.out.empty()) io::save_file(o.out, io::schedule_to_json(*sw.first_feasible));
        } else {
            std::cout << "no feasible order\n";
        }
        return 0;
    }

    std::vector<int> order = o.order;
    if (!o.order_file.empty()) {
        if (!order.empty()) throw Error("give either --order or --order-file, not both");
        order = io::schedule_order_from_json(io::load_file(o.order_file));
    }
    if (order.empty() && !inst.tasks.empty())
        throw Error("give --order, --order-file, or --brute");
    const Schedule d = simulate(inst, order);
    print_schedule(inst, d);
    if (gadget && d.feasible) print_structure(*gadget, inst, d);
    if (!o.out.empty()) io::save_file(o.out, io::schedule_to_json(d));
    return d.feasible ? 0 : 1;
}

struct TranslateOpts {
    std::string tds_path, schedule_path, strategy_path;
    std::string out, out_tree;
};

int cmd_schedule_to_strategy(const TranslateOpts& o) {
    const TdsInstance inst = io::tds_from_json(io::load_file(o.tds_path));
    const ReductionTree rt = tds_to_tree(inst);
    Schedule d;
    d.order = io::schedule_order_from_json(io::load_file(o.schedule_path));
    const SearchStrategy s = schedule_to_strategy(inst, d, rt);
    const VerificationReport rep = verify(rt.tree, s, rt.budget);
    if (!rep.ok) throw Error("internal: translated strategy failed verification");
    std::cout << "moves: " << s.moves.size() << "\n";
    std::cout << "peak: " << rep.searchers_used << " within budget " << rt.budget << "\n";
    if (!o.out.empty()) {
        json meta;
        meta["budget"] = rt.budget;
        io::save_file(o.out, io::strategy_to_json(rt.tree, s, std::move(meta)));
    }
    if (!o.out_tree.empty())
        io::save_file(o.out_tree, io::tree_to_json(rt.tree, reduction_meta(rt)));
    return 0;
}

int cmd_strategy_to_schedule(const TranslateOpts& o) {
    const TdsInstance inst = io::tds_from_json(io::load_file(o.tds_path));
    const ReductionTree rt = tds_to_tree(inst);
    const SearchStrategy s = io::strategy_from_json(rt.tree, io::load_file(o.strategy_path));
    const Schedule d = strategy_to_schedule(inst, rt, s);
    print_schedule(inst, d);
    if (!o.out.empty()) io::save_file(o.out, io::schedule_to_json(d));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"connected searching of weighted trees"};
    app.require_subcommand(1);
    int rc = 0;

    SolveOpts so;
    auto* solve = app.add_subcommand("solve", "optimal connected search of a weighted tree");
    solve->add_option("tree", so.tree_path, "tree JSON file")->required();
    auto* root_opt = solve->add_option("--root", so.root, "solve from this start vertex");
    solve->add_flag("--unrooted", so.unrooted, "minimize over all start vertices")
        ->excludes(root_opt);
    solve->add_flag("--naive-k", so.naive_k,
                    "step candidate budgets by 1 instead of jumping to the next change point");
    solve->add_flag("--dedup-siblings", so.dedup,
                    "skip child orders that permute isomorphic sibling subtrees");
    solve->add_option("--max-degree-cap", so.degree_cap,
                      "refuse vertices of higher degree (child orders grow factorially); 0 lifts "
                      "the cap")
        ->check(CLI::NonNegativeNumber);
    solve->add_option("--jobs", so.jobs, "accepted for symmetry; solving is sequential")
        ->check(CLI::PositiveNumber);
    solve->add_flag("--trace", so.trace, "print per-move costs");
    solve->add_option("--out", so.out, "write the strategy JSON here");
    solve->add_option("--out-tree", so.out_tree,
                      "write the searched (canonical) tree JSON here");
    solve->callback([&] { rc = cmd_solve(so); });

    OracleOpts oo;
    auto* oracle = app.add_subcommand(
        "oracle", "exhaustive minimum search cost of a small tree (at most 20 edges)");
    oracle->add_option("tree", oo.tree_path, "tree JSON file")->required();
    oracle->add_option("--start", oo.start, "start vertex")->required();
    oracle->add_option("--model", oo.model,
                       "raw: the start pays its guard only when it keeps edges; "
                       "composed: the start is guarded up front")
        ->check(CLI::IsMember({"raw", "composed"}));
    oracle->add_flag("--trace", oo.trace, "print per-move costs");
    oracle->add_option("--out", oo.out, "write the witness strategy JSON here");
    oracle->callback([&] { rc = cmd_oracle(oo); });

    VerifyOpts vo;
    auto* verify_cmd = app.add_subcommand("verify", "check a strategy against a budget");
    verify_cmd->add_option("tree", vo.tree_path, "tree JSON file (unit edge weights)")
        ->required();
    verify_cmd->add_option("strategy", vo.strategy_path, "strategy JSON file")->required();
    verify_cmd->add_option("--budget", vo.budget, "searcher budget")->required();
    verify_cmd->add_flag("--trace", vo.trace, "print per-move costs");
    verify_cmd->callback([&] { rc = cmd_verify(vo); });

    GenOpts go;
    auto* gen = app.add_subcommand("gen", "generate reductions and gadgets");
    gen->require_subcommand(1);
    auto* g3p = gen->add_subcommand("3p-to-tds",
                                    "3-partition instance to a task system with deadlines");
    g3p->add_option("input", go.in_path, "3-partition JSON file")->required();
    g3p->add_option("--out", go.out, "write the task system JSON here")->required();
    g3p->callback([&] { rc = cmd_gen_3p_to_tds(go); });
    auto* gtt = gen->add_subcommand("tds-to-tree", "task system to a weighted search tree");
    gtt->add_option("input", go.in_path, "task system JSON file")->required();
    gtt->add_option("--out", go.out, "write the tree JSON here")->required();
    gtt->callback([&] { rc = cmd_gen_tds_to_tree(go); });
    auto* gg = gen->add_subcommand(
        "gadget-unrooted",
        "three-copy gadget turning a rooted search question into an unrooted one");
    gg->add_option("input", go.in_path, "tree JSON file")->required();
    gg->add_option("--out", go.out, "write the gadget tree JSON here")->required();
    Weight claim_k = 0;
    auto* claim_opt = gg->add_option("--budget", claim_k,
                                     "record the rooted budget the gadget answers for");
    gg->callback([&] {
        if (claim_opt->count()) go.budget_claim = claim_k;
        rc = cmd_gen_gadget(go);
    });

    ScheduleOpts sco;
    auto* sched = app.add_subcommand("schedule", "simulate or search task execution orders");
    sched->add_option("tds", sco.tds_path, "task system JSON file")->required();
    sched->add_option("--order", sco.order, "comma-separated task ids")->delimiter(',');
    sched->add_option("--order-file", sco.order_file, "schedule JSON file to take the order from");
    sched->add_flag("--brute", sco.brute, "try every order (at most 9 tasks)");
    sched->add_option("--jobs", sco.jobs, "worker threads for --brute")
        ->check(CLI::PositiveNumber);
    sched->add_option("--out", sco.out, "write the resulting schedule JSON here");
    sched->callback([&] { rc = cmd_schedule(sco); });

    TranslateOpts to;
    auto* tr = app.add_subcommand("translate",
                                  "move between schedules and search strategies");
    tr->require_subcommand(1);
    auto* s2s = tr->add_subcommand("schedule-to-strategy",
                                   "feasible schedule to a strategy on the reduction tree");
    s2s->add_option("--tds", to.tds_path, "task system JSON file")->required();
    s2s->add_option("--schedule", to.schedule_path, "schedule JSON file")->required();
    s2s->add_option("--out", to.out, "write the strategy JSON here");
    s2s->add_option("--out-tree", to.out_tree, "write the reduction tree JSON here");
    s2s->callback([&] { rc = cmd_schedule_to_strategy(to); });
    auto* s2d = tr->add_subcommand("strategy-to-schedule",
                                   "verified strategy on the reduction tree to a schedule");
    s2d->add_option("--tds", to.tds_path, "task system JSON file")->required();
    s2d->add_option("--strategy", to.strategy_path, "strategy JSON file")->required();
    s2d->add_option("--out", to.out, "write the schedule JSON here");
    s2d->callback([&] { rc = cmd_strategy_to_schedule(to); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const csearch::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const csearch::CapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const csearch::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
