// Walks the library end to end: solve a small weighted tree, print the
// per-move costs, then round-trip a schedule through the reduction tree.
#include <iostream>

#include <csearch/csearch.hpp>

using namespace csearch;

int main() {
    // A spider: heavy hub 0 with three legs of mixed vertex and edge weights.
    //      0(4)
    //  1/ 2| 3\        (edge weights)
    // 1(2) 2(5) 3(1)
    //  |1        |2
    // 4(1)      5(3)
    WeightedRootedTree t({4, 2, 5, 1, 1, 3},
                         {{0, 1, 1}, {0, 2, 2}, {0, 3, 3}, {1, 4, 1}, {3, 5, 2}}, 0);

    std::cout << "== rooted solve from vertex 0 ==\n";
    SolveResult rooted = solve_rooted(t);
    std::cout << "searchers: " << rooted.searchers << "\n";
    SearchState st(rooted.tree, rooted.strategy.start);
    for (EdgeId e : rooted.strategy.moves) {
        const auto c = st.cost_of(e);
        const EdgeRec& r = rooted.tree.edge(e);
        std::cout << "  clear " << rooted.origins[static_cast<size_t>(r.a)].describe() << "-"
                  << rooted.origins[static_cast<size_t>(r.b)].describe() << "  total "
                  << c.total() << " (" << c.clearing << " clearing + " << c.guarding
                  << " guarding)\n";
        st.apply(e);
    }

    std::cout << "\n== best start vertex ==\n";
    SolveResult best = solve_unrooted(t);
    std::cout << "start " << best.origins[static_cast<size_t>(best.root)].describe() << " needs "
              << best.searchers << " searchers\n";

    std::cout << "\n== schedule round trip ==\n";
    // Two tasks; the second is only feasible early.
    TdsInstance inst;
    inst.tasks.push_back(Task{1, 6, {2, 2, 2, 3, 3, 3}});
    inst.tasks.push_back(Task{2, 4, {2, 2, 3, 4}});
    const ReductionTree rt = tds_to_tree(inst);
    std::cout << "reduction tree: " << rt.tree.vertex_count() << " vertices, budget "
              << rt.budget << "\n";
    for (const std::vector<int>& order : {std::vector<int>{1, 2}, std::vector<int>{2, 1}}) {
        const Schedule d = simulate(inst, order);
        std::cout << "order " << order[0] << "," << order[1] << ": "
                  << (d.feasible ? "feasible" : "infeasible");
        if (d.feasible) {
            const SearchStrategy s = schedule_to_strategy(inst, d, rt);
            const Schedule back = strategy_to_schedule(inst, rt, s);
            std::cout << " -> strategy with " << s.moves.size() << " moves -> order";
            for (int id : back.order) std::cout << " " << id;
        }
        std::cout << "\n";
    }
    return 0;
}
