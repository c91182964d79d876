#pragma once

#include <csearch/csearch.hpp>

#include <cstdio>
#include <random>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace testsupport {

using namespace csearch;

// mt19937_64 output is pinned by the standard; distributions are not, so draw
// bounded ints by hand to keep expected values stable across toolchains
inline std::uint64_t pick(std::mt19937_64& g, std::uint64_t lo, std::uint64_t hi) {
    return lo + g() % (hi - lo + 1);
}

inline WeightedRootedTree unit_path(int n) {
    std::vector<Weight> w(static_cast<size_t>(n), 1);
    std::vector<EdgeRec> e;
    for (int i = 1; i < n; ++i) e.push_back({i - 1, i, 1});
    return {std::move(w), std::move(e), 0};
}

// three unit leaves around a unit center, rooted at the center
inline WeightedRootedTree star3() {
    return {{1, 1, 1, 1}, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}}, 0};
}

/// Heavy root over three branches that each admit a cheap hand-off vertex:
/// clearing it optimally takes 12 searchers and forces the root edges first,
/// then the branches in a specific interleaving. Unit edges throughout.
///
///        0 (9)
///      /   |   \
///   1 (2) 2 (1) 3 (4)
///     |    |     |
///   4 (8) 8 (8) 10 (7)
///     |    |    /    \
///   5 (1) 9(1) 11(1)  12(2)
///     |         |      |
///   6 (12)     13(9)  15(11)
///     |         |      |
///   7 (1)      14(1)  16(1)
inline WeightedRootedTree staged_tree() {
    return {{9, 2, 1, 4, 8, 1, 12, 1, 8, 1, 7, 1, 2, 9, 1, 11, 1},
            {{0, 1, 1},
             {0, 2, 1},
             {0, 3, 1},
             {1, 4, 1},
             {4, 5, 1},
             {5, 6, 1},
             {6, 7, 1},
             {2, 8, 1},
             {8, 9, 1},
             {3, 10, 1},
             {10, 11, 1},
             {10, 12, 1},
             {11, 13, 1},
             {13, 14, 1},
             {12, 15, 1},
             {15, 16, 1}},
            0};
}

/// Random tree on `edges` edges: vertex v>0 attaches to a uniformly chosen
/// earlier vertex (degree-capped when max_degree > 0), weights uniform in
/// [1, max].
inline WeightedRootedTree random_tree(std::mt19937_64& g, int edges, Weight max_vw,
                                      Weight max_ew, int max_degree = 0) {
    const int n = edges + 1;
    std::vector<Weight> w;
    w.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) w.push_back(pick(g, 1, max_vw));
    std::vector<EdgeRec> e;
    std::vector<int> deg(static_cast<size_t>(n), 0);
    for (int v = 1; v < n; ++v) {
        std::vector<int> eligible;
        for (int u = 0; u < v; ++u)
            if (max_degree <= 0 || deg[static_cast<size_t>(u)] < max_degree) eligible.push_back(u);
        const int p = eligible[pick(g, 0, eligible.size() - 1)];
        ++deg[static_cast<size_t>(p)];
        ++deg[static_cast<size_t>(v)];
        e.push_back({p, v, static_cast<Weight>(pick(g, 1, max_ew))});
    }
    return {std::move(w), std::move(e), 0};
}

// two deadline-2 unit-duration tasks; its reduction tree has 15 vertices
inline TdsInstance two_task_instance() {
    return {{Task{1, 2, {1, 1}}, Task{2, 2, {1, 1}}}};
}

#ifdef CSEARCH_CLI_PATH

struct CliResult {
    int exit_code = -1;
    std::string out;
};

/// Runs the CLI with the given argument string, capturing stdout+stderr.
inline CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(CSEARCH_CLI_PATH) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) throw Error("popen failed for: " + cmd);
    CliResult r;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
    const int status = pclose(p);
    r.exit_code = status < 0 ? -1 : WEXITSTATUS(status);
    return r;
}

#endif

}  // namespace testsupport
