#pragma once

// Shared fixture diagrams and test-only oracles.

#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "greechie/diagram.hpp"
#include "greechie/eqparser.hpp"
#include "greechie/lattice.hpp"

namespace fixtures {

// n-gon of 3-atom blocks: corner atoms 0,2,4,... shared between
// consecutive blocks, odd atoms private centers.
inline greechie::Diagram polygon(int sides) {
    std::vector<std::vector<int>> blocks;
    for (int i = 0; i < sides; ++i)
        blocks.push_back({2 * i, 2 * i + 1, (2 * i + 2) % (2 * sides)});
    return greechie::make_diagram(2 * sides, std::move(blocks));
}

inline greechie::Diagram pentagon() { return polygon(5); }
inline greechie::Diagram triangle() { return polygon(3); }
inline greechie::Diagram square() { return polygon(4); }
inline greechie::Diagram decagon() { return polygon(10); }

// Blocks are the vertices of the Petersen graph, atoms its edges; a
// vertex's block holds its three incident edges. Girth 5, so the
// diagram is a valid Greechie-3-L diagram: 15 atoms, 10 blocks.
inline greechie::Diagram petersen() {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < 5; ++i) edges.push_back({i, (i + 1) % 5});          // outer cycle
    for (int i = 0; i < 5; ++i) edges.push_back({i, i + 5});                // spokes
    for (int i = 0; i < 5; ++i) edges.push_back({5 + i, 5 + (i + 2) % 5}); // inner star
    std::vector<std::vector<int>> blocks(10);
    for (int e = 0; e < 15; ++e) {
        blocks[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)].first)].push_back(e);
        blocks[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)].second)].push_back(e);
    }
    return greechie::make_diagram(15, std::move(blocks));
}

// Adds a 3-atom foot through the given atom (two fresh atoms).
inline greechie::Diagram with_foot(const greechie::Diagram& d, int atom) {
    auto blocks = d.blocks;
    blocks.push_back({atom, d.atom_count, d.atom_count + 1});
    return greechie::make_diagram(d.atom_count + 2, std::move(blocks));
}

// Counts atom bijections of d onto itself mapping blocks onto blocks.
inline std::uint64_t brute_automorphism_count(const greechie::Diagram& d) {
    std::uint64_t count = 0;
    greechie::enumerate_isomorphisms(d, d, [&](const std::vector<int>&) {
        ++count;
        return true;
    });
    return count;
}

// Reference checker: evaluates terms straight from the definitions and
// scans every assignment with no early exits, in the same variable and
// node order as the production checker.
namespace naive {

inline int eval(const greechie::Lattice& l, const greechie::TermPtr& t,
                const std::map<int, int>& asg) {
    using greechie::TermOp;
    auto jn = [&](int x, int y) { return l.join[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]; };
    auto mt = [&](int x, int y) { return l.meet[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]; };
    auto oc = [&](int x) { return l.ortho[static_cast<std::size_t>(x)]; };
    switch (t->op) {
    case TermOp::Var: return asg.at(t->var);
    case TermOp::Zero: return 0;
    case TermOp::One: return 1;
    case TermOp::Comp: return oc(eval(l, t->a, asg));
    default: break;
    }
    const int x = eval(l, t->a, asg);
    const int y = eval(l, t->b, asg);
    switch (t->op) {
    case TermOp::Join: return jn(x, y);
    case TermOp::Meet: return mt(x, y);
    case TermOp::Impl0: return jn(oc(x), y);
    case TermOp::Impl1: return jn(oc(x), mt(x, y));
    case TermOp::Impl2: return jn(y, mt(oc(x), oc(y)));
    case TermOp::Impl3: return jn(jn(mt(oc(x), y), mt(oc(x), oc(y))), mt(x, jn(oc(x), y)));
    case TermOp::Impl4: return jn(jn(mt(x, y), mt(oc(x), y)), mt(jn(oc(x), y), oc(y)));
    case TermOp::Impl5: return jn(jn(mt(x, y), mt(oc(x), y)), mt(oc(x), oc(y)));
    case TermOp::Biimp: return jn(mt(x, y), mt(oc(x), oc(y)));
    }
    return 0;
}

inline bool holds(const greechie::Lattice& l, const greechie::Relation& r,
                  const std::map<int, int>& asg) {
    const int x = eval(l, r.lhs, asg);
    const int y = eval(l, r.rhs, asg);
    return r.rel == greechie::RelOp::Equals
               ? x == y
               : l.leq[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] != 0;
}

struct Result {
    bool passed = true;
    std::map<int, int> assignment;
};

inline Result check(const greechie::Lattice& l, const greechie::Inference& inf) {
    const auto vars = greechie::variables(inf);
    std::map<int, int> asg;
    std::vector<int> nodes(vars.size(), 0);
    while (true) {
        for (std::size_t i = 0; i < vars.size(); ++i) asg[vars[i]] = nodes[i];
        bool hyps = true;
        for (const auto& h : inf.hypotheses)
            if (holds(l, h.relation, asg) == h.negated) {
                hyps = false;
                break;
            }
        if (hyps && !holds(l, inf.conclusion, asg)) return {false, asg};
        // odometer: innermost variable is the last one
        std::size_t i = vars.size();
        while (i > 0) {
            if (++nodes[i - 1] < l.n) break;
            nodes[i - 1] = 0;
            --i;
        }
        if (i == 0) break;
        if (vars.empty()) break;
    }
    return {};
}

} // namespace naive
} // namespace fixtures
