#pragma once

// Pastes a Greechie diagram (block sizes 2-4, no loops of order <= 4)
// into its orthomodular lattice: the Boolean algebra of each block,
// glued on 0, 1 and shared atoms. Order, join, meet and
// orthocomplement are precomputed as dense tables.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "greechie/diagram.hpp"

namespace greechie {

enum class NodeKind { Zero, One, Atom, Coatom, Middle };

struct Node {
    NodeKind kind = NodeKind::Zero;
    int atom = -1;            // for Atom/Coatom
    int block = -1;           // for Middle
    std::vector<int> subset;  // for Middle: the atoms below it
};

struct paste_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Lattice {
    int n = 0;
    int alpha = 0;
    int beta = 0;
    std::vector<Node> nodes;
    std::vector<std::vector<char>> leq; // leq[x][y]: x <= y
    std::vector<std::vector<int>> join;
    std::vector<std::vector<int>> meet;
    std::vector<int> ortho;
    std::vector<std::string> names;
};

inline const std::string& node_name(const Lattice& l, int id) {
    return l.names[static_cast<std::size_t>(id)];
}

namespace detail {

// Display names: 0 and 1 for the bounds, then a..z, A..Z, then the
// same letters with a numeric suffix (a1, b1, ...).
inline std::string display_name(int id) {
    if (id == 0) return "0";
    if (id == 1) return "1";
    const int i = id - 2;
    const char letter = i % 52 < 26 ? static_cast<char>('a' + i % 26)
                                    : static_cast<char>('A' + i % 52 - 26);
    const int round = i / 52;
    if (round == 0) return std::string(1, letter);
    return std::string(1, letter) + std::to_string(round);
}

} // namespace detail

// Builds the pasted lattice of a valid diagram. Throws paste_error on
// invalid input (disallowed block size, loops up to order 4) or if a
// pair of nodes lacks a unique bound.
inline Lattice paste(const Diagram& d) {
    const auto report = validate(d, true);
    if (!report.ok()) {
        for (const ConditionResult* c :
             {&report.atom_in_block, &report.min_block_size, &report.isolated_two_blocks,
              &report.single_intersection, &report.no_loop_3, &report.no_loop_4})
            if (!c->pass) throw paste_error("paste: invalid diagram: " + c->witness);
    }
    for (std::size_t e = 0; e < d.blocks.size(); ++e)
        if (d.blocks[e].size() < 2 || d.blocks[e].size() > 4)
            throw paste_error("paste: block " + std::to_string(e) + " has size " +
                              std::to_string(d.blocks[e].size()) + " (supported: 2-4)");

    Lattice l;
    l.alpha = d.atom_count;
    l.beta = static_cast<int>(d.blocks.size());

    const auto rank = atom_ranks(d);
    const auto at = blocks_of_atom(d);

    // the partner of an atom in a 2-element block, else -1
    std::vector<int> two_partner(static_cast<std::size_t>(d.atom_count), -1);
    for (const auto& b : d.blocks)
        if (b.size() == 2) {
            two_partner[static_cast<std::size_t>(b[0])] = b[1];
            two_partner[static_cast<std::size_t>(b[1])] = b[0];
        }

    // node ids: 0, 1, atoms in diagram order (the larger atom of a
    // 2-block is deferred to the complement pass), complements in atom
    // order, then middles in (block, subset) order
    std::vector<int> atom_node(static_cast<std::size_t>(d.atom_count), -1);
    std::vector<int> coatom_node(static_cast<std::size_t>(d.atom_count), -1);
    l.nodes.push_back({NodeKind::Zero, -1, -1, {}});
    l.nodes.push_back({NodeKind::One, -1, -1, {}});

    for (int a = 0; a < d.atom_count; ++a) {
        const int p = two_partner[static_cast<std::size_t>(a)];
        if (p >= 0 && p < a) continue; // placed as the complement of p
        atom_node[static_cast<std::size_t>(a)] = static_cast<int>(l.nodes.size());
        l.nodes.push_back({NodeKind::Atom, a, -1, {}});
    }
    for (int a = 0; a < d.atom_count; ++a) {
        const int p = two_partner[static_cast<std::size_t>(a)];
        if (p >= 0) {
            if (p > a) { // partner becomes the complement node of a
                atom_node[static_cast<std::size_t>(p)] = static_cast<int>(l.nodes.size());
                l.nodes.push_back({NodeKind::Atom, p, -1, {}});
            }
            continue;
        }
        coatom_node[static_cast<std::size_t>(a)] = static_cast<int>(l.nodes.size());
        l.nodes.push_back({NodeKind::Coatom, a, -1, {}});
    }
    std::vector<std::vector<std::pair<std::vector<int>, int>>> middles(d.blocks.size());
    for (std::size_t e = 0; e < d.blocks.size(); ++e) {
        const auto& b = d.blocks[e];
        if (b.size() != 4) continue;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i + 1; j < 4; ++j) {
                middles[e].push_back({{b[i], b[j]}, static_cast<int>(l.nodes.size())});
                l.nodes.push_back({NodeKind::Middle, -1, static_cast<int>(e), {b[i], b[j]}});
            }
    }
    l.n = static_cast<int>(l.nodes.size());

    auto share_block = [&](int a, int b) {
        for (int e : at[static_cast<std::size_t>(a)])
            for (int x : d.blocks[static_cast<std::size_t>(e)])
                if (x == b) return true;
        return false;
    };

    l.leq.assign(static_cast<std::size_t>(l.n),
                 std::vector<char>(static_cast<std::size_t>(l.n), 0));
    auto set_leq = [&](int x, int y) { l.leq[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = 1; };
    for (int x = 0; x < l.n; ++x) {
        set_leq(x, x);
        set_leq(0, x);
        set_leq(x, 1);
    }
    for (int a = 0; a < d.atom_count; ++a) {
        for (int b = 0; b < d.atom_count; ++b) {
            if (a == b || coatom_node[static_cast<std::size_t>(b)] < 0) continue;
            if (share_block(a, b))
                set_leq(atom_node[static_cast<std::size_t>(a)],
                        coatom_node[static_cast<std::size_t>(b)]);
        }
    }
    for (std::size_t e = 0; e < d.blocks.size(); ++e)
        for (const auto& [subset, id] : middles[e]) {
            for (int a : subset) set_leq(atom_node[static_cast<std::size_t>(a)], id);
            for (int a : d.blocks[e])
                if (a != subset[0] && a != subset[1])
                    set_leq(id, coatom_node[static_cast<std::size_t>(a)]);
        }

    // transitive closure, then antisymmetry as a sanity check
    for (int k = 0; k < l.n; ++k)
        for (int x = 0; x < l.n; ++x) {
            if (!l.leq[static_cast<std::size_t>(x)][static_cast<std::size_t>(k)]) continue;
            const auto& row_k = l.leq[static_cast<std::size_t>(k)];
            auto& row_x = l.leq[static_cast<std::size_t>(x)];
            for (int y = 0; y < l.n; ++y)
                if (row_k[static_cast<std::size_t>(y)]) row_x[static_cast<std::size_t>(y)] = 1;
        }
    for (int x = 0; x < l.n; ++x)
        for (int y = x + 1; y < l.n; ++y)
            if (l.leq[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] &&
                l.leq[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)])
                throw paste_error("paste: order not antisymmetric between nodes " +
                                  std::to_string(x) + " and " + std::to_string(y));

    // orthocomplement
    l.ortho.assign(static_cast<std::size_t>(l.n), -1);
    l.ortho[0] = 1;
    l.ortho[1] = 0;
    for (int a = 0; a < d.atom_count; ++a) {
        const int p = two_partner[static_cast<std::size_t>(a)];
        const int an = atom_node[static_cast<std::size_t>(a)];
        l.ortho[static_cast<std::size_t>(an)] =
            p >= 0 ? atom_node[static_cast<std::size_t>(p)]
                   : coatom_node[static_cast<std::size_t>(a)];
        if (p < 0)
            l.ortho[static_cast<std::size_t>(coatom_node[static_cast<std::size_t>(a)])] = an;
    }
    for (std::size_t e = 0; e < d.blocks.size(); ++e)
        for (const auto& [subset, id] : middles[e]) {
            std::vector<int> rest;
            for (int a : d.blocks[e])
                if (a != subset[0] && a != subset[1]) rest.push_back(a);
            for (const auto& [other, oid] : middles[e])
                if (other == rest) {
                    l.ortho[static_cast<std::size_t>(id)] = oid;
                    break;
                }
        }

    // join and meet as unique least upper / greatest lower bounds
    auto bound_tables = [&](bool upper) {
        std::vector<std::vector<int>> table(static_cast<std::size_t>(l.n),
                                            std::vector<int>(static_cast<std::size_t>(l.n), -1));
        auto le = [&](int x, int y) {
            return l.leq[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] != 0;
        };
        for (int x = 0; x < l.n; ++x)
            for (int y = x; y < l.n; ++y) {
                int result;
                if (upper ? le(x, y) : le(y, x)) result = y;
                else if (upper ? le(y, x) : le(x, y)) result = x;
                else {
                    std::vector<int> bounds;
                    for (int z = 0; z < l.n; ++z) {
                        const bool in = upper ? (le(x, z) && le(y, z)) : (le(z, x) && le(z, y));
                        if (in) bounds.push_back(z);
                    }
                    int extreme = -1;
                    for (int z : bounds) {
                        bool dominated = false;
                        for (int w : bounds)
                            if (w != z && (upper ? le(w, z) : le(z, w))) {
                                dominated = true;
                                break;
                            }
                        if (dominated) continue;
                        if (extreme >= 0)
                            throw paste_error(std::string("paste: no unique ") +
                                              (upper ? "upper" : "lower") + " bound for nodes " +
                                              std::to_string(x) + " and " + std::to_string(y));
                        extreme = z;
                    }
                    if (extreme < 0)
                        throw paste_error(std::string("paste: no ") + (upper ? "upper" : "lower") +
                                          " bound for nodes " + std::to_string(x) + " and " +
                                          std::to_string(y));
                    result = extreme;
                }
                table[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = result;
                table[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] = result;
            }
        return table;
    };
    l.join = bound_tables(true);
    l.meet = bound_tables(false);

    l.names.reserve(static_cast<std::size_t>(l.n));
    for (int id = 0; id < l.n; ++id) l.names.push_back(detail::display_name(id));
    return l;
}

// Full axiom check: partial order, unique bounds, ortho laws and
// orthomodularity. Reports the first counterexample.
struct LatticeCheckReport {
    bool ok = true;
    std::string what;
};

inline LatticeCheckReport verify_lattice(const Lattice& l) {
    auto fail = [](std::string msg) { return LatticeCheckReport{false, std::move(msg)}; };
    auto le = [&](int x, int y) {
        return l.leq[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] != 0;
    };
    auto pair_text = [&](int x, int y) { return node_name(l, x) + "," + node_name(l, y); };

    for (int x = 0; x < l.n; ++x) {
        if (!le(x, x)) return fail("order not reflexive at " + node_name(l, x));
        if (!le(0, x) || !le(x, 1)) return fail("bounds violated at " + node_name(l, x));
    }
    for (int x = 0; x < l.n; ++x)
        for (int y = 0; y < l.n; ++y) {
            if (x != y && le(x, y) && le(y, x))
                return fail("order not antisymmetric at " + pair_text(x, y));
            for (int z = 0; z < l.n; ++z)
                if (le(x, y) && le(y, z) && !le(x, z))
                    return fail("order not transitive at " + pair_text(x, y) + "," + node_name(l, z));
        }
    for (int x = 0; x < l.n; ++x)
        for (int y = 0; y < l.n; ++y) {
            const int j = l.join[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
            const int m = l.meet[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
            if (!le(x, j) || !le(y, j)) return fail("join not an upper bound at " + pair_text(x, y));
            if (!le(m, x) || !le(m, y)) return fail("meet not a lower bound at " + pair_text(x, y));
            for (int z = 0; z < l.n; ++z) {
                if (le(x, z) && le(y, z) && !le(j, z))
                    return fail("join not least at " + pair_text(x, y) + " vs " + node_name(l, z));
                if (le(z, x) && le(z, y) && !le(z, m))
                    return fail("meet not greatest at " + pair_text(x, y) + " vs " + node_name(l, z));
            }
        }
    for (int x = 0; x < l.n; ++x) {
        const int xc = l.ortho[static_cast<std::size_t>(x)];
        if (xc < 0 || xc >= l.n) return fail("ortho out of range at " + node_name(l, x));
        if (l.ortho[static_cast<std::size_t>(xc)] != x)
            return fail("ortho not an involution at " + node_name(l, x));
        if (l.meet[static_cast<std::size_t>(x)][static_cast<std::size_t>(xc)] != 0)
            return fail("x meet x' != 0 at " + node_name(l, x));
        if (l.join[static_cast<std::size_t>(x)][static_cast<std::size_t>(xc)] != 1)
            return fail("x join x' != 1 at " + node_name(l, x));
        for (int y = 0; y < l.n; ++y)
            if (le(x, y) && !le(l.ortho[static_cast<std::size_t>(y)], xc))
                return fail("ortho not antitone at " + pair_text(x, y));
    }
    for (int x = 0; x < l.n; ++x)
        for (int y = 0; y < l.n; ++y) {
            if (!le(x, y)) continue;
            const int xc = l.ortho[static_cast<std::size_t>(x)];
            const int inner = l.meet[static_cast<std::size_t>(xc)][static_cast<std::size_t>(y)];
            if (l.join[static_cast<std::size_t>(x)][static_cast<std::size_t>(inner)] != y)
                return fail("orthomodularity fails at " + pair_text(x, y));
        }
    return {};
}

// Debug emitter: node names with kinds and the order relation.
inline std::string dump_lattice(const Lattice& l) {
    std::string out = "nodes " + std::to_string(l.n) + " (alpha " + std::to_string(l.alpha) +
                      ", beta " + std::to_string(l.beta) + ")\n";
    for (int x = 0; x < l.n; ++x) {
        out += node_name(l, x) + "' = " + node_name(l, l.ortho[static_cast<std::size_t>(x)]);
        out += "; above:";
        for (int y = 0; y < l.n; ++y)
            if (y != x && l.leq[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)])
                out += " " + node_name(l, y);
        out += '\n';
    }
    return out;
}

} // namespace greechie
