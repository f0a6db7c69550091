#pragma once

// Core combinatorial types for Greechie diagrams: validity checking,
// loop detection, connectivity, feet, text serialization and a
// brute-force isomorphism test for small diagrams.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace greechie {

// A diagram is a set of atoms 0..atom_count-1 together with a list of
// blocks, each a strictly increasing list of atom indices. Blocks are
// pairwise distinct as sets. Values are immutable by convention: every
// operation below is a pure function.
struct Diagram {
    int atom_count = 0;
    std::vector<std::vector<int>> blocks;

    bool operator==(const Diagram&) const = default;
};

// Builds a diagram from possibly unsorted blocks, enforcing the type
// invariants. Throws std::invalid_argument on violation.
inline Diagram make_diagram(int atom_count, std::vector<std::vector<int>> blocks) {
    if (atom_count < 0)
        throw std::invalid_argument("make_diagram: negative atom count");
    for (auto& b : blocks) {
        if (b.empty())
            throw std::invalid_argument("make_diagram: empty block");
        std::sort(b.begin(), b.end());
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (b[i] < 0 || b[i] >= atom_count)
                throw std::invalid_argument("make_diagram: atom index out of range");
            if (i > 0 && b[i] == b[i - 1])
                throw std::invalid_argument("make_diagram: repeated atom within block");
        }
    }
    auto sorted = blocks;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("make_diagram: duplicate block");
    return Diagram{atom_count, std::move(blocks)};
}

// Number of blocks containing each atom.
inline std::vector<int> atom_ranks(const Diagram& d) {
    std::vector<int> rank(static_cast<std::size_t>(d.atom_count), 0);
    for (const auto& b : d.blocks)
        for (int a : b) ++rank[static_cast<std::size_t>(a)];
    return rank;
}

inline std::vector<std::vector<int>> blocks_of_atom(const Diagram& d) {
    std::vector<std::vector<int>> at(static_cast<std::size_t>(d.atom_count));
    for (std::size_t e = 0; e < d.blocks.size(); ++e)
        for (int a : d.blocks[e]) at[static_cast<std::size_t>(a)].push_back(static_cast<int>(e));
    return at;
}

inline std::vector<int> block_intersection(const std::vector<int>& b1, const std::vector<int>& b2) {
    std::vector<int> out;
    std::set_intersection(b1.begin(), b1.end(), b2.begin(), b2.end(), std::back_inserter(out));
    return out;
}

namespace detail {

// Depth-first search for the shortest loop. A loop of order n is a
// cyclic sequence of n distinct blocks e_1..e_n with distinct atoms
// nu_i in e_i n e_{i+1} (indices cyclic). Requires pairwise block
// intersections of at most one atom, so loops have order >= 3.
//
// When through_block >= 0 the search only considers loops containing
// that block; otherwise all loops, using the smallest block index of
// the loop as the start to avoid rescanning.
inline std::optional<int> shortest_loop(const Diagram& d, int cap, int through_block) {
    const int beta = static_cast<int>(d.blocks.size());
    if (beta < 3 || cap < 3) return std::nullopt;
    const auto at = blocks_of_atom(d);

    std::vector<char> used_block(static_cast<std::size_t>(beta), 0);
    std::vector<char> used_atom(static_cast<std::size_t>(d.atom_count), 0);
    int best = cap + 1;

    // path holds (block, atom linking it to the previous block)
    std::function<void(int, int, int)> dfs = [&](int start, int cur, int depth) {
        // try to close the loop back to start
        if (depth >= 3) {
            for (int a : block_intersection(d.blocks[static_cast<std::size_t>(cur)],
                                            d.blocks[static_cast<std::size_t>(start)])) {
                if (!used_atom[static_cast<std::size_t>(a)]) {
                    best = std::min(best, depth);
                    break;
                }
            }
        }
        if (depth + 1 >= best) return;
        for (int a : d.blocks[static_cast<std::size_t>(cur)]) {
            if (used_atom[static_cast<std::size_t>(a)]) continue;
            for (int nb : at[static_cast<std::size_t>(a)]) {
                if (used_block[static_cast<std::size_t>(nb)]) continue;
                if (through_block < 0 && nb < start) continue;
                used_block[static_cast<std::size_t>(nb)] = 1;
                used_atom[static_cast<std::size_t>(a)] = 1;
                dfs(start, nb, depth + 1);
                used_block[static_cast<std::size_t>(nb)] = 0;
                used_atom[static_cast<std::size_t>(a)] = 0;
            }
        }
    };

    const int lo = through_block >= 0 ? through_block : 0;
    const int hi = through_block >= 0 ? through_block + 1 : beta;
    for (int s = lo; s < hi; ++s) {
        used_block[static_cast<std::size_t>(s)] = 1;
        dfs(s, s, 1);
        used_block[static_cast<std::size_t>(s)] = 0;
        if (best == 3) break;
    }
    if (best <= cap) return best;
    return std::nullopt;
}

} // namespace detail

// Least n <= cap such that an order-n loop exists, or nullopt.
// Precondition: pairwise block intersections contain at most one atom
// (Greechie condition (4)); otherwise loop order is ill-posed here.
inline std::optional<int> smallest_loop_order(const Diagram& d, int cap) {
    for (std::size_t i = 0; i < d.blocks.size(); ++i)
        for (std::size_t j = i + 1; j < d.blocks.size(); ++j)
            if (block_intersection(d.blocks[i], d.blocks[j]).size() > 1)
                throw std::invalid_argument(
                    "smallest_loop_order: blocks " + std::to_string(i) + " and " +
                    std::to_string(j) + " share more than one atom");
    return detail::shortest_loop(d, cap, -1);
}

// True iff every pair of atoms is linked by a chain of intersecting
// blocks. Diagrams with at most one atom are connected by convention.
inline bool is_connected(const Diagram& d) {
    if (d.atom_count <= 1) return true;
    std::vector<int> comp(static_cast<std::size_t>(d.atom_count), -1);
    std::vector<int> stack{0};
    comp[0] = 0;
    const auto at = blocks_of_atom(d);
    while (!stack.empty()) {
        int a = stack.back();
        stack.pop_back();
        for (int e : at[static_cast<std::size_t>(a)])
            for (int b : d.blocks[static_cast<std::size_t>(e)])
                if (comp[static_cast<std::size_t>(b)] < 0) {
                    comp[static_cast<std::size_t>(b)] = 0;
                    stack.push_back(b);
                }
    }
    return std::find(comp.begin(), comp.end(), -1) == comp.end();
}

// Indices of feet: blocks with exactly one atom that also lies in
// other blocks. An isolated block is not a foot.
inline std::vector<int> feet(const Diagram& d) {
    const auto rank = atom_ranks(d);
    std::vector<int> out;
    for (std::size_t e = 0; e < d.blocks.size(); ++e) {
        int shared = 0;
        for (int a : d.blocks[e])
            if (rank[static_cast<std::size_t>(a)] >= 2) ++shared;
        if (shared == 1) out.push_back(static_cast<int>(e));
    }
    return out;
}

struct DiagramStats {
    int alpha = 0;
    int beta = 0;
    std::map<int, int> rank_histogram;
    bool connected = false;
    std::vector<int> feet;
};

inline DiagramStats stats(const Diagram& d) {
    DiagramStats s;
    s.alpha = d.atom_count;
    s.beta = static_cast<int>(d.blocks.size());
    for (int r : atom_ranks(d)) ++s.rank_histogram[r];
    s.connected = is_connected(d);
    s.feet = feet(d);
    return s;
}

// Per-condition result of checking Def. 2 plus the lattice condition.
struct ConditionResult {
    bool pass = true;
    std::string witness; // identifies offending atoms/blocks when failing
};

struct ValidityReport {
    ConditionResult atom_in_block;      // (1) every atom lies in a block
    ConditionResult min_block_size;     // (2) blocks >= 2-element when alpha >= 2
    ConditionResult isolated_two_blocks; // (3) blocks meeting others are >= 3-element
    ConditionResult single_intersection; // (4) pairwise intersections <= 1 atom
    ConditionResult no_loop_3;          // (5)
    ConditionResult no_loop_4;          // lattice condition (Theorem 1)
    bool lattice_checked = false;

    bool greechie_ok() const {
        return atom_in_block.pass && min_block_size.pass && isolated_two_blocks.pass &&
               single_intersection.pass && no_loop_3.pass;
    }
    bool ok() const { return greechie_ok() && (!lattice_checked || no_loop_4.pass); }
};

// Checks the five Greechie-diagram conditions; with require_lattice
// also the absence of order-4 loops. Violations are reported as data,
// never thrown. Loop conditions are only decidable once condition (4)
// holds; if it fails they are marked failed with a forwarding witness.
inline ValidityReport validate(const Diagram& d, bool require_lattice) {
    ValidityReport r;
    r.lattice_checked = require_lattice;

    const auto rank = atom_ranks(d);
    for (int a = 0; a < d.atom_count; ++a)
        if (rank[static_cast<std::size_t>(a)] == 0) {
            r.atom_in_block = {false, "atom " + std::to_string(a) + " lies in no block"};
            break;
        }

    if (d.atom_count >= 2) {
        for (std::size_t e = 0; e < d.blocks.size(); ++e)
            if (d.blocks[e].size() < 2) {
                r.min_block_size = {false, "block " + std::to_string(e) + " has fewer than 2 atoms"};
                break;
            }
    }

    for (std::size_t e = 0; e < d.blocks.size() && r.isolated_two_blocks.pass; ++e) {
        if (d.blocks[e].size() >= 3) continue;
        for (int a : d.blocks[e])
            if (rank[static_cast<std::size_t>(a)] >= 2) {
                r.isolated_two_blocks = {false, "block " + std::to_string(e) +
                                                    " has fewer than 3 atoms but shares atom " +
                                                    std::to_string(a)};
                break;
            }
    }

    for (std::size_t i = 0; i < d.blocks.size() && r.single_intersection.pass; ++i)
        for (std::size_t j = i + 1; j < d.blocks.size(); ++j)
            if (block_intersection(d.blocks[i], d.blocks[j]).size() > 1) {
                r.single_intersection = {false, "blocks " + std::to_string(i) + " and " +
                                                    std::to_string(j) + " share more than one atom"};
                break;
            }

    if (r.single_intersection.pass) {
        const int cap = require_lattice ? 4 : 3;
        if (auto n = detail::shortest_loop(d, cap, -1)) {
            if (*n == 3) r.no_loop_3 = {false, "loop of order 3 present"};
            else if (*n == 4) r.no_loop_4 = {false, "loop of order 4 present"};
        }
    } else {
        r.no_loop_3 = {false, "not evaluated: condition (4) violated"};
        r.no_loop_4 = {false, "not evaluated: condition (4) violated"};
    }
    return r;
}

// ---------------------------------------------------------------------------
// Text format: one diagram per line, blocks of atom characters joined
// by commas and terminated by a period, e.g. "123,345.". The atom
// alphabet is 1-9, A-Z, a-z (61 symbols); parsing numbers atoms by
// first appearance.

inline constexpr std::string_view atom_alphabet =
    "123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";

struct parse_error : std::runtime_error {
    std::size_t position; // 0-based offset into the offending line
    parse_error(const std::string& what, std::size_t pos)
        : std::runtime_error(what + " (at column " + std::to_string(pos + 1) + ")"),
          position(pos) {}
};

inline Diagram parse_diagram(std::string_view line) {
    std::map<char, int> number;
    std::vector<std::vector<int>> blocks;
    std::vector<int> cur;
    bool terminated = false;

    auto end_block = [&](std::size_t pos) {
        if (cur.empty()) throw parse_error("empty block", pos);
        std::sort(cur.begin(), cur.end());
        blocks.push_back(cur);
        cur.clear();
    };

    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (c == ' ' || c == '\t' || c == '\r') continue;
        if (terminated) throw parse_error("unexpected character after terminator", i);
        if (c == ',') {
            end_block(i);
        } else if (c == '.') {
            end_block(i);
            terminated = true;
        } else if (atom_alphabet.find(c) != std::string_view::npos) {
            auto [it, fresh] = number.emplace(c, static_cast<int>(number.size()));
            int idx = it->second;
            if (!fresh && std::find(cur.begin(), cur.end(), idx) != cur.end())
                throw parse_error(std::string("atom '") + c + "' repeated within block", i);
            cur.push_back(idx);
        } else {
            throw parse_error(std::string("unknown character '") + c + "'", i);
        }
    }
    if (!terminated) throw parse_error("missing '.' terminator", line.size());
    return make_diagram(static_cast<int>(number.size()), std::move(blocks));
}

inline std::string format_diagram(const Diagram& d) {
    if (d.atom_count > static_cast<int>(atom_alphabet.size()))
        throw std::invalid_argument("format_diagram: more than 61 atoms");
    std::string out;
    for (std::size_t e = 0; e < d.blocks.size(); ++e) {
        if (e) out += ',';
        for (int a : d.blocks[e]) out += atom_alphabet[static_cast<std::size_t>(a)];
    }
    out += '.';
    return out;
}

// ---------------------------------------------------------------------------
// Brute-force isomorphism for small diagrams (intended for beta <= ~8).

namespace detail {

struct IsoEngine {
    const Diagram& d1;
    const Diagram& d2;
    std::vector<int> rank1, rank2;
    std::vector<std::vector<int>> at1; // blocks per atom of d1
    std::vector<int> order;            // d1 atoms grouped block by block
    std::vector<int> map;              // d1 atom -> d2 atom, -1 if unset
    std::vector<char> used;
    std::vector<std::vector<int>> sorted2; // d2 blocks (already sorted)
    const std::function<bool(const std::vector<int>&)>& emit;
    bool stopped = false;

    IsoEngine(const Diagram& a, const Diagram& b,
              const std::function<bool(const std::vector<int>&)>& fn)
        : d1(a), d2(b), rank1(atom_ranks(a)), rank2(atom_ranks(b)), at1(blocks_of_atom(a)),
          map(static_cast<std::size_t>(a.atom_count), -1),
          used(static_cast<std::size_t>(b.atom_count), 0), sorted2(b.blocks), emit(fn) {
        std::sort(sorted2.begin(), sorted2.end());
        std::vector<char> seen(static_cast<std::size_t>(a.atom_count), 0);
        for (const auto& blk : a.blocks)
            for (int x : blk)
                if (!seen[static_cast<std::size_t>(x)]) {
                    seen[static_cast<std::size_t>(x)] = 1;
                    order.push_back(x);
                }
        for (int x = 0; x < a.atom_count; ++x)
            if (!seen[static_cast<std::size_t>(x)]) order.push_back(x);
    }

    // Every fully mapped d1 block must land on a d2 block.
    bool consistent(int a) {
        for (int e : at1[static_cast<std::size_t>(a)]) {
            std::vector<int> img;
            bool full = true;
            for (int x : d1.blocks[static_cast<std::size_t>(e)]) {
                if (map[static_cast<std::size_t>(x)] < 0) { full = false; break; }
                img.push_back(map[static_cast<std::size_t>(x)]);
            }
            if (!full) continue;
            std::sort(img.begin(), img.end());
            if (!std::binary_search(sorted2.begin(), sorted2.end(), img)) return false;
        }
        return true;
    }

    void run(std::size_t k) {
        if (stopped) return;
        if (k == order.size()) {
            if (!emit(map)) stopped = true;
            return;
        }
        const int a = order[k];
        for (int b = 0; b < d2.atom_count && !stopped; ++b) {
            if (used[static_cast<std::size_t>(b)]) continue;
            if (rank1[static_cast<std::size_t>(a)] != rank2[static_cast<std::size_t>(b)]) continue;
            map[static_cast<std::size_t>(a)] = b;
            used[static_cast<std::size_t>(b)] = 1;
            if (consistent(a)) run(k + 1);
            map[static_cast<std::size_t>(a)] = -1;
            used[static_cast<std::size_t>(b)] = 0;
        }
    }
};

} // namespace detail

// Calls fn for every atom bijection d1 -> d2 mapping blocks onto
// blocks; fn returns false to stop the enumeration.
inline void enumerate_isomorphisms(const Diagram& d1, const Diagram& d2,
                                   const std::function<bool(const std::vector<int>&)>& fn) {
    if (d1.atom_count != d2.atom_count || d1.blocks.size() != d2.blocks.size()) return;
    auto sizes = [](const Diagram& d) {
        std::vector<int> s;
        for (const auto& b : d.blocks) s.push_back(static_cast<int>(b.size()));
        std::sort(s.begin(), s.end());
        return s;
    };
    if (sizes(d1) != sizes(d2)) return;
    auto hist = [](std::vector<int> r) { std::sort(r.begin(), r.end()); return r; };
    if (hist(atom_ranks(d1)) != hist(atom_ranks(d2))) return;
    detail::IsoEngine eng(d1, d2, fn);
    eng.run(0);
}

inline bool are_isomorphic(const Diagram& d1, const Diagram& d2) {
    bool found = false;
    enumerate_isomorphisms(d1, d2, [&](const std::vector<int>&) {
        found = true;
        return false;
    });
    return found;
}

// Applies an atom relabeling: atom a of d becomes perm[a].
inline Diagram relabel_atoms(const Diagram& d, const std::vector<int>& perm) {
    std::vector<std::vector<int>> blocks;
    blocks.reserve(d.blocks.size());
    for (const auto& b : d.blocks) {
        std::vector<int> nb;
        nb.reserve(b.size());
        for (int a : b) nb.push_back(perm[static_cast<std::size_t>(a)]);
        std::sort(nb.begin(), nb.end());
        blocks.push_back(std::move(nb));
    }
    return Diagram{d.atom_count, std::move(blocks)};
}

// Reads diagram lines from text: '#' comment lines and blank lines are
// skipped. Returns (1-based line number, raw line) pairs.
inline std::vector<std::pair<int, std::string>> diagram_lines(std::string_view text) {
    std::vector<std::pair<int, std::string>> out;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        std::string_view raw = text.substr(start, end == std::string_view::npos ? std::string_view::npos
                                                                                : end - start);
        ++line_no;
        std::string_view trimmed = raw;
        while (!trimmed.empty() && (trimmed.front() == ' ' || trimmed.front() == '\t'))
            trimmed.remove_prefix(1);
        while (!trimmed.empty() &&
               (trimmed.back() == ' ' || trimmed.back() == '\t' || trimmed.back() == '\r'))
            trimmed.remove_suffix(1);
        if (!trimmed.empty() && trimmed.front() != '#')
            out.emplace_back(line_no, std::string(trimmed));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return out;
}

} // namespace greechie
