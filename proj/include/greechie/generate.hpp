#pragma once

// Isomorph-free exhaustive generation of connected Greechie-3-L
// diagrams by canonical construction paths: each diagram is accepted
// only when built from its canonical parent, so every isomorphism
// class is produced exactly once. Also contains a naive
// generate-and-dedupe oracle and a count-table builder.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "greechie/canon.hpp"
#include "greechie/diagram.hpp"

namespace greechie {

struct GenerationConfig {
    int beta = 1;
    std::optional<int> max_atoms;
    bool foot_free_only = false;
    std::optional<std::pair<int, int>> part; // (r, k): residue class of subtrees

    void check() const {
        if (beta < 1) throw std::invalid_argument("GenerationConfig: beta must be >= 1");
        if (part) {
            auto [r, k] = *part;
            if (k < 1 || r < 0 || r >= k)
                throw std::invalid_argument("GenerationConfig: part requires 0 <= r < k");
        }
    }
};

using DiagramVisitor = std::function<void(const Diagram&)>;

// The only irreducible diagram in the class is the single 3-atom block.
inline std::vector<Diagram> irreducible_seeds(const GenerationConfig& cfg) {
    cfg.check();
    if (cfg.max_atoms && *cfg.max_atoms < 3) return {};
    return {make_diagram(3, {{0, 1, 2}})};
}

namespace detail {

// True iff removing block e keeps the diagram connected (atoms that
// lay only in e disappear with it).
inline bool removable_keeps_connected(const Diagram& d, int e) {
    const int beta = static_cast<int>(d.blocks.size());
    if (beta <= 1) return false;
    std::vector<char> in_rest(static_cast<std::size_t>(d.atom_count), 0);
    for (int f = 0; f < beta; ++f) {
        if (f == e) continue;
        for (int a : d.blocks[static_cast<std::size_t>(f)]) in_rest[static_cast<std::size_t>(a)] = 1;
    }
    const auto at = blocks_of_atom(d);
    int start = -1;
    for (int a = 0; a < d.atom_count && start < 0; ++a)
        if (in_rest[static_cast<std::size_t>(a)]) start = a;
    if (start < 0) return false;
    std::vector<char> seen(static_cast<std::size_t>(d.atom_count), 0);
    std::vector<int> stack{start};
    seen[static_cast<std::size_t>(start)] = 1;
    while (!stack.empty()) {
        int a = stack.back();
        stack.pop_back();
        for (int f : at[static_cast<std::size_t>(a)]) {
            if (f == e) continue;
            for (int b : d.blocks[static_cast<std::size_t>(f)])
                if (!seen[static_cast<std::size_t>(b)]) {
                    seen[static_cast<std::size_t>(b)] = 1;
                    stack.push_back(b);
                }
        }
    }
    for (int a = 0; a < d.atom_count; ++a)
        if (in_rest[static_cast<std::size_t>(a)] && !seen[static_cast<std::size_t>(a)]) return false;
    return true;
}

// Orbits of blocks under the induced action of atom generators.
inline std::vector<std::vector<int>> block_orbits(const Diagram& d, const AutGroup& aut) {
    const int beta = static_cast<int>(d.blocks.size());
    std::map<std::vector<int>, int> index;
    for (int e = 0; e < beta; ++e) index.emplace(d.blocks[static_cast<std::size_t>(e)], e);
    UnionFind uf(beta);
    for (const auto& gen : aut.generators)
        for (int e = 0; e < beta; ++e) {
            std::vector<int> img;
            for (int a : d.blocks[static_cast<std::size_t>(e)])
                img.push_back(gen[static_cast<std::size_t>(a)]);
            std::sort(img.begin(), img.end());
            uf.unite(e, index.at(img));
        }
    std::map<int, std::vector<int>> by_root;
    for (int e = 0; e < beta; ++e) by_root[uf.find(e)].push_back(e);
    std::vector<std::vector<int>> out;
    for (auto& [root, members] : by_root) out.push_back(std::move(members));
    return out;
}

// Removability of every block at once: a connected diagram minus block
// f stays connected iff f is not a cut vertex of the block
// intersection graph (atoms lying only in f leave with it).
inline std::vector<char> removable_blocks(const Diagram& d) {
    const int beta = static_cast<int>(d.blocks.size());
    std::vector<char> removable(static_cast<std::size_t>(beta), 0);
    if (beta < 2) return removable;

    std::vector<std::vector<int>> adj(static_cast<std::size_t>(beta));
    for (int f = 0; f < beta; ++f)
        for (int g = f + 1; g < beta; ++g)
            if (!block_intersection(d.blocks[static_cast<std::size_t>(f)],
                                    d.blocks[static_cast<std::size_t>(g)])
                     .empty()) {
                adj[static_cast<std::size_t>(f)].push_back(g);
                adj[static_cast<std::size_t>(g)].push_back(f);
            }

    std::vector<int> tin(static_cast<std::size_t>(beta), -1), low(static_cast<std::size_t>(beta), 0);
    int timer = 0;
    std::function<void(int, int)> dfs = [&](int v, int parent) {
        tin[static_cast<std::size_t>(v)] = low[static_cast<std::size_t>(v)] = timer++;
        int children = 0;
        bool cut = false;
        for (int to : adj[static_cast<std::size_t>(v)]) {
            if (to == parent) continue;
            if (tin[static_cast<std::size_t>(to)] >= 0) {
                low[static_cast<std::size_t>(v)] =
                    std::min(low[static_cast<std::size_t>(v)], tin[static_cast<std::size_t>(to)]);
            } else {
                dfs(to, v);
                low[static_cast<std::size_t>(v)] =
                    std::min(low[static_cast<std::size_t>(v)], low[static_cast<std::size_t>(to)]);
                if (low[static_cast<std::size_t>(to)] >= tin[static_cast<std::size_t>(v)] &&
                    parent >= 0)
                    cut = true;
                ++children;
            }
        }
        if (parent < 0 && children > 1) cut = true;
        removable[static_cast<std::size_t>(v)] = cut ? 0 : 1;
    };
    dfs(0, -1);
    return removable;
}

// m(D): the Aut(D)-orbit of the removable block with the least
// canonical label. Removability and labels are constant on orbits in
// the ways that matter, so one representative decides each orbit.
inline std::vector<int> m_orbit_from(const Diagram& d, const CanonicalForm& cf, const AutGroup& aut,
                                     const std::vector<char>& removable) {
    const auto orbits = block_orbits(d, aut);
    int best_label = -1;
    const std::vector<int>* best = nullptr;
    for (const auto& orbit : orbits) {
        if (!removable[static_cast<std::size_t>(orbit.front())]) continue;
        int lo = cf.block_relabel[static_cast<std::size_t>(orbit.front())];
        for (int e : orbit) lo = std::min(lo, cf.block_relabel[static_cast<std::size_t>(e)]);
        if (!best || lo < best_label) {
            best_label = lo;
            best = &orbit;
        }
    }
    if (!best) throw std::logic_error("m_orbit: no removable block (diagram not reducible)");
    return *best;
}

inline std::vector<int> m_orbit_from(const Diagram& d, const CanonicalForm& cf, const AutGroup& aut) {
    return m_orbit_from(d, cf, aut, removable_blocks(d));
}

// Fast necessary test of "last block in m(D)" from the root equitable
// partition alone. Canonical atom positions always fall inside their
// root cell ranges, so ordering blocks by the sorted root cells of
// their atoms is a prefix of the canonical block order; signatures are
// also constant on Aut orbits. Hence: a removable block with a smaller
// signature than the last block's rules it out, and a strictly unique
// minimum accepts it without a full canonical labelling.
enum class MVerdict { Reject, AcceptUnique, Ambiguous };

struct MPrescreen {
    CanonScratch scratch;
    Partition partition;
    std::vector<std::uint64_t> sigs;

    MVerdict run(const Diagram& d, const std::vector<char>& removable) {
        const auto g = incidence_graph(d);
        CanonSearch::root_refined_partition(g, partition, scratch);

        const int beta = static_cast<int>(d.blocks.size());
        sigs.clear();
        for (int e = 0; e < beta; ++e) {
            const auto& b = d.blocks[static_cast<std::size_t>(e)];
            std::uint64_t cell[8];
            int k = 0;
            for (int a : b)
                cell[k++] = static_cast<std::uint64_t>(
                    partition.cell_of[static_cast<std::size_t>(a)]);
            std::sort(cell, cell + k);
            std::uint64_t sig = static_cast<std::uint64_t>(b.size());
            for (int i = 0; i < k; ++i) sig = sig << 16 | cell[i];
            sigs.push_back(sig);
        }

        const int last = beta - 1;
        std::uint64_t min_other = ~std::uint64_t{0};
        for (int e = 0; e < last; ++e)
            if (removable[static_cast<std::size_t>(e)])
                min_other = std::min(min_other, sigs[static_cast<std::size_t>(e)]);
        if (sigs[static_cast<std::size_t>(last)] > min_other) return MVerdict::Reject;
        if (sigs[static_cast<std::size_t>(last)] < min_other) return MVerdict::AcceptUnique;
        return MVerdict::Ambiguous;
    }
};

// Valid ways to pick the existing atoms of a new 3-atom block. A pair
// of existing atoms is usable iff the atoms share no block and closing
// the new block through them creates no loop of order <= 4; a triple
// is usable iff all three pairs are. Only loops through the new block
// can appear, and each uses exactly two of its existing atoms, so the
// pair tests decide validity completely. A bad pair (u,v) is witnessed
// by a chain of one to three blocks from u to v with pairwise distinct
// link atoms, so bad pairs are found by a depth-3 walk from each atom.
struct ExtensionContext {
    const Diagram& d;
    std::vector<std::vector<int>> at; // blocks per atom
    int alpha;
    std::vector<char> pair_bad; // flat alpha x alpha

    explicit ExtensionContext(const Diagram& dia)
        : d(dia), at(blocks_of_atom(dia)), alpha(dia.atom_count),
          pair_bad(static_cast<std::size_t>(alpha) * static_cast<std::size_t>(alpha), 0) {
        for (int u = 0; u < alpha; ++u) mark_bad_from(u);
    }

    bool ok(int u, int v) const {
        return pair_bad[static_cast<std::size_t>(u) * static_cast<std::size_t>(alpha) +
                        static_cast<std::size_t>(v)] == 0;
    }

    void mark(int u, int v) {
        pair_bad[static_cast<std::size_t>(u) * static_cast<std::size_t>(alpha) +
                 static_cast<std::size_t>(v)] = 1;
        pair_bad[static_cast<std::size_t>(v) * static_cast<std::size_t>(alpha) +
                 static_cast<std::size_t>(u)] = 1;
    }

    void mark_bad_from(int u) {
        for (int b1 : at[static_cast<std::size_t>(u)]) {
            for (int v : d.blocks[static_cast<std::size_t>(b1)])
                if (v != u) mark(u, v); // shared block
            for (int w1 : d.blocks[static_cast<std::size_t>(b1)]) {
                if (w1 == u) continue;
                for (int b2 : at[static_cast<std::size_t>(w1)]) {
                    if (b2 == b1) continue;
                    for (int v : d.blocks[static_cast<std::size_t>(b2)])
                        if (v != u && v != w1) mark(u, v); // order-3 loop
                    for (int w2 : d.blocks[static_cast<std::size_t>(b2)]) {
                        if (w2 == u || w2 == w1) continue;
                        for (int b3 : at[static_cast<std::size_t>(w2)]) {
                            if (b3 == b1 || b3 == b2) continue;
                            for (int v : d.blocks[static_cast<std::size_t>(b3)])
                                if (v != u && v != w1 && v != w2) mark(u, v); // order-4 loop
                        }
                    }
                }
            }
        }
    }

    // All valid subsets in lexicographic order by size then content.
    std::vector<std::vector<int>> valid_subsets(const GenerationConfig& cfg) const {
        std::vector<std::vector<int>> subsets;
        auto cap_ok = [&](int used) {
            return !cfg.max_atoms || alpha + (3 - used) <= *cfg.max_atoms;
        };
        if (cap_ok(1))
            for (int a = 0; a < alpha; ++a) subsets.push_back({a});
        if (cap_ok(2))
            for (int a = 0; a < alpha; ++a)
                for (int b = a + 1; b < alpha; ++b)
                    if (ok(a, b)) subsets.push_back({a, b});
        if (cap_ok(3))
            for (int a = 0; a < alpha; ++a)
                for (int b = a + 1; b < alpha; ++b) {
                    if (!ok(a, b)) continue;
                    for (int c = b + 1; c < alpha; ++c)
                        if (ok(a, c) && ok(b, c)) subsets.push_back({a, b, c});
                }
        return subsets;
    }
};

inline Diagram extend(const Diagram& d, const std::vector<int>& subset) {
    Diagram out = d;
    std::vector<int> block = subset;
    for (int fresh = 0; fresh < 3 - static_cast<int>(subset.size()); ++fresh)
        block.push_back(out.atom_count++);
    out.blocks.push_back(std::move(block));
    return out;
}

} // namespace detail

// One representative extension D+e per Aut(D)-equivalence class of
// valid extensions; e uses 1..3 existing atoms plus fresh atoms.
inline std::vector<Diagram> extensions(const Diagram& d, const GenerationConfig& cfg,
                                       const AutGroup& aut) {
    const detail::ExtensionContext ctx(d);
    std::vector<Diagram> out;
    for (const auto& subset : subset_orbit_reps(aut, ctx.valid_subsets(cfg)))
        out.push_back(detail::extend(d, subset));
    return out;
}

inline std::vector<Diagram> extensions(const Diagram& d, const GenerationConfig& cfg) {
    return extensions(d, cfg, canonicalize(d).second);
}

// m(D): indices of the removable-block orbit with least canonical label.
inline std::vector<int> m_orbit(const Diagram& d) {
    if (d.blocks.size() < 2) throw std::invalid_argument("m_orbit: diagram must have >= 2 blocks");
    auto [cf, aut] = canonicalize(d);
    return detail::m_orbit_from(d, cf, aut);
}

namespace detail {

struct ScanState {
    const GenerationConfig& cfg;
    const DiagramVisitor& visitor;
    int split_depth;
    std::uint64_t part_counter = 0;
    MPrescreen prescreen;

    bool part_admits() {
        if (!cfg.part) return true;
        auto [r, k] = *cfg.part;
        return static_cast<int>(part_counter++ % static_cast<std::uint64_t>(k)) == r;
    }

    void scan(const Diagram& d, const AutGroup& aut) {
        const int beta = static_cast<int>(d.blocks.size());
        if (beta == cfg.beta) {
            visitor(d);
            return;
        }
        const bool last_level = beta + 1 == cfg.beta;
        const ExtensionContext ctx(d);
        Diagram work = d; // candidate block pushed and popped in place
        for (const auto& subset : subset_orbit_reps(aut, ctx.valid_subsets(cfg))) {
            const int old_alpha = work.atom_count;
            std::vector<int> block = subset;
            while (block.size() < 3) block.push_back(work.atom_count++);
            work.blocks.push_back(std::move(block));

            const auto removable = removable_blocks(work);
            MVerdict verdict = prescreen.run(work, removable);
            if (verdict == MVerdict::Ambiguous || (verdict == MVerdict::AcceptUnique && !last_level)) {
                // the full labelling decides ties and supplies Aut for
                // the recursion
                auto [cf, ext_aut] = canonicalize(work);
                bool accepted = true;
                if (verdict == MVerdict::Ambiguous) {
                    const auto m = m_orbit_from(work, cf, ext_aut, removable);
                    accepted = std::find(m.begin(), m.end(), beta) != m.end();
                }
                if (accepted &&
                    (static_cast<int>(work.blocks.size()) != split_depth || part_admits())) {
                    if (last_level) {
                        visitor(work);
                    } else {
                        const Diagram child = work;
                        scan(child, ext_aut);
                    }
                }
            } else if (verdict == MVerdict::AcceptUnique) {
                // last level: emit without the labelling
                if (static_cast<int>(work.blocks.size()) != split_depth || part_admits())
                    visitor(work);
            }
            work.blocks.pop_back();
            work.atom_count = old_alpha;
        }
    }
};

} // namespace detail

// Depth-first recursion of the generation procedure: emit d when it
// has cfg.beta blocks, otherwise recurse into each extension class
// whose new block lies in m of the extended diagram.
inline void scan(const Diagram& d, const GenerationConfig& cfg, const DiagramVisitor& visitor) {
    cfg.check();
    detail::ScanState st{cfg, visitor, std::min(3, cfg.beta)};
    st.scan(d, canonicalize(d).second);
}

// Streams one representative of each isomorphism class of connected
// Greechie-3-L diagram with cfg.beta blocks. foot_free_only filters
// the output; part (r, k) selects a residue class of subtrees at the
// split depth so that the k parts partition the full output.
inline void generate(const GenerationConfig& cfg, const DiagramVisitor& visitor) {
    cfg.check();
    DiagramVisitor emit = visitor;
    if (cfg.foot_free_only)
        emit = [&visitor](const Diagram& d) {
            if (feet(d).empty()) visitor(d);
        };
    detail::ScanState st{cfg, emit, std::min(3, cfg.beta)};
    for (const auto& seed : irreducible_seeds(cfg)) {
        if (static_cast<int>(seed.blocks.size()) == st.split_depth && !st.part_admits()) continue;
        st.scan(seed, canonicalize(seed).second);
    }
}

inline std::vector<Diagram> generate(const GenerationConfig& cfg) {
    std::vector<Diagram> out;
    generate(cfg, [&](const Diagram& d) { out.push_back(d); });
    return out;
}

// Ground-truth oracle: all connected Greechie-3-L diagrams with beta
// blocks by unrestricted block addition, deduplicated by canonical
// form. Exponential; refuses beta > 6.
inline std::vector<Diagram> naive_generate(int beta, std::optional<int> max_atoms = std::nullopt) {
    if (beta < 1) throw std::invalid_argument("naive_generate: beta must be >= 1");
    if (beta > 6) throw std::invalid_argument("naive_generate: beta > 6 is infeasible");
    GenerationConfig cfg;
    cfg.beta = beta;
    cfg.max_atoms = max_atoms;
    if (max_atoms && *max_atoms < 3) return {};

    std::map<std::vector<std::uint8_t>, Diagram> level;
    const Diagram seed = make_diagram(3, {{0, 1, 2}});
    level.emplace(canonicalize(seed).first.bytes, seed);
    for (int b = 2; b <= beta; ++b) {
        std::map<std::vector<std::uint8_t>, Diagram> next;
        for (const auto& [bytes, d] : level) {
            const detail::ExtensionContext ctx(d);
            for (const auto& subset : ctx.valid_subsets(cfg)) {
                Diagram ext = detail::extend(d, subset);
                auto key = canonicalize(ext).first.bytes;
                next.emplace(std::move(key), std::move(ext));
            }
        }
        level = std::move(next);
    }
    std::vector<Diagram> out;
    out.reserve(level.size());
    for (auto& [bytes, d] : level) out.push_back(std::move(d));
    return out;
}

// Counts of connected Greechie-3-L diagrams per (alpha, beta) cell:
// total and foot-free.
struct CountTable {
    std::map<std::pair<int, int>, std::pair<std::int64_t, std::int64_t>> cells;

    std::pair<std::int64_t, std::int64_t> cell(int alpha, int beta) const {
        auto it = cells.find({alpha, beta});
        return it == cells.end() ? std::pair<std::int64_t, std::int64_t>{0, 0} : it->second;
    }
    std::pair<std::int64_t, std::int64_t> beta_total(int beta) const {
        std::pair<std::int64_t, std::int64_t> t{0, 0};
        for (const auto& [key, val] : cells)
            if (key.second == beta) {
                t.first += val.first;
                t.second += val.second;
            }
        return t;
    }
};

inline CountTable count_table(int max_beta, GenerationConfig defaults = {}) {
    CountTable table;
    for (int beta = 1; beta <= max_beta; ++beta) {
        GenerationConfig cfg = defaults;
        cfg.beta = beta;
        cfg.foot_free_only = false;
        generate(cfg, [&](const Diagram& d) {
            auto& cell = table.cells[{d.atom_count, beta}];
            ++cell.first;
            if (feet(d).empty()) ++cell.second;
        });
    }
    return table;
}

} // namespace greechie
