#pragma once

// Canonical labelling and automorphism groups of diagrams via their
// colored incidence graphs: equitable partition refinement with
// individualization-and-refinement backtracking. The canonical form is
// the lexicographically least serialization of the relabeled diagram
// over all leaves of the (pruned) search tree; automorphisms are
// harvested from leaves with equal certificates.

#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "greechie/diagram.hpp"

namespace greechie {

// Bipartite incidence graph of a diagram: vertices are atoms followed
// by blocks, an atom adjacent to every block containing it. Stored in
// compressed row form.
struct IncidenceGraph {
    int atom_count = 0;
    int block_count = 0;
    std::vector<int> offset; // size vertex_count()+1
    std::vector<int> edges;

    int vertex_count() const { return atom_count + block_count; }
    const int* begin_of(int v) const { return edges.data() + offset[static_cast<std::size_t>(v)]; }
    const int* end_of(int v) const { return edges.data() + offset[static_cast<std::size_t>(v) + 1]; }
    int degree(int v) const {
        return offset[static_cast<std::size_t>(v) + 1] - offset[static_cast<std::size_t>(v)];
    }
};

inline IncidenceGraph incidence_graph(const Diagram& d) {
    IncidenceGraph g;
    g.atom_count = d.atom_count;
    g.block_count = static_cast<int>(d.blocks.size());
    const int n = g.vertex_count();
    g.offset.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int e = 0; e < g.block_count; ++e)
        for (int a : d.blocks[static_cast<std::size_t>(e)]) {
            ++g.offset[static_cast<std::size_t>(a) + 1];
            ++g.offset[static_cast<std::size_t>(g.atom_count + e) + 1];
        }
    for (int v = 0; v < n; ++v)
        g.offset[static_cast<std::size_t>(v) + 1] += g.offset[static_cast<std::size_t>(v)];
    g.edges.resize(static_cast<std::size_t>(g.offset.back()));
    std::vector<int> fill(g.offset.begin(), g.offset.end() - 1);
    for (int e = 0; e < g.block_count; ++e) {
        const int ev = g.atom_count + e;
        for (int a : d.blocks[static_cast<std::size_t>(e)]) {
            g.edges[static_cast<std::size_t>(fill[static_cast<std::size_t>(a)]++)] = ev;
            g.edges[static_cast<std::size_t>(fill[static_cast<std::size_t>(ev)]++)] = a;
        }
    }
    return g;
}

// Byte sequence identifying the isomorphism class, plus the canonical
// relabelings that produce it.
struct CanonicalForm {
    std::vector<std::uint8_t> bytes;
    std::vector<int> atom_relabel;  // atom a of the input -> canonical atom
    std::vector<int> block_relabel; // block e of the input -> canonical block

    bool operator==(const CanonicalForm&) const = default;
    bool operator<(const CanonicalForm& o) const { return bytes < o.bytes; }
};

// Automorphism group given by generator permutations on atoms; the
// block action is induced.
struct AutGroup {
    int degree = 0;
    std::vector<std::vector<int>> generators;

    // Group order by orbit-stabilizer (recursive Schreier generators).
    std::uint64_t order() const;
};

namespace detail {

// Ordered partition of graph vertices with in-place cell splitting.
// Cells occupy contiguous position ranges; splitting keeps fragments
// in place, so atoms always occupy positions 0..atom_count-1.
struct Partition {
    std::vector<int> pos_to_vert;
    std::vector<int> vert_to_pos;
    std::vector<int> cell_of;  // vertex -> start position of its cell
    std::vector<int> cell_len; // indexed by cell start position
    int n = 0;

    void init(int count, int atom_count) {
        n = count;
        pos_to_vert.resize(static_cast<std::size_t>(n));
        std::iota(pos_to_vert.begin(), pos_to_vert.end(), 0);
        vert_to_pos = pos_to_vert;
        cell_of.assign(static_cast<std::size_t>(n), 0);
        cell_len.assign(static_cast<std::size_t>(n), 0);
        if (atom_count > 0 && atom_count < n) {
            for (int v = 0; v < n; ++v)
                cell_of[static_cast<std::size_t>(v)] = v < atom_count ? 0 : atom_count;
            cell_len[0] = atom_count;
            cell_len[static_cast<std::size_t>(atom_count)] = n - atom_count;
        } else if (n > 0) {
            cell_len[0] = n;
        }
    }
};

struct CanonScratch {
    std::vector<int> degree;
    std::vector<int> worklist;
    std::vector<char> queued;
    std::vector<int> touched;
    std::vector<std::uint64_t> cert_keys;
};

// McKay-style equitable refinement. Splits every cell by neighbor
// counts in pending splitter cells until stable. Deterministic:
// fragments are ordered by ascending count.
inline void refine(const IncidenceGraph& g, Partition& p, CanonScratch& s,
                   const int* splitters, int splitter_count) {
    s.degree.assign(static_cast<std::size_t>(p.n), 0);
    s.queued.assign(static_cast<std::size_t>(p.n), 0);
    s.worklist.assign(splitters, splitters + splitter_count);
    for (int c : s.worklist) s.queued[static_cast<std::size_t>(c)] = 1;

    while (!s.worklist.empty()) {
        const int w = s.worklist.back();
        s.worklist.pop_back();
        s.queued[static_cast<std::size_t>(w)] = 0;
        const int wlen = p.cell_len[static_cast<std::size_t>(w)];

        s.touched.clear();
        for (int i = w; i < w + wlen; ++i) {
            const int v = p.pos_to_vert[static_cast<std::size_t>(i)];
            for (const int* u = g.begin_of(v); u != g.end_of(v); ++u) {
                if (s.degree[static_cast<std::size_t>(*u)]++ == 0) {
                    const int c = p.cell_of[static_cast<std::size_t>(*u)];
                    if (p.cell_len[static_cast<std::size_t>(c)] > 1)
                        s.touched.push_back(c);
                }
            }
        }
        std::sort(s.touched.begin(), s.touched.end());
        s.touched.erase(std::unique(s.touched.begin(), s.touched.end()), s.touched.end());

        for (int c : s.touched) {
            const int len = p.cell_len[static_cast<std::size_t>(c)];
            auto begin = p.pos_to_vert.begin() + c;
            std::stable_sort(begin, begin + len, [&](int a, int b) {
                return s.degree[static_cast<std::size_t>(a)] < s.degree[static_cast<std::size_t>(b)];
            });
            int frag_start = c;
            for (int i = c; i < c + len; ++i) {
                const int v = p.pos_to_vert[static_cast<std::size_t>(i)];
                if (i > c &&
                    s.degree[static_cast<std::size_t>(v)] !=
                        s.degree[static_cast<std::size_t>(
                            p.pos_to_vert[static_cast<std::size_t>(i - 1)])]) {
                    p.cell_len[static_cast<std::size_t>(frag_start)] = i - frag_start;
                    frag_start = i;
                }
                p.vert_to_pos[static_cast<std::size_t>(v)] = i;
                p.cell_of[static_cast<std::size_t>(v)] = frag_start;
            }
            p.cell_len[static_cast<std::size_t>(frag_start)] = c + len - frag_start;

            if (frag_start != c) { // cell actually split
                int largest = c, largest_len = 0;
                for (int fs = c; fs < c + len; fs += p.cell_len[static_cast<std::size_t>(fs)])
                    if (p.cell_len[static_cast<std::size_t>(fs)] > largest_len) {
                        largest_len = p.cell_len[static_cast<std::size_t>(fs)];
                        largest = fs;
                    }
                const bool c_was_queued = s.queued[static_cast<std::size_t>(c)];
                for (int fs = c; fs < c + len; fs += p.cell_len[static_cast<std::size_t>(fs)]) {
                    if (s.queued[static_cast<std::size_t>(fs)]) continue;
                    if (!c_was_queued && fs == largest) continue;
                    s.queued[static_cast<std::size_t>(fs)] = 1;
                    s.worklist.push_back(fs);
                }
            }
        }
        for (int i = w; i < w + wlen; ++i) {
            const int v = p.pos_to_vert[static_cast<std::size_t>(i)];
            for (const int* u = g.begin_of(v); u != g.end_of(v); ++u)
                s.degree[static_cast<std::size_t>(*u)] = 0;
        }
    }
}

// Serialized diagram relabeled by the discrete partition: atom count,
// block count, then each block (size, atoms ascending), blocks in
// lexicographic order. Blocks are packed into 64-bit keys for sorting,
// which caps block size at 7 (canonicalize guards at 255 atoms).
inline void certificate(const Diagram& d, const Partition& p, CanonScratch& s,
                        std::vector<std::uint8_t>& out) {
    s.cert_keys.clear();
    for (const auto& b : d.blocks) {
        std::uint8_t lab[8];
        int k = 0;
        for (int a : b) lab[k++] = static_cast<std::uint8_t>(p.vert_to_pos[static_cast<std::size_t>(a)]);
        std::sort(lab, lab + k);
        std::uint64_t key = static_cast<std::uint64_t>(k);
        for (int i = 0; i < k; ++i) key = key << 8 | lab[i];
        s.cert_keys.push_back(key);
    }
    std::sort(s.cert_keys.begin(), s.cert_keys.end());
    out.clear();
    out.push_back(static_cast<std::uint8_t>(d.atom_count));
    out.push_back(static_cast<std::uint8_t>(d.blocks.size()));
    for (std::uint64_t key : s.cert_keys) {
        std::uint8_t buf[9];
        int k = 0;
        while (key) {
            buf[k++] = static_cast<std::uint8_t>(key & 0xff);
            key >>= 8;
        }
        for (int i = k - 1; i >= 0; --i) out.push_back(buf[i]);
    }
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
};

struct CanonSearch {
    const Diagram& d;
    IncidenceGraph g;
    CanonScratch scratch;

    std::vector<std::vector<int>> gens; // atom permutations
    std::vector<std::uint8_t> best_cert, first_cert, cur_cert;
    std::vector<int> best_atom_pos, first_atom_pos;
    bool have_first = false;

    // block lookup, built on first use (only needed once generators exist)
    std::vector<std::pair<std::uint64_t, int>> block_keys;

    explicit CanonSearch(const Diagram& dia) : d(dia), g(incidence_graph(dia)) {}

    static std::uint64_t pack_block(const std::vector<int>& b) {
        std::uint64_t key = static_cast<std::uint64_t>(b.size());
        for (int a : b) key = key << 8 | static_cast<std::uint64_t>(a);
        return key;
    }

    void ensure_block_keys() {
        if (!block_keys.empty() || g.block_count == 0) return;
        for (int e = 0; e < g.block_count; ++e)
            block_keys.push_back({pack_block(d.blocks[static_cast<std::size_t>(e)]), e});
        std::sort(block_keys.begin(), block_keys.end());
    }

    int block_image(const std::vector<int>& gen, int e) {
        std::uint8_t img[8];
        int k = 0;
        for (int a : d.blocks[static_cast<std::size_t>(e)])
            img[k++] = static_cast<std::uint8_t>(gen[static_cast<std::size_t>(a)]);
        std::sort(img, img + k);
        std::uint64_t key = static_cast<std::uint64_t>(k);
        for (int i = 0; i < k; ++i) key = key << 8 | img[i];
        auto it = std::lower_bound(block_keys.begin(), block_keys.end(),
                                   std::pair<std::uint64_t, int>{key, -1});
        return it->second;
    }

    void record_automorphism(const std::vector<int>& pos_a, const std::vector<int>& pos_b) {
        // relabel(D, a) == relabel(D, b) implies a o b^-1 fixes D
        std::vector<int> inv(static_cast<std::size_t>(d.atom_count));
        for (int v = 0; v < d.atom_count; ++v)
            inv[static_cast<std::size_t>(pos_a[static_cast<std::size_t>(v)])] = v;
        std::vector<int> perm(static_cast<std::size_t>(d.atom_count));
        bool identity = true;
        for (int v = 0; v < d.atom_count; ++v) {
            perm[static_cast<std::size_t>(v)] =
                inv[static_cast<std::size_t>(pos_b[static_cast<std::size_t>(v)])];
            if (perm[static_cast<std::size_t>(v)] != v) identity = false;
        }
        if (!identity) gens.push_back(std::move(perm));
    }

    void leaf(const Partition& p) {
        certificate(d, p, scratch, cur_cert);
        std::vector<int> atom_pos(p.vert_to_pos.begin(), p.vert_to_pos.begin() + d.atom_count);
        if (!have_first) {
            have_first = true;
            first_cert = cur_cert;
            first_atom_pos = atom_pos;
            best_cert = cur_cert;
            best_atom_pos = std::move(atom_pos);
            return;
        }
        if (cur_cert == first_cert) record_automorphism(first_atom_pos, atom_pos);
        else if (cur_cert == best_cert) record_automorphism(best_atom_pos, atom_pos);
        if (cur_cert < best_cert) {
            best_cert = cur_cert;
            best_atom_pos = std::move(atom_pos);
        }
    }

    // Orbits of vertices under generators fixing the individualization
    // path pointwise; used to skip equivalent target-cell candidates.
    std::vector<int> orbit_roots(const std::vector<int>& path) {
        ensure_block_keys();
        UnionFind uf(g.vertex_count());
        for (const auto& gen : gens) {
            bool fixes = true;
            for (int v : path) {
                const int img = v < d.atom_count
                                    ? gen[static_cast<std::size_t>(v)]
                                    : d.atom_count + block_image(gen, v - d.atom_count);
                if (img != v) {
                    fixes = false;
                    break;
                }
            }
            if (!fixes) continue;
            for (int a = 0; a < d.atom_count; ++a) uf.unite(a, gen[static_cast<std::size_t>(a)]);
            for (int e = 0; e < g.block_count; ++e)
                uf.unite(d.atom_count + e, d.atom_count + block_image(gen, e));
        }
        std::vector<int> roots(static_cast<std::size_t>(g.vertex_count()));
        for (int v = 0; v < g.vertex_count(); ++v) roots[static_cast<std::size_t>(v)] = uf.find(v);
        return roots;
    }

    void search(Partition& p, std::vector<int>& path) {
        // target cell: first largest non-singleton
        int target = -1, target_len = 1;
        for (int s = 0; s < p.n; s += p.cell_len[static_cast<std::size_t>(s)])
            if (p.cell_len[static_cast<std::size_t>(s)] > target_len) {
                target_len = p.cell_len[static_cast<std::size_t>(s)];
                target = s;
            }
        if (target < 0) {
            leaf(p);
            return;
        }

        std::vector<int> candidates(p.pos_to_vert.begin() + target,
                                    p.pos_to_vert.begin() + target + target_len);
        std::sort(candidates.begin(), candidates.end());

        int explored = 0;
        std::vector<int> explored_list;
        for (int v : candidates) {
            if (explored > 0 && !gens.empty()) {
                const auto roots = orbit_roots(path);
                bool skip = false;
                for (int u : explored_list)
                    if (roots[static_cast<std::size_t>(u)] == roots[static_cast<std::size_t>(v)]) {
                        skip = true;
                        break;
                    }
                if (skip) continue;
            }
            ++explored;
            explored_list.push_back(v);

            Partition q = p;
            const int vp = q.vert_to_pos[static_cast<std::size_t>(v)];
            const int c = q.cell_of[static_cast<std::size_t>(v)];
            const int u = q.pos_to_vert[static_cast<std::size_t>(c)];
            std::swap(q.pos_to_vert[static_cast<std::size_t>(c)],
                      q.pos_to_vert[static_cast<std::size_t>(vp)]);
            q.vert_to_pos[static_cast<std::size_t>(v)] = c;
            q.vert_to_pos[static_cast<std::size_t>(u)] = vp;
            q.cell_len[static_cast<std::size_t>(c)] = 1;
            const int rest = c + 1;
            q.cell_len[static_cast<std::size_t>(rest)] = target_len - 1;
            for (int i = rest; i < c + target_len; ++i)
                q.cell_of[static_cast<std::size_t>(q.pos_to_vert[static_cast<std::size_t>(i)])] = rest;

            refine(g, q, scratch, &c, 1);
            path.push_back(v);
            search(q, path);
            path.pop_back();
        }
    }

    void run() {
        Partition p;
        root_refined_partition(g, p, scratch);
        std::vector<int> path;
        search(p, path);
    }

    // The equitable refinement of the (atoms | blocks) partition. Every
    // leaf of the search refines this partition positionally, so final
    // vertex positions stay within their root cell ranges.
    static void root_refined_partition(const IncidenceGraph& g, Partition& p, CanonScratch& s) {
        p.init(g.vertex_count(), g.atom_count);
        int splitters[2];
        int count = 0;
        for (int c = 0; c < p.n; c += p.cell_len[static_cast<std::size_t>(c)])
            splitters[count++] = c;
        refine(g, p, s, splitters, count);
    }
};

} // namespace detail

// Canonical form and automorphism group of a valid diagram. The form's
// bytes are equal for two diagrams iff the diagrams are isomorphic;
// the relabelings map the input onto the canonical representative.
inline std::pair<CanonicalForm, AutGroup> canonicalize(const Diagram& d) {
    if (d.atom_count > 255 || d.blocks.size() > 255)
        throw std::invalid_argument("canonicalize: diagram too large");

    if (d.atom_count == 0) {
        CanonicalForm cf;
        cf.bytes = {0, 0};
        return {cf, AutGroup{0, {}}};
    }
    detail::CanonSearch cs(d);
    cs.run();

    CanonicalForm cf;
    cf.bytes = std::move(cs.best_cert);
    cf.atom_relabel = std::move(cs.best_atom_pos);

    // canonical block labels: position of each relabeled block in the
    // sorted canonical block list
    std::vector<std::uint64_t> keys;
    keys.reserve(d.blocks.size());
    for (const auto& b : d.blocks) {
        std::uint8_t lab[8];
        int k = 0;
        for (int a : b)
            lab[k++] = static_cast<std::uint8_t>(cf.atom_relabel[static_cast<std::size_t>(a)]);
        std::sort(lab, lab + k);
        std::uint64_t key = static_cast<std::uint64_t>(k);
        for (int i = 0; i < k; ++i) key = key << 8 | lab[i];
        keys.push_back(key);
    }
    auto sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    cf.block_relabel.resize(d.blocks.size());
    for (std::size_t e = 0; e < keys.size(); ++e)
        cf.block_relabel[e] = static_cast<int>(
            std::lower_bound(sorted.begin(), sorted.end(), keys[e]) - sorted.begin());

    AutGroup aut;
    aut.degree = d.atom_count;
    aut.generators = std::move(cs.gens);
    return {std::move(cf), std::move(aut)};
}

// Orbits of the atom set under the group: vector of orbits, each a
// sorted list of atoms, ordered by smallest member.
inline std::vector<std::vector<int>> atom_orbits(const AutGroup& g, int alpha) {
    detail::UnionFind uf(alpha);
    for (const auto& gen : g.generators)
        for (int a = 0; a < alpha; ++a) uf.unite(a, gen[static_cast<std::size_t>(a)]);
    std::map<int, std::vector<int>> by_root;
    for (int a = 0; a < alpha; ++a) by_root[uf.find(a)].push_back(a);
    std::vector<std::vector<int>> out;
    out.reserve(by_root.size());
    for (auto& [root, members] : by_root) out.push_back(std::move(members));
    return out;
}

// One representative per orbit of the given subsets under the induced
// group action; the representative is the first subset of its orbit in
// the input order (lexicographically least when the input is sorted).
inline std::vector<std::vector<int>> subset_orbit_reps(
    const AutGroup& g, const std::vector<std::vector<int>>& subsets) {
    if (g.generators.empty()) return subsets;
    std::vector<std::vector<int>> reps;
    std::set<std::vector<int>> seen;
    for (const auto& s : subsets) {
        if (seen.count(s)) continue;
        reps.push_back(s);
        std::vector<std::vector<int>> frontier{s};
        seen.insert(s);
        while (!frontier.empty()) {
            auto cur = std::move(frontier.back());
            frontier.pop_back();
            for (const auto& gen : g.generators) {
                std::vector<int> img;
                img.reserve(cur.size());
                for (int a : cur) img.push_back(gen[static_cast<std::size_t>(a)]);
                std::sort(img.begin(), img.end());
                if (seen.insert(img).second) frontier.push_back(std::move(img));
            }
        }
    }
    return reps;
}

inline std::uint64_t AutGroup::order() const {
    // orbit-stabilizer with Schreier generators, recursing on the
    // smallest moved point
    std::function<std::uint64_t(std::vector<std::vector<int>>)> go =
        [&](std::vector<std::vector<int>> gs) -> std::uint64_t {
        std::set<std::vector<int>> uniq;
        for (auto& p : gs) {
            bool id = true;
            for (std::size_t i = 0; i < p.size(); ++i)
                if (p[i] != static_cast<int>(i)) {
                    id = false;
                    break;
                }
            if (!id) uniq.insert(std::move(p));
        }
        if (uniq.empty()) return 1;
        gs.assign(uniq.begin(), uniq.end());

        int base = -1;
        for (int a = 0; a < degree && base < 0; ++a)
            for (const auto& p : gs)
                if (p[static_cast<std::size_t>(a)] != a) {
                    base = a;
                    break;
                }
        if (base < 0) return 1;

        std::map<int, std::vector<int>> transversal;
        std::vector<int> identity(static_cast<std::size_t>(degree));
        std::iota(identity.begin(), identity.end(), 0);
        transversal[base] = identity;
        std::vector<int> frontier{base};
        while (!frontier.empty()) {
            int x = frontier.back();
            frontier.pop_back();
            for (const auto& p : gs) {
                int y = p[static_cast<std::size_t>(x)];
                if (!transversal.count(y)) {
                    std::vector<int> t(static_cast<std::size_t>(degree));
                    const auto& tx = transversal[x];
                    for (int i = 0; i < degree; ++i)
                        t[static_cast<std::size_t>(i)] =
                            p[static_cast<std::size_t>(tx[static_cast<std::size_t>(i)])];
                    transversal[y] = std::move(t);
                    frontier.push_back(y);
                }
            }
        }

        std::vector<std::vector<int>> stab;
        for (const auto& [x, tx] : transversal) {
            for (const auto& p : gs) {
                const int y = p[static_cast<std::size_t>(x)];
                const auto& ty = transversal.at(y);
                std::vector<int> inv_ty(static_cast<std::size_t>(degree));
                for (int i = 0; i < degree; ++i)
                    inv_ty[static_cast<std::size_t>(ty[static_cast<std::size_t>(i)])] = i;
                std::vector<int> sg(static_cast<std::size_t>(degree));
                for (int i = 0; i < degree; ++i)
                    sg[static_cast<std::size_t>(i)] = inv_ty[static_cast<std::size_t>(
                        p[static_cast<std::size_t>(tx[static_cast<std::size_t>(i)])])];
                stab.push_back(std::move(sg));
            }
        }
        return static_cast<std::uint64_t>(transversal.size()) * go(std::move(stab));
    };
    return go(generators);
}

} // namespace greechie
