#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "greechie/generate.hpp"
#include "greechie/lattice.hpp"
#include "fixtures.hpp"

using namespace greechie;

TEST_CASE("node counts follow the pasting arithmetic") {
    CHECK(paste(parse_diagram("123,345.")).n == 12);
    CHECK(paste(parse_diagram("123,345,567.")).n == 16);
    CHECK(paste(parse_diagram("123.")).n == 8);   // Boolean 2^3
    CHECK(paste(parse_diagram("12.")).n == 4);    // Boolean 2^2
    CHECK(paste(parse_diagram("1234.")).n == 16); // Boolean 2^4
    CHECK(paste(parse_diagram("12,34.")).n == 6); // MO2
    CHECK(paste(fixtures::decagon()).n == 42);
    CHECK(paste(fixtures::petersen()).n == 32);

    // a 4-atom block in a chain adds 12 nodes where a 3-atom adds 4
    CHECK(paste(parse_diagram("123,345,567.")).n -
              paste(parse_diagram("123,345.")).n ==
          4);
    CHECK(paste(parse_diagram("123,3456.")).n - paste(parse_diagram("123.")).n == 12);

    // 4-atom-block decagon: 30 atoms, 2 + 2*30 + 10*6 = 122
    std::vector<std::vector<int>> blocks;
    for (int i = 0; i < 10; ++i) blocks.push_back({3 * i, 3 * i + 1, 3 * i + 2, (3 * i + 3) % 30});
    CHECK(paste(make_diagram(30, blocks)).n == 122);
}

TEST_CASE("node count law over generated diagrams") {
    GenerationConfig cfg;
    for (int beta = 1; beta <= 6; ++beta) {
        cfg.beta = beta;
        generate(cfg, [&](const Diagram& d) {
            REQUIRE(paste(d).n == 2 + 2 * d.atom_count);
        });
    }
}

TEST_CASE("paste rejects invalid inputs") {
    CHECK_THROWS_AS(paste(fixtures::square()), paste_error);   // order-4 loop
    CHECK_THROWS_AS(paste(fixtures::triangle()), paste_error); // order-3 loop
    CHECK_THROWS_AS(paste(parse_diagram("12345.")), paste_error); // block size 5
    CHECK_THROWS_AS(paste(make_diagram(1, {{0}})), paste_error);  // block size 1
    CHECK_THROWS_AS(paste(make_diagram(4, {{0, 1}, {1, 2, 3}})), paste_error);
}

TEST_CASE("verify_lattice passes every pasted lattice") {
    for (const char* text : {"123.", "123,345.", "123,345,567.", "12,34.", "1234.",
                             "12,345.", "123,3456."}) {
        INFO(text);
        CHECK(verify_lattice(paste(parse_diagram(text))).ok);
    }
    CHECK(verify_lattice(paste(fixtures::pentagon())).ok);
    CHECK(verify_lattice(paste(fixtures::petersen())).ok);
}

TEST_CASE("verify_lattice reports a poset without unique bounds") {
    // 0, 1, x, y, u, v with x,y < u and x,y < v: join(x,y) is ambiguous
    Lattice l;
    l.n = 6;
    l.alpha = 4;
    l.beta = 0;
    const int x = 2, y = 3, u = 4, v = 5;
    l.leq.assign(6, std::vector<char>(6, 0));
    for (int i = 0; i < 6; ++i) {
        l.leq[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
        l.leq[0][static_cast<std::size_t>(i)] = 1;
        l.leq[static_cast<std::size_t>(i)][1] = 1;
    }
    for (int a : {x, y})
        for (int b : {u, v}) l.leq[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 1;
    l.join.assign(6, std::vector<int>(6, 1));
    l.meet.assign(6, std::vector<int>(6, 0));
    for (int i = 0; i < 6; ++i) {
        l.join[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = i;
        l.meet[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = i;
    }
    l.ortho = {1, 0, 3, 2, 5, 4};
    l.names = {"0", "1", "a", "b", "c", "d"};
    const auto report = verify_lattice(l);
    CHECK(!report.ok);
    CHECK(report.what.find("join not least") != std::string::npos);
}

TEST_CASE("MO2 structure") {
    const auto l = paste(parse_diagram("12,34."));
    REQUIRE(l.n == 6);
    // atoms a,b then complements c,d per the naming order
    CHECK(node_name(l, 0) == "0");
    CHECK(node_name(l, 1) == "1");
    CHECK(l.nodes[2].kind == NodeKind::Atom);
    CHECK(l.nodes[2].atom == 0);
    CHECK(l.nodes[3].atom == 2); // second block's first atom is node b
    CHECK(l.ortho[2] == 4);      // a' = c (the partner atom)
    CHECK(l.ortho[3] == 5);      // b' = d
    // the four middle nodes are pairwise incomparable
    for (int i = 2; i < 6; ++i)
        for (int j = 2; j < 6; ++j)
            if (i != j) CHECK(l.leq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == 0);

    // MO2 is not distributive: x n (y u y') = x but (x n y) u (x n y') = 0
    const int xm = 2, ym = 3, yc = 5;
    auto meet = [&](int p, int q) { return l.meet[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)]; };
    auto join = [&](int p, int q) { return l.join[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)]; };
    CHECK(meet(xm, join(ym, yc)) == xm);
    CHECK(join(meet(xm, ym), meet(xm, yc)) == 0);
}

TEST_CASE("node naming order") {
    const auto l = paste(parse_diagram("123,345."));
    // atoms a..e, coatoms f..j
    for (int a = 0; a < 5; ++a) {
        CHECK(l.nodes[static_cast<std::size_t>(2 + a)].kind == NodeKind::Atom);
        CHECK(l.nodes[static_cast<std::size_t>(2 + a)].atom == a);
        CHECK(node_name(l, 2 + a) == std::string(1, static_cast<char>('a' + a)));
    }
    CHECK(l.nodes[7].kind == NodeKind::Coatom);
    CHECK(node_name(l, 7) == "f");
    CHECK(l.ortho[2] == 7); // a' is the first coatom

    // names continue into capitals and suffixed letters
    const auto big = paste(fixtures::decagon());
    CHECK(node_name(big, 2 + 26) == "A");
    CHECK(big.n == 42);
}

TEST_CASE("order relations of a single 3-block are Boolean") {
    const auto l = paste(parse_diagram("123."));
    // atom a is below the coatoms of the other two atoms
    const int a = 2, bc = 6, cc = 7; // nodes: 0,1,a,b,c,a',b',c'
    CHECK(l.leq[a][bc] == 1);
    CHECK(l.leq[a][cc] == 1);
    CHECK(l.leq[a][5] == 0); // not below its own complement
    auto join = [&](int p, int q) { return l.join[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)]; };
    CHECK(join(2, 3) == 7); // a v b = c'
    CHECK(join(2, 5) == 1); // a v a' = 1
}

TEST_CASE("4-block middles") {
    const auto l = paste(parse_diagram("1234."));
    // nodes: 0,1, atoms 2-5, coatoms 6-9, middles 10-15
    REQUIRE(l.n == 16);
    CHECK(l.nodes[10].kind == NodeKind::Middle);
    CHECK(l.nodes[10].subset == std::vector<int>{0, 1});
    // a v b is the middle over {0,1}
    CHECK(l.join[2][3] == 10);
    // ortho of middle {0,1} is middle {2,3}
    CHECK(l.nodes[static_cast<std::size_t>(l.ortho[10])].subset == std::vector<int>{2, 3});
    // middle {0,1} lies below the coatoms of atoms 2 and 3
    CHECK(l.leq[10][8] == 1);
    CHECK(l.leq[10][9] == 1);
    CHECK(l.leq[10][6] == 0);
}

TEST_CASE("De Morgan and orthomodularity on pasted lattices") {
    for (const char* text : {"123,345.", "12,34.", "1234.", "123,345,567."}) {
        const auto l = paste(parse_diagram(text));
        INFO(text);
        for (int x = 0; x < l.n; ++x)
            for (int y = 0; y < l.n; ++y) {
                const int oj = l.ortho[static_cast<std::size_t>(
                    l.join[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)])];
                const int mo = l.meet[static_cast<std::size_t>(l.ortho[static_cast<std::size_t>(x)])]
                                     [static_cast<std::size_t>(l.ortho[static_cast<std::size_t>(y)])];
                REQUIRE(oj == mo);
            }
    }
}

TEST_CASE("paste is isomorphism-equivariant") {
    std::mt19937 rng(17);
    for (const auto& d : {parse_diagram("123,345,567."), fixtures::pentagon()}) {
        std::vector<int> perm(static_cast<std::size_t>(d.atom_count));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        const auto l1 = paste(d);
        const auto l2 = paste(relabel_atoms(d, perm));
        CHECK(l1.n == l2.n);
        auto degrees = [](const Lattice& l) {
            std::vector<int> deg;
            for (int x = 0; x < l.n; ++x) {
                int c = 0;
                for (int y = 0; y < l.n; ++y)
                    c += l.leq[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
                deg.push_back(c);
            }
            std::sort(deg.begin(), deg.end());
            return deg;
        };
        CHECK(degrees(l1) == degrees(l2));
    }
}

TEST_CASE("dump emitter mentions every node") {
    const auto l = paste(parse_diagram("123."));
    const auto text = dump_lattice(l);
    for (int x = 0; x < l.n; ++x) CHECK(text.find(node_name(l, x)) != std::string::npos);
}
