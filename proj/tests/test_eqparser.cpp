#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "greechie/eqparser.hpp"

using namespace greechie;

TEST_CASE("parse the transcript equation") {
    const auto inf = parse_inference("(av(b^(avc)))=((avb)^(avc))");
    CHECK(inf.hypotheses.empty());
    CHECK(inf.conclusion.rel == RelOp::Equals);
    CHECK(variables(inf) == std::vector<int>{0, 1, 2});
    CHECK(format_inference(inf) == "(av(b^(avc)))=((avb)^(avc))");
    CHECK(inference_equal(inf, builtin("modular")));
}

TEST_CASE("trivial relations") {
    const auto inf = parse_inference("a=a");
    CHECK(term_equal(inf.conclusion.lhs, inf.conclusion.rhs));
    CHECK(variables(inf) == std::vector<int>{0});
    CHECK(variables(parse_inference("1=1")).empty());
    CHECK(parse_inference("a<b'").conclusion.rel == RelOp::Leq);
    CHECK(parse_inference("0<1").conclusion.rel == RelOp::Leq);
}

TEST_CASE("whitespace is ignored") {
    CHECK(inference_equal(parse_inference(" ( a v ( b ^ ( a v c ) ) ) = ( ( a v b ) ^ ( a v c ) ) "),
                          builtin("modular")));
}

TEST_CASE("hypotheses with metalogical negation") {
    const char* eq6 =
        "~(d->1a<a->1d) & ~(((c->1d)^(d->1a))<(a->1d)) => "
        "((((a->1b)^(b->1c))^(c->1d))^(d->1a))<(a->1d)";
    const auto inf = parse_inference(eq6);
    REQUIRE(inf.hypotheses.size() == 2);
    CHECK(inf.hypotheses[0].negated);
    CHECK(inf.hypotheses[1].negated);
    CHECK(inf.conclusion.rel == RelOp::Leq);
    // first-occurrence order scans hypotheses before the conclusion
    CHECK(variables(inf) == std::vector<int>{3, 0, 2, 1}); // d,a,c,b

    // unnegated hypotheses, as in the orthoarguesian law
    const auto oa = parse_inference("a<b' & c<d' => (avb)<(cvd)");
    REQUIRE(oa.hypotheses.size() == 2);
    CHECK(!oa.hypotheses[0].negated);
}

TEST_CASE("implications and biconditional parse") {
    for (const char* text : {"(a->0b)=1", "(a->1b)=1", "(a->2b)=1", "(a->3b)=1",
                             "(a->4b)=1", "(a->5b)=1", "(a==b)=1"}) {
        INFO(text);
        CHECK_NOTHROW(parse_inference(text));
    }
    const auto inf = parse_inference("(a->1b)=(a'v(a^b))");
    CHECK(inf.conclusion.lhs->op == TermOp::Impl1);
    CHECK(inf.conclusion.rhs->op == TermOp::Join);
    CHECK(inf.conclusion.rhs->a->op == TermOp::Comp);
}

TEST_CASE("postfix complement binds to the preceding primary") {
    const auto inf = parse_inference("(avb)'=((a'v b)''^c)");
    CHECK(inf.conclusion.lhs->op == TermOp::Comp);
    CHECK(inf.conclusion.lhs->a->op == TermOp::Join);
    const auto& rhs = inf.conclusion.rhs;
    CHECK(rhs->op == TermOp::Meet);
    CHECK(rhs->a->op == TermOp::Comp);
    CHECK(rhs->a->a->op == TermOp::Comp);
}

TEST_CASE("parse errors are distinct and positioned") {
    auto fails_at = [](const char* text) {
        try {
            parse_inference(text);
        } catch (const parse_error& e) {
            return static_cast<int>(e.position);
        }
        return -1;
    };
    CHECK(fails_at("(avb") >= 0);        // unbalanced parentheses
    CHECK(fails_at("(a?b)=c") == 2);     // unknown token
    CHECK(fails_at("ab") >= 0);          // missing relation
    CHECK(fails_at("(Avb)=c") == 1);     // variable not a-z
    CHECK(fails_at("(avbvc)=d") >= 0);   // chained operators need parens
    CHECK(fails_at("a=b extra") >= 0);   // trailing input
    CHECK(fails_at("(a->7b)=c") >= 0);   // implication index out of range
    CHECK(fails_at("") >= 0);
}

TEST_CASE("format and parse round-trip on random terms") {
    std::mt19937 rng(42);
    auto random_term = [&](auto&& self, int depth) -> TermPtr {
        const int pick = static_cast<int>(rng() % (depth > 3 ? 3u : 10u));
        switch (pick) {
        case 0: return t_var(static_cast<char>('a' + rng() % 4));
        case 1: return t_zero();
        case 2: return t_one();
        case 3: return t_comp(self(self, depth + 1));
        default: {
            const auto ops = {TermOp::Join, TermOp::Meet,  TermOp::Impl0, TermOp::Impl1,
                              TermOp::Impl2, TermOp::Impl3, TermOp::Impl4, TermOp::Impl5,
                              TermOp::Biimp};
            const auto op = *(ops.begin() + rng() % ops.size());
            return t_bin(op, self(self, depth + 1), self(self, depth + 1));
        }
        }
    };
    for (int trial = 0; trial < 200; ++trial) {
        Inference inf;
        const int hyps = static_cast<int>(rng() % 3);
        for (int h = 0; h < hyps; ++h)
            inf.hypotheses.push_back(
                {rng() % 2 == 0,
                 {random_term(random_term, 2), random_term(random_term, 2),
                  rng() % 2 ? RelOp::Equals : RelOp::Leq}});
        inf.conclusion = {random_term(random_term, 1), random_term(random_term, 1),
                          rng() % 2 ? RelOp::Equals : RelOp::Leq};
        const auto text = format_inference(inf);
        INFO(text);
        CHECK(inference_equal(parse_inference(text), inf));
    }
}

TEST_CASE("builtin godowski") {
    CHECK(format_relation(builtin("godowski", 3).conclusion) ==
          "(((a->1b)^(b->1c))^(c->1a))<(a->1c)");
    CHECK(format_relation(builtin("godowski", 4).conclusion) ==
          "((((a->1b)^(b->1c))^(c->1d))^(d->1a))<(a->1d)");
    CHECK(variables(builtin("godowski", 5)).size() == 5);
    CHECK_THROWS_AS(builtin("godowski", 2), std::invalid_argument);
    CHECK_THROWS_AS(builtin("godowski"), std::invalid_argument);
}

TEST_CASE("builtin oa6 matches the orthoarguesian shape") {
    const auto inf = builtin("oa6");
    REQUIRE(inf.hypotheses.size() == 3);
    CHECK(format_relation(inf.hypotheses[0].relation) == "a<b'");
    CHECK(format_relation(inf.hypotheses[1].relation) == "c<d'");
    CHECK(format_relation(inf.hypotheses[2].relation) == "e<f'");
    CHECK(!inf.hypotheses[0].negated);
    CHECK(variables(inf) == std::vector<int>{0, 1, 2, 3, 4, 5});
    CHECK(format_relation(inf.conclusion) ==
          "(((avb)^(cvd))^(evf))<"
          "(bv(a^(cv(((avc)^(bvd))^(((ave)^(bvf))v((cve)^(dvf)))))))");
}

TEST_CASE("builtin noa expands the generalized biconditional") {
    const auto inf = builtin("noa", 4);
    CHECK(variables(inf) == std::vector<int>{0, 1, 2, 3});
    CHECK(inf.hypotheses.empty());
    // lhs = (a ->1 c) ^ (a ==(4) b) with ==(3) expanded over aux c
    const auto equiv3 = "(((a->1c)^(b->1c))v((a'->1c)^(b'->1c)))";
    const std::string expected = std::string("((a->1c)^(") + equiv3 +
                                 "v((((a->1c)^(d->1c))v((a'->1c)^(d'->1c)))"
                                 "^(((b->1c)^(d->1c))v((b'->1c)^(d'->1c))))))"
                                 "<(b->1c)";
    CHECK(format_relation(inf.conclusion) == expected);
    CHECK(variables(builtin("noa", 5)).size() == 5);
    CHECK_THROWS_AS(builtin("noa", 3), std::invalid_argument);
}

TEST_CASE("builtin orthomodular and distributive") {
    CHECK(format_relation(builtin("orthomodular").conclusion) == "(av(a'^(avb)))=(avb)");
    CHECK(format_relation(builtin("distributive").conclusion) == "(a^(bvc))=((a^b)v(a^c))");
    CHECK_THROWS_AS(builtin("nonsense"), std::invalid_argument);
}
