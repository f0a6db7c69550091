#pragma once

// Lattice equations and inferences: ASCII parser, formatter and
// constructors for the named law families. Terms are immutable trees
// with structural sharing.
//
// Grammar (whitespace ignored):
//   inference := [ hyp ("&" hyp)* "=>" ] relation
//   hyp       := ["~"] "(" relation ")" | ["~"] relation
//   relation  := term ("=" | "<") term          -- "<" reads as <=
//   term      := primary [ binop primary ]
//   primary   := a-z | "0" | "1" | "(" term ")" , then postfix "'"
//   binop     := "v" | "^" | "->0".."->5" | "=="
// Binary operators are written fully parenthesized; a single
// unparenthesized binop per term is accepted, chains are rejected.

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "greechie/diagram.hpp" // parse_error

namespace greechie {

enum class TermOp {
    Var,
    Zero,
    One,
    Comp,
    Join,
    Meet,
    Impl0,
    Impl1,
    Impl2,
    Impl3,
    Impl4,
    Impl5,
    Biimp,
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    TermOp op = TermOp::Zero;
    int var = -1; // 0..25 for Var
    TermPtr a, b; // Comp uses a; binaries use a and b
};

inline TermPtr t_var(char c) {
    return std::make_shared<Term>(Term{TermOp::Var, c - 'a', nullptr, nullptr});
}
inline TermPtr t_zero() { return std::make_shared<Term>(Term{TermOp::Zero, -1, nullptr, nullptr}); }
inline TermPtr t_one() { return std::make_shared<Term>(Term{TermOp::One, -1, nullptr, nullptr}); }
inline TermPtr t_comp(TermPtr x) {
    return std::make_shared<Term>(Term{TermOp::Comp, -1, std::move(x), nullptr});
}
inline TermPtr t_bin(TermOp op, TermPtr x, TermPtr y) {
    return std::make_shared<Term>(Term{op, -1, std::move(x), std::move(y)});
}
inline TermPtr t_join(TermPtr x, TermPtr y) { return t_bin(TermOp::Join, std::move(x), std::move(y)); }
inline TermPtr t_meet(TermPtr x, TermPtr y) { return t_bin(TermOp::Meet, std::move(x), std::move(y)); }
inline TermPtr t_impl1(TermPtr x, TermPtr y) { return t_bin(TermOp::Impl1, std::move(x), std::move(y)); }

inline bool term_equal(const TermPtr& x, const TermPtr& y) {
    if (x == y) return true;
    if (!x || !y) return false;
    if (x->op != y->op || x->var != y->var) return false;
    return term_equal(x->a, y->a) && term_equal(x->b, y->b);
}

enum class RelOp { Equals, Leq };

struct Relation {
    TermPtr lhs;
    TermPtr rhs;
    RelOp rel = RelOp::Equals;
};

struct Hypothesis {
    bool negated = false; // metalogical NOT
    Relation relation;
};

struct Inference {
    std::vector<Hypothesis> hypotheses;
    Relation conclusion;
};

inline bool relation_equal(const Relation& x, const Relation& y) {
    return x.rel == y.rel && term_equal(x.lhs, y.lhs) && term_equal(x.rhs, y.rhs);
}
inline bool inference_equal(const Inference& x, const Inference& y) {
    if (x.hypotheses.size() != y.hypotheses.size()) return false;
    for (std::size_t i = 0; i < x.hypotheses.size(); ++i)
        if (x.hypotheses[i].negated != y.hypotheses[i].negated ||
            !relation_equal(x.hypotheses[i].relation, y.hypotheses[i].relation))
            return false;
    return relation_equal(x.conclusion, y.conclusion);
}

// ---------------------------------------------------------------------------
// Formatting. Binary operations are emitted fully parenthesized, so
// parse(format(x)) reproduces x. When a name table is supplied,
// variables print as the mapped node names (used for FAILED output).

inline std::string format_term(const TermPtr& t, const std::map<int, std::string>* names = nullptr) {
    switch (t->op) {
    case TermOp::Var:
        if (names) {
            auto it = names->find(t->var);
            if (it != names->end()) return it->second;
        }
        return std::string(1, static_cast<char>('a' + t->var));
    case TermOp::Zero: return "0";
    case TermOp::One: return "1";
    case TermOp::Comp: return format_term(t->a, names) + "'";
    default: break;
    }
    const char* op = "";
    switch (t->op) {
    case TermOp::Join: op = "v"; break;
    case TermOp::Meet: op = "^"; break;
    case TermOp::Impl0: op = "->0"; break;
    case TermOp::Impl1: op = "->1"; break;
    case TermOp::Impl2: op = "->2"; break;
    case TermOp::Impl3: op = "->3"; break;
    case TermOp::Impl4: op = "->4"; break;
    case TermOp::Impl5: op = "->5"; break;
    case TermOp::Biimp: op = "=="; break;
    default: break;
    }
    return "(" + format_term(t->a, names) + op + format_term(t->b, names) + ")";
}

inline std::string format_relation(const Relation& r, const std::map<int, std::string>* names = nullptr) {
    return format_term(r.lhs, names) + (r.rel == RelOp::Equals ? "=" : "<") +
           format_term(r.rhs, names);
}

inline std::string format_inference(const Inference& inf) {
    std::string out;
    for (std::size_t i = 0; i < inf.hypotheses.size(); ++i) {
        if (i) out += " & ";
        const auto& h = inf.hypotheses[i];
        out += h.negated ? "~(" + format_relation(h.relation) + ")" : format_relation(h.relation);
    }
    if (!inf.hypotheses.empty()) out += " => ";
    out += format_relation(inf.conclusion);
    return out;
}

// ---------------------------------------------------------------------------
// Parsing.

namespace detail {

struct EqParser {
    std::string_view src;
    std::size_t i = 0;

    void skip_ws() {
        while (i < src.size() && (src[i] == ' ' || src[i] == '\t')) ++i;
    }
    char peek() {
        skip_ws();
        return i < src.size() ? src[i] : '\0';
    }
    bool consume(char c) {
        if (peek() == c) {
            ++i;
            return true;
        }
        return false;
    }

    std::optional<TermOp> binop() {
        skip_ws();
        if (i >= src.size()) return std::nullopt;
        switch (src[i]) {
        case 'v': ++i; return TermOp::Join;
        case '^': ++i; return TermOp::Meet;
        case '=':
            if (i + 1 < src.size() && src[i + 1] == '=') {
                i += 2;
                return TermOp::Biimp;
            }
            return std::nullopt;
        case '-': {
            if (i + 2 >= src.size() || src[i + 1] != '>')
                throw parse_error("unknown token '-'", i);
            const char k = src[i + 2];
            if (k < '0' || k > '5')
                throw parse_error("implication index must be 0-5", i + 2);
            i += 3;
            return static_cast<TermOp>(static_cast<int>(TermOp::Impl0) + (k - '0'));
        }
        default: return std::nullopt;
        }
    }

    TermPtr primary() {
        const char c = peek();
        TermPtr t;
        if (c == '(') {
            ++i;
            t = term();
            if (!consume(')')) throw parse_error("unbalanced parentheses", i);
        } else if (c >= 'a' && c <= 'z' && c != 'v') {
            ++i;
            t = t_var(c);
        } else if (c == '0') {
            ++i;
            t = t_zero();
        } else if (c == '1') {
            ++i;
            t = t_one();
        } else if (c >= 'A' && c <= 'Z') {
            throw parse_error("variable must be a lowercase letter a-z", i);
        } else if (c == '\0') {
            throw parse_error("unexpected end of input", i);
        } else {
            throw parse_error(std::string("unknown token '") + c + "'", i);
        }
        while (consume('\'')) t = t_comp(std::move(t));
        return t;
    }

    TermPtr term() {
        TermPtr lhs = primary();
        const std::size_t mark = i;
        if (auto op = binop()) {
            TermPtr rhs = primary();
            lhs = t_bin(*op, std::move(lhs), std::move(rhs));
            while (consume('\'')) lhs = t_comp(std::move(lhs));
            skip_ws();
            if (i < src.size() && (src[i] == 'v' || src[i] == '^' ||
                                   (src[i] == '-' && i + 1 < src.size() && src[i + 1] == '>')))
                throw parse_error("chained operators need parentheses", i);
        } else {
            i = mark;
        }
        return lhs;
    }

    Relation relation() {
        Relation r;
        r.lhs = term();
        const char c = peek();
        if (c == '=') {
            if (i + 1 < src.size() && src[i + 1] == '=')
                throw parse_error("'==' is a term operator; the relation is '='", i);
            ++i;
            r.rel = RelOp::Equals;
        } else if (c == '<') {
            ++i;
            r.rel = RelOp::Leq;
        } else {
            throw parse_error("missing relation '=' or '<'", i);
        }
        r.rhs = term();
        return r;
    }

    Hypothesis hypothesis() {
        Hypothesis h;
        h.negated = consume('~');
        if (peek() == '(') {
            const std::size_t mark = i;
            try {
                ++i;
                h.relation = relation();
                if (!consume(')')) throw parse_error("unbalanced parentheses", i);
                return h;
            } catch (const parse_error&) {
                i = mark; // the '(' opened a term, not a relation
            }
        }
        h.relation = relation();
        return h;
    }

    bool has_arrow_ahead() {
        for (std::size_t j = i; j + 1 < src.size(); ++j)
            if (src[j] == '=' && src[j + 1] == '>') return true;
        return false;
    }

    Inference inference() {
        Inference inf;
        if (has_arrow_ahead()) {
            inf.hypotheses.push_back(hypothesis());
            while (consume('&')) inf.hypotheses.push_back(hypothesis());
            skip_ws();
            if (!(i + 1 < src.size() && src[i] == '=' && src[i + 1] == '>'))
                throw parse_error("expected '=>' after hypotheses", i);
            i += 2;
        }
        inf.conclusion = relation();
        skip_ws();
        if (i < src.size()) throw parse_error("trailing input after inference", i);
        return inf;
    }
};

} // namespace detail

inline Inference parse_inference(std::string_view src) {
    detail::EqParser p{src};
    return p.inference();
}

inline Relation parse_relation(std::string_view src) {
    detail::EqParser p{src};
    Relation r = p.relation();
    p.skip_ws();
    if (p.i < src.size()) throw parse_error("trailing input after relation", p.i);
    return r;
}

// Distinct variables in first-occurrence order, scanning hypotheses
// then the conclusion; this order drives the checker's loop nesting.
inline std::vector<int> variables(const Inference& inf) {
    std::vector<int> order;
    std::vector<char> seen(26, 0);
    auto walk_term = [&](auto&& self, const TermPtr& t) -> void {
        if (!t) return;
        if (t->op == TermOp::Var) {
            if (!seen[static_cast<std::size_t>(t->var)]) {
                seen[static_cast<std::size_t>(t->var)] = 1;
                order.push_back(t->var);
            }
            return;
        }
        self(self, t->a);
        self(self, t->b);
    };
    auto walk_rel = [&](const Relation& r) {
        walk_term(walk_term, r.lhs);
        walk_term(walk_term, r.rhs);
    };
    for (const auto& h : inf.hypotheses) walk_rel(h.relation);
    walk_rel(inf.conclusion);
    return order;
}

// ---------------------------------------------------------------------------
// Built-in laws.

namespace detail {

// x ==(k) y of the nOA family, with aux = the law's third variable and
// vars[j] the j-th variable overall (0-based).
inline TermPtr noa_equiv(int k, const TermPtr& x, const TermPtr& y,
                         const std::vector<TermPtr>& vars) {
    const TermPtr& a3 = vars[2];
    if (k == 3)
        return t_join(t_meet(t_impl1(x, a3), t_impl1(y, a3)),
                      t_meet(t_impl1(t_comp(x), a3), t_impl1(t_comp(y), a3)));
    const TermPtr& ak = vars[static_cast<std::size_t>(k - 1)];
    return t_join(noa_equiv(k - 1, x, y, vars),
                  t_meet(noa_equiv(k - 1, x, ak, vars), noa_equiv(k - 1, y, ak, vars)));
}

} // namespace detail

// Named law families:
//   modular        a u (b n (a u c)) = (a u b) n (a u c)
//   distributive   a n (b u c) = (a n b) u (a n c)
//   orthomodular   a u (a' n (a u b)) = a u b
//   godowski n>=3  (a1 ->1 a2) n ... n (an ->1 a1) <= a1 ->1 an
//   oa6            the 6-variable orthoarguesian inference
//   noa n>=4       (a1 ->1 a3) n (a1 ==(n) a2) <= a2 ->1 a3
inline Inference builtin(const std::string& name, std::optional<int> n = std::nullopt) {
    Inference inf;
    const auto a = t_var('a'), b = t_var('b'), c = t_var('c');
    if (name == "modular") {
        inf.conclusion = {t_join(a, t_meet(b, t_join(a, c))),
                          t_meet(t_join(a, b), t_join(a, c)), RelOp::Equals};
        return inf;
    }
    if (name == "distributive") {
        inf.conclusion = {t_meet(a, t_join(b, c)), t_join(t_meet(a, b), t_meet(a, c)),
                          RelOp::Equals};
        return inf;
    }
    if (name == "orthomodular") {
        inf.conclusion = {t_join(a, t_meet(t_comp(a), t_join(a, b))), t_join(a, b),
                          RelOp::Equals};
        return inf;
    }
    if (name == "godowski") {
        if (!n || *n < 3 || *n > 26) throw std::invalid_argument("godowski requires 3 <= n <= 26");
        std::vector<TermPtr> v;
        for (int i = 0; i < *n; ++i) v.push_back(t_var(static_cast<char>('a' + i)));
        TermPtr lhs = t_impl1(v[0], v[1]);
        for (int i = 1; i < *n; ++i)
            lhs = t_meet(std::move(lhs), t_impl1(v[static_cast<std::size_t>(i)],
                                                 v[static_cast<std::size_t>((i + 1) % *n)]));
        inf.conclusion = {std::move(lhs), t_impl1(v[0], v[static_cast<std::size_t>(*n - 1)]),
                          RelOp::Leq};
        return inf;
    }
    if (name == "oa6") {
        const auto d = t_var('d'), e = t_var('e'), f = t_var('f');
        inf.hypotheses = {{false, {a, t_comp(b), RelOp::Leq}},
                          {false, {c, t_comp(d), RelOp::Leq}},
                          {false, {e, t_comp(f), RelOp::Leq}}};
        TermPtr lhs = t_meet(t_meet(t_join(a, b), t_join(c, d)), t_join(e, f));
        TermPtr inner = t_meet(t_meet(t_join(a, c), t_join(b, d)),
                               t_join(t_meet(t_join(a, e), t_join(b, f)),
                                      t_meet(t_join(c, e), t_join(d, f))));
        TermPtr rhs = t_join(b, t_meet(a, t_join(c, std::move(inner))));
        inf.conclusion = {std::move(lhs), std::move(rhs), RelOp::Leq};
        return inf;
    }
    if (name == "noa") {
        if (!n || *n < 4 || *n > 26) throw std::invalid_argument("noa requires 4 <= n <= 26");
        std::vector<TermPtr> v;
        for (int i = 0; i < *n; ++i) v.push_back(t_var(static_cast<char>('a' + i)));
        inf.conclusion = {t_meet(t_impl1(v[0], v[2]), detail::noa_equiv(*n, v[0], v[1], v)),
                          t_impl1(v[1], v[2]), RelOp::Leq};
        return inf;
    }
    throw std::invalid_argument("unknown builtin law: " + name);
}

} // namespace greechie
