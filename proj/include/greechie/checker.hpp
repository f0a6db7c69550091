#pragma once

// Evaluates an inference over a lattice across all variable
// assignments. Loops are nested in first-occurrence variable order;
// each hypothesis is tested at the innermost loop level binding all
// its variables, so a failing low-arity hypothesis prunes every deeper
// loop. Compound operator tables are built per lattice on first use.

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "greechie/eqparser.hpp"
#include "greechie/lattice.hpp"

namespace greechie {

// Dense n*n tables for the compound operations, built lazily.
class OperatorTables {
public:
    explicit OperatorTables(const Lattice& l) : l_(&l), n_(l.n) {
        join_ = flatten(l.join);
        meet_ = flatten(l.meet);
    }

    int n() const { return n_; }
    const Lattice& lattice() const { return *l_; }
    const std::vector<int>& join() const { return join_; }
    const std::vector<int>& meet() const { return meet_; }
    const std::vector<int>& ortho() const { return l_->ortho; }

    const std::vector<int>& table(TermOp op) {
        switch (op) {
        case TermOp::Join: return join_;
        case TermOp::Meet: return meet_;
        default: break;
        }
        auto& slot = compound_[static_cast<std::size_t>(op) - static_cast<std::size_t>(TermOp::Impl0)];
        if (slot.empty()) slot = build(op);
        return slot;
    }

    bool leq(int x, int y) const {
        return l_->leq[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] != 0;
    }

private:
    std::vector<int> flatten(const std::vector<std::vector<int>>& t) const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_));
        for (const auto& row : t) out.insert(out.end(), row.begin(), row.end());
        return out;
    }

    std::vector<int> build(TermOp op) const {
        std::vector<int> out(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_));
        auto jn = [&](int x, int y) { return join_[static_cast<std::size_t>(x * n_ + y)]; };
        auto mt = [&](int x, int y) { return meet_[static_cast<std::size_t>(x * n_ + y)]; };
        auto oc = [&](int x) { return l_->ortho[static_cast<std::size_t>(x)]; };
        for (int x = 0; x < n_; ++x)
            for (int y = 0; y < n_; ++y) {
                int r = 0;
                switch (op) {
                case TermOp::Impl0: r = jn(oc(x), y); break;
                case TermOp::Impl1: r = jn(oc(x), mt(x, y)); break;
                case TermOp::Impl2: r = jn(y, mt(oc(x), oc(y))); break;
                case TermOp::Impl3:
                    r = jn(jn(mt(oc(x), y), mt(oc(x), oc(y))), mt(x, jn(oc(x), y)));
                    break;
                case TermOp::Impl4:
                    r = jn(jn(mt(x, y), mt(oc(x), y)), mt(jn(oc(x), y), oc(y)));
                    break;
                case TermOp::Impl5:
                    r = jn(jn(mt(x, y), mt(oc(x), y)), mt(oc(x), oc(y)));
                    break;
                case TermOp::Biimp: r = jn(mt(x, y), mt(oc(x), oc(y))); break;
                default: break;
                }
                out[static_cast<std::size_t>(x * n_ + y)] = r;
            }
        return out;
    }

    const Lattice* l_;
    int n_;
    std::vector<int> join_, meet_;
    std::vector<int> compound_[7]; // Impl0..Impl5, Biimp
};

namespace detail {

// Terms compiled to postfix programs over value slots.
struct Instr {
    enum Kind { PushVar, PushConst, Ortho, Binary } kind;
    int arg = 0;                     // slot for PushVar, node for PushConst
    const std::vector<int>* tab = nullptr; // for Binary
};

struct CompiledTerm {
    std::vector<Instr> code;

    int eval(const std::vector<int>& slots, const std::vector<int>& ortho,
             std::vector<int>& stack) const {
        stack.clear();
        for (const auto& ins : code) {
            switch (ins.kind) {
            case Instr::PushVar: stack.push_back(slots[static_cast<std::size_t>(ins.arg)]); break;
            case Instr::PushConst: stack.push_back(ins.arg); break;
            case Instr::Ortho: stack.back() = ortho[static_cast<std::size_t>(stack.back())]; break;
            case Instr::Binary: {
                const int y = stack.back();
                stack.pop_back();
                const int x = stack.back();
                stack.back() = (*ins.tab)[static_cast<std::size_t>(
                    x * static_cast<int>(ortho.size()) + y)];
                break;
            }
            }
        }
        return stack.back();
    }
};

inline void compile_term(const TermPtr& t, const std::vector<int>& slot_of_var,
                         OperatorTables& tables, CompiledTerm& out) {
    switch (t->op) {
    case TermOp::Var:
        out.code.push_back({Instr::PushVar, slot_of_var[static_cast<std::size_t>(t->var)], nullptr});
        return;
    case TermOp::Zero: out.code.push_back({Instr::PushConst, 0, nullptr}); return;
    case TermOp::One: out.code.push_back({Instr::PushConst, 1, nullptr}); return;
    case TermOp::Comp:
        compile_term(t->a, slot_of_var, tables, out);
        out.code.push_back({Instr::Ortho, 0, nullptr});
        return;
    default:
        compile_term(t->a, slot_of_var, tables, out);
        compile_term(t->b, slot_of_var, tables, out);
        out.code.push_back({Instr::Binary, 0, &tables.table(t->op)});
        return;
    }
}

struct CompiledRelation {
    CompiledTerm lhs, rhs;
    RelOp rel = RelOp::Equals;

    bool holds(const std::vector<int>& slots, OperatorTables& tables,
               std::vector<int>& stack) const {
        const int x = lhs.eval(slots, tables.ortho(), stack);
        const int y = rhs.eval(slots, tables.ortho(), stack);
        return rel == RelOp::Equals ? x == y : tables.leq(x, y);
    }
};

} // namespace detail

struct CheckCounters {
    std::uint64_t assignments_evaluated = 0;  // conclusion evaluations
    std::uint64_t hypothesis_early_exits = 0; // failed hypothesis tests
};

struct CheckResult {
    bool passed = true;
    std::map<int, int> assignment;  // variable -> node, on Failed
    std::string conclusion_text;    // conclusion with node names, on Failed
    CheckCounters counters;
};

// Pure bottom-up evaluation of one term under one assignment.
inline int eval_term(const Lattice& l, const TermPtr& t, const std::map<int, int>& assignment) {
    OperatorTables tables(l);
    std::vector<int> slot_of_var(26, -1);
    std::vector<int> slots;
    for (const auto& [var, node] : assignment) {
        slot_of_var[static_cast<std::size_t>(var)] = static_cast<int>(slots.size());
        slots.push_back(node);
    }
    auto walk = [&](auto&& self, const TermPtr& term) -> int {
        switch (term->op) {
        case TermOp::Var: {
            const int s = slot_of_var[static_cast<std::size_t>(term->var)];
            if (s < 0)
                throw std::invalid_argument(std::string("eval_term: unbound variable '") +
                                            static_cast<char>('a' + term->var) + "'");
            return slots[static_cast<std::size_t>(s)];
        }
        case TermOp::Zero: return 0;
        case TermOp::One: return 1;
        case TermOp::Comp: return l.ortho[static_cast<std::size_t>(self(self, term->a))];
        default: {
            const int x = self(self, term->a);
            const int y = self(self, term->b);
            return tables.table(term->op)[static_cast<std::size_t>(x * l.n + y)];
        }
        }
    };
    return walk(walk, t);
}

// Iterates every assignment of lattice nodes to the inference's
// variables; returns the first one (in loop order) where all
// hypotheses hold and the conclusion fails, else Passed.
inline CheckResult check(const Lattice& l, const Inference& inf, OperatorTables& tables) {
    CheckResult result;
    const auto vars = variables(inf);
    const int v = static_cast<int>(vars.size());

    std::vector<int> slot_of_var(26, -1);
    for (int s = 0; s < v; ++s) slot_of_var[static_cast<std::size_t>(vars[static_cast<std::size_t>(s)])] = s;

    // hypotheses grouped by the loop depth binding all their variables
    struct StagedHyp {
        detail::CompiledRelation rel;
        bool negated;
    };
    std::vector<std::vector<StagedHyp>> staged(static_cast<std::size_t>(v) + 1);
    for (const auto& h : inf.hypotheses) {
        StagedHyp sh;
        sh.negated = h.negated;
        detail::compile_term(h.relation.lhs, slot_of_var, tables, sh.rel.lhs);
        detail::compile_term(h.relation.rhs, slot_of_var, tables, sh.rel.rhs);
        sh.rel.rel = h.relation.rel;
        int depth = 0; // stage 0 runs before any loop opens
        auto scan = [&](auto&& self, const TermPtr& t) -> void {
            if (!t) return;
            if (t->op == TermOp::Var)
                depth = std::max(depth, slot_of_var[static_cast<std::size_t>(t->var)] + 1);
            self(self, t->a);
            self(self, t->b);
        };
        scan(scan, h.relation.lhs);
        scan(scan, h.relation.rhs);
        staged[static_cast<std::size_t>(depth)].push_back(std::move(sh));
    }
    detail::CompiledRelation conclusion;
    detail::compile_term(inf.conclusion.lhs, slot_of_var, tables, conclusion.lhs);
    detail::compile_term(inf.conclusion.rhs, slot_of_var, tables, conclusion.rhs);
    conclusion.rel = inf.conclusion.rel;

    std::vector<int> slots(static_cast<std::size_t>(v), 0);
    std::vector<int> stack;

    auto hyps_hold_at = [&](int depth) {
        for (const auto& sh : staged[static_cast<std::size_t>(depth)]) {
            if (sh.rel.holds(slots, tables, stack) == sh.negated) {
                ++result.counters.hypothesis_early_exits;
                return false;
            }
        }
        return true;
    };

    auto fail_with = [&](const std::vector<int>& assignment) {
        result.passed = false;
        std::map<int, std::string> names;
        for (int s = 0; s < v; ++s) {
            result.assignment[vars[static_cast<std::size_t>(s)]] = assignment[static_cast<std::size_t>(s)];
            names[vars[static_cast<std::size_t>(s)]] =
                node_name(l, assignment[static_cast<std::size_t>(s)]);
        }
        result.conclusion_text = format_relation(inf.conclusion, &names);
    };

    auto rec = [&](auto&& self, int depth) -> bool { // true: continue scanning
        if (depth == v) {
            ++result.counters.assignments_evaluated;
            if (!conclusion.holds(slots, tables, stack)) {
                fail_with(slots);
                return false;
            }
            return true;
        }
        for (int node = 0; node < l.n; ++node) {
            slots[static_cast<std::size_t>(depth)] = node;
            if (!hyps_hold_at(depth + 1)) continue;
            if (!self(self, depth + 1)) return false;
        }
        return true;
    };

    if (hyps_hold_at(0)) rec(rec, 0);
    return result;
}

inline CheckResult check(const Lattice& l, const Inference& inf) {
    OperatorTables tables(l);
    return check(l, inf, tables);
}

// ---------------------------------------------------------------------------
// Batch checking of a diagram file in the transcript format.

struct FileCheckEntry {
    int index = 0; // 1-based position among diagram lines
    std::optional<CheckResult> result;
    std::string error; // parse or paste failure, empty otherwise
    int alpha = 0, beta = 0, nodes = 0;
};

struct FileCheckReport {
    std::vector<std::string> lines; // transcript, header first
    std::vector<FileCheckEntry> entries;
    bool had_errors = false;
};

// Checks every diagram line of the input text against the inference.
// Output lines: "The input file has {N} lattices.", then one line per
// diagram, "Passed #k (a/b/n)" or "FAILED #k (a/b/n) at <conclusion>";
// a line that fails to parse or paste yields "ERROR #k ..." and the
// batch continues. jobs > 1 checks diagrams on that many threads;
// output order is input order either way.
inline FileCheckReport check_file(std::string_view text, const Inference& inf, int jobs = 1) {
    FileCheckReport report;
    const auto lines = diagram_lines(text);
    report.lines.push_back("The input file has " + std::to_string(lines.size()) + " lattices.");
    report.entries.resize(lines.size());

    std::vector<std::optional<Lattice>> lattices(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto& entry = report.entries[i];
        entry.index = static_cast<int>(i) + 1;
        try {
            const Diagram d = parse_diagram(lines[i].second);
            Lattice l = paste(d);
            entry.alpha = l.alpha;
            entry.beta = l.beta;
            entry.nodes = l.n;
            lattices[i] = std::move(l);
        } catch (const std::exception& e) {
            entry.error = std::string("line ") + std::to_string(lines[i].first) + ": " + e.what();
        }
    }

    auto run = [&](std::size_t i) {
        if (!lattices[i]) return;
        report.entries[i].result = check(*lattices[i], inf);
    };
    if (jobs <= 1) {
        for (std::size_t i = 0; i < lines.size(); ++i) run(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const int count = std::min<int>(jobs, static_cast<int>(lines.size()));
        for (int t = 0; t < count; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < lines.size(); i = next.fetch_add(1))
                    run(i);
            });
        for (auto& th : pool) th.join();
    }

    for (auto& entry : report.entries) {
        std::ostringstream line;
        if (!entry.error.empty()) {
            report.had_errors = true;
            line << "ERROR #" << entry.index << " " << entry.error;
        } else {
            const auto& r = *entry.result;
            const std::string counts = "(" + std::to_string(entry.alpha) + "/" +
                                       std::to_string(entry.beta) + "/" +
                                       std::to_string(entry.nodes) + ")";
            if (r.passed) line << "Passed #" << entry.index << " " << counts;
            else line << "FAILED #" << entry.index << " " << counts << " at " << r.conclusion_text;
        }
        report.lines.push_back(line.str());
    }
    return report;
}

} // namespace greechie
