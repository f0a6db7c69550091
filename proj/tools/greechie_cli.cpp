// Command-line front end: `greechie gen` streams connected
// Greechie-3-L diagrams, `greechie check` tests an equation or
// inference against every diagram in a file.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "greechie/checker.hpp"
#include "greechie/eqparser.hpp"
#include "greechie/generate.hpp"

namespace {

greechie::Inference law_by_name(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) return greechie::builtin(spec);
    const std::string name = spec.substr(0, colon);
    const int n = std::stoi(spec.substr(colon + 1));
    return greechie::builtin(name, n);
}

int run_gen(int blocks, std::optional<int> max_atoms, bool foot_free,
            const std::string& part_spec, const std::string& output_path) {
    greechie::GenerationConfig cfg;
    cfg.beta = blocks;
    cfg.max_atoms = max_atoms;
    cfg.foot_free_only = foot_free;
    if (!part_spec.empty()) {
        const auto slash = part_spec.find('/');
        if (slash == std::string::npos) {
            std::cerr << "error: --part expects R/K\n";
            return 1;
        }
        cfg.part = {std::stoi(part_spec.substr(0, slash)), std::stoi(part_spec.substr(slash + 1))};
    }
    try {
        cfg.check();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!output_path.empty() && output_path != "-") {
        file.open(output_path);
        if (!file) {
            std::cerr << "error: cannot open " << output_path << " for writing\n";
            return 2;
        }
        out = &file;
    }

    std::uint64_t count = 0;
    greechie::generate(cfg, [&](const greechie::Diagram& d) {
        *out << greechie::format_diagram(d) << '\n';
        ++count;
    });
    out->flush();
    std::cerr << count << " diagram" << (count == 1 ? "" : "s") << '\n';
    return 0;
}

int run_check(const std::string& input_path, const std::string& equation,
              const std::string& law, bool verbose, int jobs) {
    greechie::Inference inf;
    try {
        inf = law.empty() ? greechie::parse_inference(equation) : law_by_name(law);
    } catch (const std::exception& e) {
        std::cerr << "error: bad equation: " << e.what() << '\n';
        return 2;
    }

    std::string text;
    if (input_path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        text = buf.str();
    } else {
        std::ifstream file(input_path);
        if (!file) {
            std::cerr << "error: cannot open " << input_path << '\n';
            return 2;
        }
        std::ostringstream buf;
        buf << file.rdbuf();
        text = buf.str();
    }

    const auto report = greechie::check_file(text, inf, jobs);
    for (const auto& line : report.lines) std::cout << line << '\n';
    if (verbose) {
        for (const auto& entry : report.entries)
            if (entry.result)
                std::cerr << "# #" << entry.index << ": "
                          << entry.result->counters.assignments_evaluated << " assignments, "
                          << entry.result->counters.hypothesis_early_exits
                          << " hypothesis early-exits\n";
    }
    return report.had_errors ? 2 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Greechie-3-L diagram generator and orthomodular lattice equation checker"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "generate connected Greechie-3-L diagrams");
    int blocks = 1;
    gen->add_option("-b,--blocks", blocks, "number of blocks")->required();
    std::optional<int> max_atoms;
    gen->add_option("-a,--max-atoms", max_atoms, "upper bound on the number of atoms");
    bool foot_free = false;
    gen->add_flag("--foot-free", foot_free, "emit only diagrams without feet");
    std::string part_spec;
    gen->add_option("--part", part_spec, "R/K: produce only residue class R of K disjoint parts");
    std::string output_path;
    gen->add_option("-o,--output", output_path, "output file (default: stdout)");

    auto* check = app.add_subcommand("check", "check an equation against a diagram file");
    std::string input_path;
    check->add_option("-i,--input", input_path, "diagram file, one diagram per line")->required();
    std::string equation;
    check->add_option("equation", equation,
                      "inference, e.g. \"(av(b^(avc)))=((avb)^(avc))\"; see --help-grammar");
    std::string law;
    check->add_option("--law", law,
                      "built-in law: modular, distributive, orthomodular, godowski:N, oa6, noa:N");
    bool verbose = false;
    check->add_flag("-v,--verbose", verbose, "print per-lattice evaluation counters to stderr");
    int jobs = 1;
    check->add_option("-j,--jobs", jobs, "check lattices on this many threads")
        ->check(CLI::PositiveNumber);

    bool grammar = false;
    check->add_flag("--help-grammar", grammar, "describe the equation grammar and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 1;
    }

    if (gen->parsed()) return run_gen(blocks, max_atoms, foot_free, part_spec, output_path);

    if (grammar) {
        std::cout <<
            "inference := [ hyp (\"&\" hyp)* \"=>\" ] relation\n"
            "hyp       := [\"~\"] \"(\" relation \")\" | [\"~\"] relation\n"
            "relation  := term (\"=\" | \"<\") term      -- \"<\" reads as less-or-equal\n"
            "term      := primary [ binop primary ]\n"
            "primary   := a-z | \"0\" | \"1\" | \"(\" term \")\", then postfix \"'\"\n"
            "binop     := \"v\" (join), \"^\" (meet), \"->0\"..\"->5\" (implications),\n"
            "             \"==\" (quantum biconditional)\n"
            "Binary operations are written fully parenthesized; one unparenthesized\n"
            "binop per term is accepted. \"~\" is metalogical NOT on a hypothesis.\n";
        return 0;
    }
    if (equation.empty() == law.empty()) {
        std::cerr << "error: provide exactly one of an equation string or --law\n";
        return 1;
    }
    return run_check(input_path, equation, law, verbose, jobs);
}
