#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "hdlog/dred.hpp"
#include "hdlog/gen.hpp"
#include "hdlog/parser.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitInvariant = 3;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot write " + path);
    out << content;
}

std::string dump_facts(const hdlog::Vocabulary& vocab, const hdlog::FactSet& facts) {
    std::string out;
    for (const hdlog::Fact& f : hdlog::sorted_facts(vocab, facts))
        out += hdlog::to_string(vocab, f) + ".\n";
    return out;
}

hdlog::FactSet store_facts(const hdlog::FactStore& store) {
    hdlog::FactSet out;
    for (const hdlog::Fact& f : store.facts())
        out.insert(f);
    return out;
}

struct CommonArgs {
    std::string program_path;
    std::string facts_path;
    std::string mode_name = "combined";
    std::string out_path;
    std::string stats_path;

    void add_to(CLI::App& cmd, bool facts_required = true) {
        cmd.add_option("--program", program_path, "rule file (.dl)")->required();
        auto* facts = cmd.add_option("--facts", facts_path, "explicit fact file");
        if (facts_required)
            facts->required();
        cmd.add_option("--mode", mode_name, "standard | hd | combined (default combined)");
        cmd.add_option("--out", out_path, "write the resulting materialisation here");
        cmd.add_option("--stats", stats_path, "relation statistics file overriding the sample");
    }

    hdlog::EngineOptions options(hdlog::Vocabulary& vocab) const {
        hdlog::EngineOptions options;
        auto mode = hdlog::parse_mode(mode_name);
        if (!mode)
            throw InputError("unknown mode '" + mode_name + "'");
        options.mode = *mode;
        if (!stats_path.empty())
            options.stats_override = hdlog::parse_stats(read_file(stats_path), vocab);
        return options;
    }
};

void print_assignment(const hdlog::MaterialisationState& state) {
    std::cout << "mode=" << hdlog::to_string(state.options.mode) << "\n";
    std::cout << "rules=" << state.program.rules.size() << "\n";
    for (size_t i = 0; i < state.program.rules.size(); ++i) {
        const auto& rule = state.program.rules[i];
        std::cout << "rule_" << rule.id << "_engine="
                  << (state.assignment[i] == hdlog::RuleEngine::Hd ? "hd" : "std") << "\n";
        if (state.assignment[i] == hdlog::RuleEngine::Hd)
            std::cout << "rule_" << rule.id << "_width=" << hdlog::width(state.node_stores[i].hd)
                      << "\n";
    }
}

void print_sizes(const hdlog::MaterialisationState& state) {
    const size_t total = state.store.size();
    const size_t explicit_count = state.explicit_facts().size();
    std::cout << "explicit=" << explicit_count << "\n";
    std::cout << "derived=" << total - explicit_count << "\n";
    std::cout << "total=" << total << "\n";
    std::cout << "substitutions_considered=" << state.counters.substitutions << "\n";
}

void print_report(const hdlog::UpdateReport& report, const std::string& prefix) {
    for (const std::string& line : report.report_lines())
        std::cout << prefix << line << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"Datalog materialisation and incremental maintenance engine"};
    app.require_subcommand(1);
    uint64_t global_seed = 1;
    app.add_option("--seed", global_seed, "random seed for generators");

    CommonArgs mat_args;
    auto* mat_cmd = app.add_subcommand("mat", "materialise a program over explicit facts");
    mat_args.add_to(*mat_cmd);

    CommonArgs upd_args;
    std::string add_path, del_path;
    auto* upd_cmd = app.add_subcommand("update", "materialise, then apply an incremental update");
    upd_args.add_to(*upd_cmd);
    upd_cmd->add_option("--add", add_path, "facts to add");
    upd_cmd->add_option("--del", del_path, "facts to delete");

    CommonArgs dec_args;
    auto* dec_cmd = app.add_subcommand("decompose", "print each rule's hypertree decomposition");
    dec_args.add_to(*dec_cmd, /*facts_required=*/false);

    CommonArgs chk_args;
    auto* chk_cmd = app.add_subcommand("check", "verify the maintained state against a rerun");
    chk_args.add_to(*chk_cmd);

    auto* gen_cmd = app.add_subcommand("gen", "emit a benchmark instance");
    gen_cmd->require_subcommand(1);
    hdlog::CollabParams collab;
    std::string collab_prefix = "collab";
    auto* collab_cmd = gen_cmd->add_subcommand("collab", "collaboration benchmark");
    collab_cmd->add_option("--n", collab.n, "number of collaborating groups")->required();
    collab_cmd->add_option("--k", collab.k, "documents per group")->required();
    collab_cmd->add_option("--out-prefix", collab_prefix, "output path prefix");
    hdlog::ExpParams exp;
    std::string exp_prefix = "exp";
    auto* exp_cmd = gen_cmd->add_subcommand("exp", "expression-evaluation benchmark");
    exp_cmd->add_option("--num-expressions", exp.num_expressions, "expression tree count")
        ->required();
    exp_cmd->add_option("--num-value-sets", exp.num_value_sets, "variable assignment count")
        ->required();
    exp_cmd->add_option("--max-depth", exp.max_depth, "tree depth bound")->required();
    auto* exp_seed = exp_cmd->add_option("--seed", exp.seed, "generator seed");
    exp_cmd->add_option("--out-prefix", exp_prefix, "output path prefix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    if (mat_cmd->parsed()) {
        hdlog::Vocabulary vocab;
        hdlog::Program program = hdlog::parse_program(read_file(mat_args.program_path), vocab);
        std::vector<hdlog::Fact> facts =
            hdlog::parse_facts(read_file(mat_args.facts_path), vocab);
        hdlog::EngineOptions options = mat_args.options(vocab);
        hdlog::UpdateReport report;
        hdlog::MaterialisationState state =
            hdlog::materialise(std::move(vocab), std::move(program), facts, options, &report);
        print_assignment(state);
        print_sizes(state);
        print_report(report, "");
        if (!mat_args.out_path.empty())
            write_file(mat_args.out_path, dump_facts(state.vocab, store_facts(state.store)));
        return 0;
    }

    if (upd_cmd->parsed()) {
        hdlog::Vocabulary vocab;
        hdlog::Program program = hdlog::parse_program(read_file(upd_args.program_path), vocab);
        std::vector<hdlog::Fact> facts =
            hdlog::parse_facts(read_file(upd_args.facts_path), vocab);
        hdlog::UpdateRequest request;
        if (!add_path.empty())
            request.adds = hdlog::parse_facts(read_file(add_path), vocab);
        if (!del_path.empty())
            request.dels = hdlog::parse_facts(read_file(del_path), vocab);
        hdlog::EngineOptions options = upd_args.options(vocab);
        hdlog::MaterialisationState state =
            hdlog::materialise(std::move(vocab), std::move(program), facts, options);
        print_assignment(state);
        hdlog::UpdateReport report;
        hdlog::apply_update(state, request, &report);
        print_report(report, "");
        print_sizes(state);
        if (!upd_args.out_path.empty())
            write_file(upd_args.out_path, dump_facts(state.vocab, store_facts(state.store)));
        return 0;
    }

    if (dec_cmd->parsed()) {
        hdlog::Vocabulary vocab;
        hdlog::Program program = hdlog::parse_program(read_file(dec_args.program_path), vocab);
        std::vector<hdlog::Fact> facts;
        if (!dec_args.facts_path.empty())
            facts = hdlog::parse_facts(read_file(dec_args.facts_path), vocab);
        hdlog::EngineOptions options = dec_args.options(vocab);
        hdlog::RelationStats stats;
        if (options.stats_override) {
            stats = *options.stats_override;
        } else {
            stats = hdlog::RelationStats::from_facts(facts, vocab);
            stats.fill_missing(program, vocab, options.default_tuples);
        }
        for (const hdlog::Rule& rule : program.rules) {
            hdlog::HypertreeDecomposition hd = hdlog::decompose(vocab, rule, stats);
            std::cout << "rule=" << rule.id << " complex=" << (hdlog::is_complex(rule) ? 1 : 0)
                      << " width=" << hdlog::width(hd) << "\n";
            std::cout << hdlog::dump_decomposition(vocab, rule, hd);
        }
        return 0;
    }

    if (chk_cmd->parsed()) {
        hdlog::Vocabulary vocab;
        hdlog::Program program = hdlog::parse_program(read_file(chk_args.program_path), vocab);
        std::vector<hdlog::Fact> facts =
            hdlog::parse_facts(read_file(chk_args.facts_path), vocab);
        hdlog::EngineOptions options = chk_args.options(vocab);
        hdlog::MaterialisationState state =
            hdlog::materialise(std::move(vocab), std::move(program), facts, options);
        print_assignment(state);
        print_sizes(state);
        const std::string err = hdlog::check_state(state);
        if (!err.empty()) {
            std::cerr << "check failed: " << err << "\n";
            return kExitInvariant;
        }
        std::cout << "check=ok\n";
        return 0;
    }

    if (collab_cmd->parsed()) {
        hdlog::GeneratedInstance inst = hdlog::gen_collab(collab);
        write_file(collab_prefix + ".dl", inst.program_text);
        write_file(collab_prefix + ".facts", inst.facts_text);
        std::cout << "program=" << collab_prefix << ".dl\n";
        std::cout << "facts=" << collab_prefix << ".facts\n";
        return 0;
    }
    if (exp_cmd->parsed()) {
        if (exp_seed->count() == 0)
            exp.seed = global_seed;
        hdlog::GeneratedInstance inst = hdlog::gen_exp(exp);
        write_file(exp_prefix + ".dl", inst.program_text);
        write_file(exp_prefix + ".facts", inst.facts_text);
        std::cout << "program=" << exp_prefix << ".dl\n";
        std::cout << "facts=" << exp_prefix << ".facts\n";
        return 0;
    }
    return kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const hdlog::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitInput;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::logic_error& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
