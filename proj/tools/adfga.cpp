// SPDX-License-Identifier: Apache-2.0
//
// adfga — all-uses def-use coverage test generation for a Solidity-like
// contract subset.
//
//   adfga analyze  <file.sol> [--out json] [--emit-cfg dot]
//   adfga generate <file.sol> [--function f] [--fitness adfga|classic|random] ...
//   adfga bench    <corpus-dir> [--reps n] [--epsilon-sweep a:b:step] ...
//
// Exit codes: 0 success, 1 lex/parse/type error (or unreadable input),
// 2 analysis error, 3 entry function not found.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "adfga/bench.hpp"
#include "adfga/ga.hpp"
#include "adfga/pipeline.hpp"
#include "adfga/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFrontend = 1;
constexpr int kExitAnalysis = 2;
constexpr int kExitNoFunction = 3;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw adfga::SetupError("cannot write '" + path + "'");
    out << content;
}

std::string json_text(const adfga::Json& j) { return j.dump(2) + "\n"; }

int run_analyze(const std::string& path, const std::string& out_path, const std::string& cfg_path) {
    adfga::Analysis analysis = adfga::analyze_file(path);
    for (const auto& w : analysis.cfg.warnings) std::cerr << path << ": warning: " << w << "\n";
    std::string text = json_text(adfga::analysis_to_json(analysis));
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
    if (!cfg_path.empty()) write_file(cfg_path, adfga::cfg_to_dot(analysis.cfg));
    return kExitOk;
}

struct GenerateOptions {
    std::string path;
    std::string function;
    std::string fitness = "adfga";
    std::string out_path;
    std::string trace_path;
    adfga::GaConfig cfg;
};

void dump_trace(const adfga::Analysis& analysis, const adfga::RunReport& report, const std::string& entry,
                const std::string& trace_path) {
    adfga::Interpreter interp(analysis.cfg, *analysis.index, analysis.dups);
    std::string out;
    int case_idx = 0;
    for (const auto& member : report.suite) {
        adfga::CoverageRecord rec = interp.run(entry, member.tc, report.config.step_limit);
        for (const auto& ref : rec.executed_nodes) {
            adfga::Json line{{"case", case_idx}, {"function", ref.function}, {"node", ref.id}};
            out += line.dump();
            out += '\n';
        }
        ++case_idx;
    }
    write_file(trace_path, out);
}

int run_generate(const GenerateOptions& opt) {
    adfga::Analysis analysis = adfga::analyze_file(opt.path);
    if (analysis.index->function_order().empty()) {
        std::cerr << opt.path << ": error: the unit declares no functions\n";
        return kExitNoFunction;
    }
    std::string entry = opt.function.empty() ? analysis.default_entry() : opt.function;
    if (!analysis.index->find(entry)) {
        std::cerr << opt.path << ": error: function '" << entry << "' not found\n";
        return kExitNoFunction;
    }
    adfga::GaProgram program{&analysis.cfg, analysis.index.get(), &analysis.dups, entry};

    adfga::RunReport report;
    if (opt.fitness == "random") {
        long budget = static_cast<long>(opt.cfg.population_size) * opt.cfg.max_generations;
        report = adfga::random_baseline(program, opt.cfg, budget);
    } else {
        adfga::GaConfig cfg = opt.cfg;
        cfg.fitness_mode = opt.fitness == "classic" ? adfga::FitnessMode::Classic : adfga::FitnessMode::AdfGa;
        report = adfga::evolve(program, cfg);
    }

    std::string text = json_text(adfga::run_report_to_json(report, *analysis.index));
    std::ostringstream summary;
    summary << report.approach << ": coverage " << report.covered.size() << "/" << report.n_total << " N_dup, "
            << report.covered_m_total << "/" << report.m_total << " R_dup | generations "
            << report.total_generations << " (first best at " << report.first_best_generation
            << ") | executions " << report.total_executions << " | " << report.termination_reason << "\n";
    if (opt.out_path.empty()) {
        std::cout << text;
        std::cerr << summary.str();
    } else {
        write_file(opt.out_path, text);
        std::cout << summary.str();
    }
    if (!opt.trace_path.empty()) dump_trace(analysis, report, entry, opt.trace_path);
    return kExitOk;
}

std::vector<double> parse_sweep(const std::string& spec) {
    double a = 0, b = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(spec);
    if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0 || b < a)
        throw adfga::SetupError("bad sweep spec '" + spec + "' (want a:b:step with step > 0)");
    std::vector<double> out;
    for (double e = a; e <= b + 1e-9; e += step) out.push_back(e);
    return out;
}

int run_bench(const std::string& dir, adfga::BenchOptions opt, const std::string& sweep_spec,
              const std::string& out_dir) {
    if (!sweep_spec.empty()) opt.sweep_epsilons = parse_sweep(sweep_spec);
    adfga::BenchOutput out =
        adfga::bench_directory(dir, opt, [](const std::string& msg) { std::cerr << msg << "\n"; });
    for (const auto& s : out.skipped) std::cerr << "skipped " << s << "\n";
    if (out.results.empty()) {
        std::cerr << "error: no program could be benched in '" << dir << "'\n";
        return kExitAnalysis;
    }
    std::filesystem::create_directories(out_dir);
    write_file(out_dir + "/results.csv", adfga::bench_results_csv(out.results));
    if (!out.sweep.empty()) write_file(out_dir + "/sweep.csv", adfga::bench_sweep_csv(out.sweep));
    write_file(out_dir + "/runs.jsonl", adfga::bench_runs_jsonl(out.runs));
    std::cout << "benched " << out.results.size() / 3 << " program(s), " << out.runs.size()
              << " runs -> " << out_dir << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"all-uses def-use coverage test generation for a Solidity-like subset"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "extract variables, require sites and def-use pairs");
    std::string an_path, an_out, an_cfg;
    analyze->add_option("file", an_path, "contract source file")->required();
    analyze->add_option("--out", an_out, "write the JSON report here instead of stdout");
    analyze->add_option("--emit-cfg", an_cfg, "write a Graphviz DOT rendering of the CFG");

    // generate
    auto* generate = app.add_subcommand("generate", "evolve a def-use covering test suite");
    GenerateOptions gen;
    generate->add_option("file", gen.path, "contract source file")->required();
    generate->add_option("--function", gen.function, "entry function (default: first in file)");
    generate->add_option("--epsilon", gen.cfg.epsilon, "require-related pair weight")
        ->check(CLI::NonNegativeNumber);
    generate->add_option("--pop", gen.cfg.population_size, "population size")->check(CLI::Range(2, 1000000));
    generate->add_option("--pm", gen.cfg.mutation_prob, "per-bit mutation probability")
        ->check(CLI::Range(0.0, 1.0));
    generate->add_option("--seed", gen.cfg.rng_seed, "RNG seed");
    generate->add_option("--max-gen", gen.cfg.max_generations, "generation cap")
        ->check(CLI::Range(1, 1000000));
    generate->add_option("--stall", gen.cfg.stall_window, "stop after this many generations without improvement")
        ->check(CLI::Range(1, 1000000));
    generate->add_option("--step-limit", gen.cfg.step_limit, "interpreter step limit per execution")
        ->check(CLI::Range(1L, 1000000000L));
    generate->add_option("--fitness", gen.fitness, "adfga | classic | random")
        ->check(CLI::IsMember({"adfga", "classic", "random"}));
    generate->add_option("--out", gen.out_path, "write the run report here instead of stdout");
    generate->add_option("--trace", gen.trace_path, "dump executed (function, node) JSON lines for the suite");

    // bench
    auto* bench = app.add_subcommand("bench", "compare ADF-GA / GA-classic / RT over a corpus directory");
    std::string bench_dir, bench_sweep, bench_out = "bench-out";
    adfga::BenchOptions bench_opt;
    bench->add_option("corpus", bench_dir, "directory of .sol files")->required();
    bench->add_option("--reps", bench_opt.repetitions, "repetitions per approach")->check(CLI::Range(1, 100000));
    bench->add_option("--epsilon-sweep", bench_sweep, "sweep spec a:b:step for the weighted fitness");
    bench->add_option("--epsilon", bench_opt.base.epsilon, "epsilon for the comparison runs")
        ->check(CLI::NonNegativeNumber);
    bench->add_option("--seed", bench_opt.base.rng_seed, "seed base (run k uses seed base+k)");
    bench->add_option("--pop", bench_opt.base.population_size, "population size")->check(CLI::Range(2, 1000000));
    bench->add_option("--pm", bench_opt.base.mutation_prob, "per-bit mutation probability")
        ->check(CLI::Range(0.0, 1.0));
    bench->add_option("--max-gen", bench_opt.base.max_generations, "generation cap")->check(CLI::Range(1, 1000000));
    bench->add_option("--stall", bench_opt.base.stall_window, "stall window")->check(CLI::Range(1, 1000000));
    bench->add_option("--out", bench_out, "output directory (results.csv, sweep.csv, runs.jsonl)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze) return run_analyze(an_path, an_out, an_cfg);
        if (*generate) return run_generate(gen);
        if (*bench) return run_bench(bench_dir, bench_opt, bench_sweep, bench_out);
    } catch (const adfga::LexError& e) {
        std::cerr << e.format(*analyze ? an_path : gen.path) << "\n";
        return kExitFrontend;
    } catch (const adfga::ParseError& e) {
        std::cerr << e.format(*analyze ? an_path : gen.path) << "\n";
        return kExitFrontend;
    } catch (const adfga::TypeError& e) {
        std::cerr << e.format(*analyze ? an_path : gen.path) << "\n";
        return kExitFrontend;
    } catch (const adfga::SetupError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFrontend;
    } catch (const adfga::Error& e) {  // analysis/cfg/degenerate
        std::cerr << e.format(*analyze ? an_path : gen.path) << "\n";
        return kExitAnalysis;
    }
    return kExitOk;
}
