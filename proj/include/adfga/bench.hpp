// SPDX-License-Identifier: Apache-2.0
//
// Seeded comparison harness: ADF-GA vs classic-fitness GA vs random testing
// on a corpus directory, plus the epsilon sweep. Every repetition k of every
// approach runs with seed seed_base + k; RT's budget equals the paired
// ADF-GA run's execution count. Rows are emitted in deterministic order.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adfga/report.hpp"

namespace adfga {

struct BenchResult {
    std::string program;
    std::string approach;  // "ADF-GA", "GA-classic", "RT"
    int repetitions = 0;
    double mean_total_generations = 0;
    double mean_first_best_generation = 0;
    double mean_n_coverage = 0;
    double mean_m_coverage = 0;
    // ADF-GA rows only: mean generations until the classic run's final
    // N_dup coverage is matched (total generations charged when never).
    std::optional<double> generations_to_match_classic_best;
};

struct SweepRow {
    std::string program;
    double epsilon = 0;
    int repetitions = 0;
    double mean_n_coverage = 0;
    double mean_m_coverage = 0;
    double mean_total_generations = 0;
};

struct BenchOptions {
    GaConfig base;  // epsilon/pop/pm/max_gen/stall/step_limit; rng_seed = seed base
    int repetitions = 20;
    std::vector<double> sweep_epsilons;  // empty = no sweep
};

struct BenchRun {  // one raw cell, for the JSONL dump
    std::string program;
    std::string approach;
    std::string phase;  // "compare" or "sweep"
    int repetition = 0;
    std::uint64_t seed = 0;
    double epsilon = 0;
    RunReport report;
};

struct BenchOutput {
    std::vector<BenchResult> results;
    std::vector<SweepRow> sweep;
    std::vector<BenchRun> runs;
    std::vector<std::string> skipped;  // "path: reason"
};

namespace detail {

inline int generations_to_reach(const RunReport& adfga_report, size_t target_n) {
    for (const auto& g : adfga_report.generations)
        if (static_cast<size_t>(g.union_covered_n) >= target_n) return g.generation;
    return adfga_report.total_generations;
}

struct Aggregate {
    double gens = 0, first_best = 0, n_cov = 0, m_cov = 0;
    int count = 0;

    void add(const RunReport& r) {
        gens += r.total_generations;
        first_best += r.first_best_generation;
        n_cov += r.n_coverage();
        m_cov += r.m_coverage();
        ++count;
    }
    BenchResult finish(const std::string& program, const std::string& approach) const {
        BenchResult row;
        row.program = program;
        row.approach = approach;
        row.repetitions = count;
        row.mean_total_generations = gens / count;
        row.mean_first_best_generation = first_best / count;
        row.mean_n_coverage = n_cov / count;
        row.mean_m_coverage = m_cov / count;
        return row;
    }
};

}  // namespace detail

// Runs the three-way comparison (and optional sweep) for one analyzed
// program. Exposed separately so the acceptance suite can drive it without
// touching the filesystem.
inline void bench_program(const Analysis& analysis, const std::string& program_name, const BenchOptions& opt,
                          BenchOutput& out) {
    GaProgram program{&analysis.cfg, analysis.index.get(), &analysis.dups, analysis.default_entry()};

    detail::Aggregate agg_adfga, agg_classic, agg_rt;
    double match_sum = 0;
    for (int rep = 0; rep < opt.repetitions; ++rep) {
        std::uint64_t seed = opt.base.rng_seed + static_cast<std::uint64_t>(rep);
        GaConfig cfg = opt.base;
        cfg.rng_seed = seed;

        cfg.fitness_mode = FitnessMode::AdfGa;
        RunReport adfga_report = evolve(program, cfg);

        cfg.fitness_mode = FitnessMode::Classic;
        RunReport classic_report = evolve(program, cfg);

        GaConfig rt_cfg = opt.base;
        rt_cfg.rng_seed = seed;
        RunReport rt_report = random_baseline(program, rt_cfg, adfga_report.total_executions);

        match_sum += detail::generations_to_reach(adfga_report, classic_report.covered.size());
        agg_adfga.add(adfga_report);
        agg_classic.add(classic_report);
        agg_rt.add(rt_report);

        out.runs.push_back({program_name, "ADF-GA", "compare", rep, seed, opt.base.epsilon, std::move(adfga_report)});
        out.runs.push_back({program_name, "GA-classic", "compare", rep, seed, 0.0, std::move(classic_report)});
        out.runs.push_back({program_name, "RT", "compare", rep, seed, 0.0, std::move(rt_report)});
    }
    BenchResult adfga_row = agg_adfga.finish(program_name, "ADF-GA");
    adfga_row.generations_to_match_classic_best = match_sum / opt.repetitions;
    out.results.push_back(adfga_row);
    out.results.push_back(agg_classic.finish(program_name, "GA-classic"));
    out.results.push_back(agg_rt.finish(program_name, "RT"));

    for (double eps : opt.sweep_epsilons) {
        detail::Aggregate agg;
        for (int rep = 0; rep < opt.repetitions; ++rep) {
            GaConfig cfg = opt.base;
            cfg.rng_seed = opt.base.rng_seed + static_cast<std::uint64_t>(rep);
            cfg.fitness_mode = FitnessMode::AdfGa;
            cfg.epsilon = eps;
            RunReport r = evolve(program, cfg);
            agg.add(r);
            out.runs.push_back({program_name, "ADF-GA", "sweep", rep, cfg.rng_seed, eps, std::move(r)});
        }
        SweepRow row;
        row.program = program_name;
        row.epsilon = eps;
        row.repetitions = agg.count;
        row.mean_n_coverage = agg.n_cov / agg.count;
        row.mean_m_coverage = agg.m_cov / agg.count;
        row.mean_total_generations = agg.gens / agg.count;
        out.sweep.push_back(row);
    }
}

inline BenchOutput bench_directory(const std::string& dir, const BenchOptions& opt,
                                   const std::function<void(const std::string&)>& log = {}) {
    std::vector<std::string> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".sol") files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());

    BenchOutput out;
    for (const auto& path : files) {
        std::string name = std::filesystem::path(path).stem().string();
        try {
            Analysis analysis = analyze_file(path);
            if (analysis.dups.all.empty()) {
                out.skipped.push_back(path + ": no def-use pairs");
                continue;
            }
            if (log) log("bench: " + name);
            bench_program(analysis, name, opt, out);
        } catch (const Error& e) {
            out.skipped.push_back(path + ": " + e.what());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV / JSONL rendering
// ---------------------------------------------------------------------------

namespace detail {

inline std::string csv_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace detail

inline std::string bench_results_csv(const std::vector<BenchResult>& rows) {
    std::string out =
        "program,approach,repetitions,mean_total_generations,mean_first_best_generation,"
        "mean_n_coverage,mean_m_coverage,generations_to_match_classic_best\n";
    for (const auto& r : rows) {
        out += r.program + ',' + r.approach + ',' + std::to_string(r.repetitions) + ',' +
               detail::csv_double(r.mean_total_generations) + ',' +
               detail::csv_double(r.mean_first_best_generation) + ',' + detail::csv_double(r.mean_n_coverage) +
               ',' + detail::csv_double(r.mean_m_coverage) + ',' +
               (r.generations_to_match_classic_best ? detail::csv_double(*r.generations_to_match_classic_best)
                                                    : std::string()) +
               '\n';
    }
    return out;
}

inline std::string bench_sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "program,epsilon,repetitions,mean_n_coverage,mean_m_coverage,mean_total_generations\n";
    for (const auto& r : rows) {
        out += r.program + ',' + detail::csv_double(r.epsilon) + ',' + std::to_string(r.repetitions) + ',' +
               detail::csv_double(r.mean_n_coverage) + ',' + detail::csv_double(r.mean_m_coverage) + ',' +
               detail::csv_double(r.mean_total_generations) + '\n';
    }
    return out;
}

// One compact JSON object per run; enough to recompute every CSV mean.
inline std::string bench_runs_jsonl(const std::vector<BenchRun>& runs) {
    std::string out;
    for (const auto& r : runs) {
        Json j{{"program", r.program},
               {"approach", r.approach},
               {"phase", r.phase},
               {"repetition", r.repetition},
               {"seed", r.seed},
               {"epsilon", r.epsilon},
               {"total_generations", r.report.total_generations},
               {"first_best_generation", r.report.first_best_generation},
               {"best_fitness", r.report.best_fitness},
               {"covered_n", r.report.covered.size()},
               {"covered_m", r.report.covered_m_total},
               {"n_total", r.report.n_total},
               {"m_total", r.report.m_total},
               {"n_coverage", r.report.n_coverage()},
               {"m_coverage", r.report.m_coverage()},
               {"total_executions", r.report.total_executions},
               {"termination_reason", r.report.termination_reason}};
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace adfga
