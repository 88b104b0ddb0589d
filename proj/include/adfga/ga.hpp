// SPDX-License-Identifier: Apache-2.0
//
// Genetic-algorithm test generation over binary sub-chromosomes.
//
// Encoding: one sub-chromosome per entry-function parameter; first bit is
// the type bit (0 uint, 1 int, fixed by the signature and never touched by
// any operator), the remaining width_bits are the value MSB-first (two's
// complement for signed values). Selection is roulette-wheel on cumulative
// probabilities, crossover is per-bit uniform exchange from position 2 on,
// mutation flips each value bit independently with probability P_m.
//
// The weighted fitness is ((n - m) + (1 + eps) * m) / N with n the covered
// pairs, m the covered require-related pairs and N the pair universe; the
// classic baseline is n / N. A run terminates when the suite archive's union
// covers every pair, when the best-ever fitness stalls, or at the
// generation cap. One elite (best-ever individual) is carried unchanged
// into every new population.
//
// The RNG feeds init/select/crossover/mutate in one fixed sequential order,
// so a (seed, config) pair fully determines the run.
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "adfga/interp.hpp"

namespace adfga {

enum class FitnessMode { AdfGa, Classic };

inline const char* fitness_mode_name(FitnessMode m) { return m == FitnessMode::AdfGa ? "adfga" : "classic"; }

struct SubChromosome {
    int type_bit = 0;                 // 0 = uint, 1 = int; immutable under all operators
    std::vector<uint8_t> value_bits;  // MSB first, length == width_bits

    size_t length() const { return value_bits.size() + 1; }
    friend bool operator==(const SubChromosome&, const SubChromosome&) = default;
};

struct Chromosome {
    std::vector<SubChromosome> subs;

    friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

struct GaConfig {
    double epsilon = 0.45;
    int population_size = 50;
    double mutation_prob = 0.01;
    int max_generations = 200;
    int stall_window = 10;
    FitnessMode fitness_mode = FitnessMode::AdfGa;
    std::uint64_t rng_seed = 1;
    long step_limit = 100000;
};

struct GenerationStats {
    int generation = 0;       // 1-based
    double best_fitness = 0;  // best individual of this generation (RT: best so far)
    double mean_fitness = 0;
    int covered_n = 0;  // pairs covered by that individual
    int covered_m = 0;
    bool new_best = false;
    int union_covered_n = 0;  // archive union after this generation
    int union_covered_m = 0;
};

struct SuiteMember {
    TestCase tc;
    std::set<PairKey> covered;
    double fitness = 0;
    int generation = 0;
};

struct RunReport {
    std::string program;
    std::string function;
    std::string approach;  // "ADF-GA", "GA-classic", "RT"
    GaConfig config;
    long budget = 0;  // RT only: allotted executions
    std::vector<GenerationStats> generations;
    int total_generations = 0;
    int first_best_generation = 0;  // generation where the final best fitness first appeared
    double best_fitness = 0;
    std::vector<SuiteMember> suite;
    std::vector<PairKey> covered;
    std::vector<PairKey> uncovered;
    std::size_t n_total = 0;          // N
    std::size_t m_total = 0;          // M
    std::size_t covered_m_total = 0;  // require-related pairs in the final union
    long total_executions = 0;
    int degenerate_selections = 0;  // generations where all-zero fitness forced uniform selection
    std::string termination_reason;

    double n_coverage() const { return n_total ? static_cast<double>(covered.size()) / n_total : 0.0; }
    double m_coverage() const {
        return m_total ? static_cast<double>(covered_m_total) / m_total : 1.0;  // vacuous when M = 0
    }
};

// Everything the engine needs about one program under test.
struct GaProgram {
    const Cfg* cfg = nullptr;
    const UnitIndex* index = nullptr;
    const DupSets* dups = nullptr;
    std::string entry;

    const FunctionScope& entry_scope() const { return index->at(entry); }
};

// ---------------------------------------------------------------------------
// Codecs
// ---------------------------------------------------------------------------

inline Chromosome encode(const TestCase& tc) {
    Chromosome ch;
    ch.subs.reserve(tc.values.size());
    for (const Value& v : tc.values) {
        SubChromosome sub;
        sub.type_bit = v.type.is_signed ? 1 : 0;
        sub.value_bits.resize(static_cast<size_t>(v.type.width_bits));
        for (int j = 0; j < v.type.width_bits; ++j) {
            int shift = v.type.width_bits - 1 - j;
            sub.value_bits[static_cast<size_t>(j)] = static_cast<uint8_t>((v.bits >> shift) & 1);
        }
        ch.subs.push_back(std::move(sub));
    }
    return ch;
}

inline TestCase decode(const Chromosome& ch, const std::vector<VarDecl>& params) {
    if (ch.subs.size() != params.size())
        throw ShapeError("chromosome has " + std::to_string(ch.subs.size()) + " sub-chromosome(s), signature has " +
                         std::to_string(params.size()) + " parameter(s)");
    TestCase tc;
    tc.values.reserve(params.size());
    for (size_t i = 0; i < params.size(); ++i) {
        const IntType& t = params[i].type;
        const SubChromosome& sub = ch.subs[i];
        if (static_cast<int>(sub.value_bits.size()) != t.width_bits)
            throw ShapeError("sub-chromosome " + std::to_string(i + 1) + " holds " +
                             std::to_string(sub.value_bits.size()) + " value bits; parameter '" + params[i].name +
                             "' needs " + std::to_string(t.width_bits));
        U256 bits = 0;
        for (uint8_t b : sub.value_bits) bits = (bits << 1) | (b ? 1 : 0);
        tc.values.push_back(make_value(t, bits));
    }
    return tc;
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

namespace detail {

inline Chromosome random_chromosome(const std::vector<VarDecl>& params, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> bit(0, 1);
    Chromosome ch;
    ch.subs.reserve(params.size());
    for (const auto& p : params) {
        SubChromosome sub;
        sub.type_bit = p.type.is_signed ? 1 : 0;
        sub.value_bits.resize(static_cast<size_t>(p.type.width_bits));
        for (auto& b : sub.value_bits) b = static_cast<uint8_t>(bit(rng));
        ch.subs.push_back(std::move(sub));
    }
    return ch;
}

}  // namespace detail

inline std::vector<Chromosome> init_population(const std::vector<VarDecl>& params, const GaConfig& cfg) {
    std::mt19937_64 rng(cfg.rng_seed);
    std::vector<Chromosome> pop;
    pop.reserve(static_cast<size_t>(cfg.population_size));
    for (int i = 0; i < cfg.population_size; ++i) pop.push_back(detail::random_chromosome(params, rng));
    return pop;
}

inline double fitness(const CoverageRecord& record, const DupSets& dups, const GaConfig& cfg) {
    if (dups.all.empty()) throw DegenerateError("program has no def-use pairs to cover");
    double n_covered = static_cast<double>(record.covered.size());
    double big_n = static_cast<double>(dups.all.size());
    if (cfg.fitness_mode == FitnessMode::Classic) return n_covered / big_n;
    std::set<PairKey> related;
    for (const auto& p : dups.all)
        if (p.require_related) related.insert(key_of(p));
    double m_covered = 0;
    for (const auto& k : record.covered)
        if (related.count(k)) m_covered += 1;
    return ((n_covered - m_covered) + (1.0 + cfg.epsilon) * m_covered) / big_n;
}

// Roulette-wheel sampling with replacement: individual i is chosen when
// p'_{i-1} < r <= p'_i for r uniform in (0,1]. All-zero fitness degenerates
// to uniform sampling; `degenerate` reports that when non-null.
inline std::vector<Chromosome> select(const std::vector<Chromosome>& pop, const std::vector<double>& fits,
                                      std::mt19937_64& rng, bool* degenerate = nullptr) {
    if (pop.size() != fits.size() || pop.empty()) throw ShapeError("population/fitness size mismatch");
    double total = 0;
    for (double f : fits) {
        if (f < 0) throw DegenerateError("negative fitness value");
        total += f;
    }
    std::vector<Chromosome> out;
    out.reserve(pop.size());
    if (total <= 0) {
        if (degenerate) *degenerate = true;
        std::uniform_int_distribution<size_t> pick(0, pop.size() - 1);
        for (size_t i = 0; i < pop.size(); ++i) out.push_back(pop[pick(rng)]);
        return out;
    }
    if (degenerate) *degenerate = false;
    std::vector<double> cumulative(fits.size());
    double acc = 0;
    for (size_t i = 0; i < fits.size(); ++i) {
        acc += fits[i] / total;
        cumulative[i] = acc;
    }
    cumulative.back() = 1.0;  // p'_n = 1 exactly
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (size_t k = 0; k < pop.size(); ++k) {
        double r = 1.0 - uniform(rng);  // (0,1]
        size_t i = static_cast<size_t>(
            std::lower_bound(cumulative.begin(), cumulative.end(), r) - cumulative.begin());
        if (i >= pop.size()) i = pop.size() - 1;
        out.push_back(pop[i]);
    }
    return out;
}

// Uniform crossover: per sub-chromosome a fresh random mask decides, bit by
// bit from position 2 on, whether the aligned value bits swap. Type bits
// never participate.
inline std::pair<Chromosome, Chromosome> crossover(const Chromosome& x, const Chromosome& y,
                                                   std::mt19937_64& rng) {
    if (x.subs.size() != y.subs.size()) throw ShapeError("crossover parents differ in sub-chromosome count");
    Chromosome a = x, b = y;
    std::uniform_int_distribution<int> bit(0, 1);
    for (size_t s = 0; s < a.subs.size(); ++s) {
        if (a.subs[s].value_bits.size() != b.subs[s].value_bits.size())
            throw ShapeError("crossover parents differ in sub-chromosome width");
        for (size_t j = 0; j < a.subs[s].value_bits.size(); ++j)
            if (bit(rng)) std::swap(a.subs[s].value_bits[j], b.subs[s].value_bits[j]);
    }
    return {std::move(a), std::move(b)};
}

inline Chromosome mutate(const Chromosome& ch, double p_m, std::mt19937_64& rng) {
    Chromosome out = ch;
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (auto& sub : out.subs)
        for (auto& b : sub.value_bits)
            if (uniform(rng) < p_m) b = static_cast<uint8_t>(b ? 0 : 1);
    return out;
}

// ---------------------------------------------------------------------------
// Evolution loop
// ---------------------------------------------------------------------------

namespace detail {

struct PairUniverse {
    std::set<PairKey> all;
    std::set<PairKey> related;

    explicit PairUniverse(const DupSets& dups) {
        for (const auto& p : dups.all) {
            all.insert(key_of(p));
            if (p.require_related) related.insert(key_of(p));
        }
    }
    int count_related(const std::set<PairKey>& covered) const {
        int m = 0;
        for (const auto& k : covered) m += related.count(k) ? 1 : 0;
        return m;
    }
};

// Greedy suite archive: an individual joins iff it covers a new pair.
struct Archive {
    std::vector<SuiteMember> members;
    std::set<PairKey> covered_union;

    bool offer(SuiteMember member) {
        bool adds = false;
        for (const auto& k : member.covered)
            if (!covered_union.count(k)) {
                adds = true;
                break;
            }
        if (!adds) return false;
        covered_union.insert(member.covered.begin(), member.covered.end());
        members.push_back(std::move(member));
        return true;
    }
};

inline void finalize_report(RunReport& report, const PairUniverse& universe, Archive&& archive) {
    report.covered_m_total = static_cast<std::size_t>(universe.count_related(archive.covered_union));
    report.suite = std::move(archive.members);
    report.covered.assign(archive.covered_union.begin(), archive.covered_union.end());
    for (const auto& k : universe.all)
        if (!archive.covered_union.count(k)) report.uncovered.push_back(k);
    report.n_total = universe.all.size();
    report.m_total = universe.related.size();
}

}  // namespace detail

inline RunReport evolve(const GaProgram& program, const GaConfig& cfg) {
    if (cfg.population_size < 2) throw DegenerateError("population size must be at least 2");
    if (cfg.stall_window < 1) throw DegenerateError("stall window must be at least 1");
    if (program.dups->all.empty()) throw DegenerateError("program has no def-use pairs to cover");
    const FunctionScope& scope = program.entry_scope();
    const auto& params = scope.function->params;
    detail::PairUniverse universe(*program.dups);
    Interpreter interp(*program.cfg, *program.index, *program.dups);

    RunReport report;
    report.program = program.index->unit().source_name;
    report.function = program.entry;
    report.approach = cfg.fitness_mode == FitnessMode::AdfGa ? "ADF-GA" : "GA-classic";
    report.config = cfg;

    std::mt19937_64 rng(cfg.rng_seed);
    std::vector<Chromosome> pop;
    pop.reserve(static_cast<size_t>(cfg.population_size));
    for (int i = 0; i < cfg.population_size; ++i) pop.push_back(detail::random_chromosome(params, rng));

    Chromosome best_ever;
    double best_ever_fitness = -1;
    int stall = 0;
    detail::Archive archive;

    for (int gen = 1; gen <= cfg.max_generations; ++gen) {
        std::vector<double> fits(pop.size());
        std::vector<CoverageRecord> records(pop.size());
        for (size_t i = 0; i < pop.size(); ++i) {
            TestCase tc = decode(pop[i], params);
            records[i] = interp.run(program.entry, tc, cfg.step_limit);
            fits[i] = fitness(records[i], *program.dups, cfg);
        }
        report.total_executions += static_cast<long>(pop.size());

        size_t best_idx = 0;
        for (size_t i = 1; i < pop.size(); ++i)
            if (fits[i] > fits[best_idx]) best_idx = i;
        double mean = std::accumulate(fits.begin(), fits.end(), 0.0) / static_cast<double>(fits.size());

        bool new_best = fits[best_idx] > best_ever_fitness;
        if (new_best) {
            best_ever = pop[best_idx];
            best_ever_fitness = fits[best_idx];
            report.first_best_generation = gen;
            stall = 0;
        } else {
            ++stall;
        }

        std::vector<size_t> order(pop.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return fits[a] > fits[b]; });
        for (size_t i : order)
            archive.offer({decode(pop[i], params), records[i].covered, fits[i], gen});

        GenerationStats stats;
        stats.generation = gen;
        stats.best_fitness = fits[best_idx];
        stats.mean_fitness = mean;
        stats.covered_n = static_cast<int>(records[best_idx].covered.size());
        stats.covered_m = universe.count_related(records[best_idx].covered);
        stats.new_best = new_best;
        stats.union_covered_n = static_cast<int>(archive.covered_union.size());
        stats.union_covered_m = universe.count_related(archive.covered_union);
        report.generations.push_back(stats);
        report.total_generations = gen;

        if (archive.covered_union.size() == universe.all.size()) {
            report.termination_reason = "full coverage";
            break;
        }
        if (stall >= cfg.stall_window) {
            report.termination_reason = "stalled";
            break;
        }
        if (gen == cfg.max_generations) {
            report.termination_reason = "generation limit";
            break;
        }

        bool degenerate = false;
        std::vector<Chromosome> selected = select(pop, fits, rng, &degenerate);
        if (degenerate) ++report.degenerate_selections;
        std::vector<Chromosome> next;
        next.reserve(pop.size());
        for (size_t i = 0; i + 1 < selected.size(); i += 2) {
            auto [a, b] = crossover(selected[i], selected[i + 1], rng);
            next.push_back(std::move(a));
            next.push_back(std::move(b));
        }
        if (selected.size() % 2 == 1) next.push_back(selected.back());
        for (auto& ch : next) ch = mutate(ch, cfg.mutation_prob, rng);
        next.front() = best_ever;  // elitism of 1
        pop = std::move(next);
    }

    report.best_fitness = best_ever_fitness;
    detail::finalize_report(report, universe, std::move(archive));
    return report;
}

// Random-testing baseline at a fixed execution budget, reported in the same
// schema (trials grouped into pseudo-generations of population_size).
inline RunReport random_baseline(const GaProgram& program, const GaConfig& cfg, long budget) {
    if (budget < 1) throw DegenerateError("random baseline needs a budget of at least 1");
    if (program.dups->all.empty()) throw DegenerateError("program has no def-use pairs to cover");
    const FunctionScope& scope = program.entry_scope();
    const auto& params = scope.function->params;
    detail::PairUniverse universe(*program.dups);
    Interpreter interp(*program.cfg, *program.index, *program.dups);

    GaConfig echo = cfg;
    echo.fitness_mode = FitnessMode::Classic;
    RunReport report;
    report.program = program.index->unit().source_name;
    report.function = program.entry;
    report.approach = "RT";
    report.config = echo;
    report.budget = budget;

    std::mt19937_64 rng(cfg.rng_seed);
    detail::Archive archive;
    double best_so_far = -1;
    int best_n = 0, best_m = 0;
    int first_best_group = 0;

    long group_size = std::max(1, cfg.population_size);
    long trial = 0;
    bool full = false;
    while (trial < budget && !full) {
        double group_sum = 0;
        long group_count = 0;
        bool improved = false;
        for (long g = 0; g < group_size && trial < budget; ++g, ++trial) {
            Chromosome ch = detail::random_chromosome(params, rng);
            TestCase tc = decode(ch, params);
            CoverageRecord rec = interp.run(program.entry, tc, cfg.step_limit);
            double f = fitness(rec, *program.dups, echo);
            group_sum += f;
            ++group_count;
            if (f > best_so_far) {
                best_so_far = f;
                best_n = static_cast<int>(rec.covered.size());
                best_m = universe.count_related(rec.covered);
                improved = true;
            }
            archive.offer({std::move(tc), rec.covered, f, static_cast<int>(report.generations.size()) + 1});
            if (archive.covered_union.size() == universe.all.size()) {
                full = true;
                ++trial;
                break;
            }
        }
        GenerationStats stats;
        stats.generation = static_cast<int>(report.generations.size()) + 1;
        stats.best_fitness = best_so_far;
        stats.mean_fitness = group_sum / static_cast<double>(group_count);
        stats.covered_n = best_n;
        stats.covered_m = best_m;
        stats.new_best = improved;
        if (improved) first_best_group = stats.generation;
        stats.union_covered_n = static_cast<int>(archive.covered_union.size());
        stats.union_covered_m = universe.count_related(archive.covered_union);
        report.generations.push_back(stats);
    }

    report.total_generations = static_cast<int>(report.generations.size());
    report.first_best_generation = first_best_group;
    report.best_fitness = best_so_far;
    report.total_executions = trial;
    report.termination_reason = full ? "full coverage" : "budget exhausted";
    detail::finalize_report(report, universe, std::move(archive));
    return report;
}

}  // namespace adfga
