// SPDX-License-Identifier: Apache-2.0
//
// JSON/CSV serialization for analysis results, run reports, and bench rows.
// Output is deterministic: object keys are sorted (nlohmann::json ordered
// map), lists carry canonical orders, CSV floats print with fixed precision.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "adfga/ga.hpp"
#include "adfga/pipeline.hpp"

namespace adfga {

using Json = nlohmann::json;

inline Json pair_to_json(const PairKey& k, const bool* require_related = nullptr) {
    Json j{{"function", k.function}, {"variable", k.variable}, {"def_node", k.def_node}, {"use_node", k.use_node}};
    if (require_related) j["require_related"] = *require_related;
    return j;
}

inline Json analysis_to_json(const Analysis& a) {
    Json j;
    j["schema_version"] = 1;
    j["source"] = a.unit->source_name;
    j["variables"] = Json::array();
    for (const auto& v : a.variables)
        j["variables"].push_back({{"name", v.name},
                                  {"type_flag", v.type_flag},
                                  {"width_bits", v.width_bits},
                                  {"function", v.owning_function},
                                  {"is_parameter", v.is_parameter}});
    j["requires"] = Json::array();
    for (const auto& r : a.require_sites)
        j["requires"].push_back({{"function", r.function}, {"node", r.node_id}, {"text", r.condition_text}});
    j["dups"] = Json::array();
    for (const auto& p : a.dups.all) {
        bool rr = p.require_related;
        j["dups"].push_back(pair_to_json(key_of(p), &rr));
    }
    j["unused_defs"] = Json::array();
    for (const auto& d : a.dups.unused_defs)
        j["unused_defs"].push_back({{"function", d.function}, {"variable", d.variable}, {"def_node", d.def_node}});
    j["counts"] = {{"n_dup", a.dups.total()}, {"r_dup", a.dups.require_related_count()}};
    j["warnings"] = a.cfg.warnings;
    return j;
}

inline Json config_to_json(const GaConfig& cfg) {
    return Json{{"epsilon", cfg.epsilon},
                {"population_size", cfg.population_size},
                {"mutation_prob", cfg.mutation_prob},
                {"max_generations", cfg.max_generations},
                {"stall_window", cfg.stall_window},
                {"fitness_mode", fitness_mode_name(cfg.fitness_mode)},
                {"rng_seed", cfg.rng_seed},
                {"step_limit", cfg.step_limit}};
}

inline Json run_report_to_json(const RunReport& r, const UnitIndex& index) {
    const FunctionScope& scope = index.at(r.function);
    Json j;
    j["schema_version"] = 1;
    j["program"] = r.program;
    j["function"] = r.function;
    j["approach"] = r.approach;
    j["config"] = config_to_json(r.config);
    if (r.approach == "RT") j["budget"] = r.budget;
    j["generations"] = Json::array();
    for (const auto& g : r.generations)
        j["generations"].push_back({{"generation", g.generation},
                                    {"best_fitness", g.best_fitness},
                                    {"mean_fitness", g.mean_fitness},
                                    {"covered_n", g.covered_n},
                                    {"covered_m", g.covered_m},
                                    {"new_best", g.new_best},
                                    {"union_covered_n", g.union_covered_n},
                                    {"union_covered_m", g.union_covered_m}});
    j["total_generations"] = r.total_generations;
    j["first_best_generation"] = r.first_best_generation;
    j["best_fitness"] = r.best_fitness;
    j["suite"] = Json::array();
    for (const auto& member : r.suite) {
        Json inputs = Json::array();
        for (size_t i = 0; i < member.tc.values.size(); ++i) {
            const auto& p = scope.function->params[i];
            inputs.push_back(
                {{"name", p.name}, {"type", p.type.name()}, {"value", to_decimal(member.tc.values[i])}});
        }
        Json covered = Json::array();
        for (const auto& k : member.covered) covered.push_back(pair_to_json(k));
        j["suite"].push_back({{"inputs", inputs},
                              {"covered", covered},
                              {"fitness", member.fitness},
                              {"generation", member.generation}});
    }
    j["covered"] = Json::array();
    for (const auto& k : r.covered) j["covered"].push_back(pair_to_json(k));
    j["uncovered"] = Json::array();
    for (const auto& k : r.uncovered) j["uncovered"].push_back(pair_to_json(k));
    j["coverage"] = {{"n", r.covered.size()},
                     {"n_total", r.n_total},
                     {"m", r.covered_m_total},
                     {"m_total", r.m_total},
                     {"n_ratio", r.n_coverage()},
                     {"m_ratio", r.m_coverage()}};
    j["total_executions"] = r.total_executions;
    j["degenerate_selections"] = r.degenerate_selections;
    j["termination_reason"] = r.termination_reason;
    return j;
}

}  // namespace adfga
