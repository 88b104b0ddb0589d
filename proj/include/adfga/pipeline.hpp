// SPDX-License-Identifier: Apache-2.0
//
// Front-to-back analysis bundle: parse + resolve + CFG + variable table +
// require sites + dup sets, with stable ownership so later stages can hold
// pointers into it.
#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "adfga/dataflow.hpp"
#include "adfga/parser.hpp"

namespace adfga {

struct Analysis {
    std::unique_ptr<SourceUnit> unit;
    std::unique_ptr<UnitIndex> index;
    Cfg cfg;
    std::vector<VariableInfo> variables;
    std::vector<RequireSite> require_sites;
    DupSets dups;

    // Default GA target: the first function in the unit.
    std::string default_entry() const {
        if (index->function_order().empty()) throw SetupError("the unit declares no functions");
        return index->function_order().front();
    }
};

inline Analysis analyze_text(const std::string& text, const std::string& source_name) {
    Analysis a;
    a.unit = std::make_unique<SourceUnit>(parse_source(tokenize(text), source_name));
    resolve_types(*a.unit);
    a.index = std::make_unique<UnitIndex>(*a.unit);
    a.cfg = build_cfg(*a.index);
    a.variables = extract_variables(*a.index);
    a.require_sites = find_requires(a.cfg);
    a.dups = classify_rdups(compute_dups(a.cfg, a.variables), a.require_sites, a.cfg);
    return a;
}

inline Analysis analyze_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SetupError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return analyze_text(buf.str(), path);
}

}  // namespace adfga
