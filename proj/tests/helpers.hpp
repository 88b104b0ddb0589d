// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "adfga/pipeline.hpp"

namespace testutil {

inline std::string corpus_path(const std::string& name) { return std::string(ADFGA_CORPUS_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline adfga::Analysis analyze(const std::string& text, const std::string& name = "<test>") {
    return adfga::analyze_text(text, name);
}

inline adfga::Analysis analyze_corpus(const std::string& name) {
    return adfga::analyze_file(corpus_path(name));
}

// Wraps a function body into a one-contract unit.
inline std::string fn_program(const std::string& signature_and_body) {
    return "contract t {\n" + signature_and_body + "\n}\n";
}

inline adfga::PairKey pk(const std::string& fn, const std::string& var, int def, int use) {
    return adfga::PairKey{fn, var, def, use};
}

inline std::set<adfga::PairKey> pair_set(const adfga::DupSets& dups) {
    std::set<adfga::PairKey> out;
    for (const auto& p : dups.all) out.insert(adfga::key_of(p));
    return out;
}

inline std::set<adfga::PairKey> related_set(const adfga::DupSets& dups) {
    std::set<adfga::PairKey> out;
    for (const auto& p : dups.all)
        if (p.require_related) out.insert(adfga::key_of(p));
    return out;
}

}  // namespace testutil
