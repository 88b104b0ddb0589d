// SPDX-License-Identifier: Apache-2.0
//
// Source positions and the error hierarchy shared by every stage.
// Frontend/analysis failures are exceptions; runtime faults inside the
// interpreter are data (see interp.hpp), not exceptions.
#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace adfga {

struct SourcePos {
    int line = 0;
    int column = 0;

    friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

// Base of all tool errors. what() is the bare message; format() renders the
// conventional "file:line:col: message" diagnostic.
class Error : public std::runtime_error {
  public:
    Error(std::string stage, SourcePos pos, const std::string& message)
        : std::runtime_error(message), stage_(std::move(stage)), pos_(pos) {}

    const std::string& stage() const { return stage_; }
    SourcePos pos() const { return pos_; }

    std::string format(const std::string& file) const {
        std::ostringstream os;
        os << file << ':' << pos_.line << ':' << pos_.column << ": " << stage_ << ": " << what();
        return os.str();
    }

  private:
    std::string stage_;
    SourcePos pos_;
};

class LexError : public Error {
  public:
    LexError(SourcePos pos, const std::string& m) : Error("lex error", pos, m) {}
};

class ParseError : public Error {
  public:
    ParseError(SourcePos pos, const std::string& m) : Error("parse error", pos, m) {}
};

class TypeError : public Error {
  public:
    TypeError(SourcePos pos, const std::string& m) : Error("type error", pos, m) {}
};

class CfgError : public Error {
  public:
    CfgError(SourcePos pos, const std::string& m) : Error("cfg error", pos, m) {}
};

// Data-flow analysis failure (e.g. a use with no reaching definition).
class AnalysisError : public Error {
  public:
    AnalysisError(SourcePos pos, const std::string& m) : Error("analysis error", pos, m) {}
};

// Test-case / entry-signature mismatch handed to the interpreter.
class SetupError : public Error {
  public:
    explicit SetupError(const std::string& m) : Error("setup error", {}, m) {}
};

// Chromosome width/arity mismatch in the GA codecs.
class ShapeError : public Error {
  public:
    explicit ShapeError(const std::string& m) : Error("shape error", {}, m) {}
};

// Degenerate optimization input (no test targets at all).
class DegenerateError : public Error {
  public:
    explicit DegenerateError(const std::string& m) : Error("degenerate input", {}, m) {}
};

}  // namespace adfga
