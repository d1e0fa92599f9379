#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "isoblock/model.hpp"

namespace isoblock {

/// Malformed or inconsistent interpretation text. Carries the 1-based
/// position of the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string &message, int line, int column);

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Parses a sequence of Mace4 portable `interpretation(...)` clauses. All
/// models share the signature of the first one; functions of arity 0..3 and
/// relations of arity 1..2 are accepted.
std::vector<Model> parse_models(std::string_view text);
std::vector<Model> parse_models(std::istream &in);

/// Writes Mace4 portable clauses, numbering models from 1. Throws
/// std::runtime_error if the stream fails.
void write_models(std::span<const Model> models, std::ostream &out);
std::string format_models(std::span<const Model> models);

std::vector<Model> read_model_file(const std::string &path);

/// Writes through a temporary file and renames it into place, so a failed
/// run never leaves a partial file behind.
void write_model_file(const std::string &path, std::span<const Model> models);

} // namespace isoblock
