// spec_file.hpp — JSON state-spec documents.
//
//   {"kind": "amplitudes", "profile": [2, 2],
//    "amplitudes": [[[0, 0], 0.70710678118654752, 0], [[1, 1], 0.70710678118654752, 0]]}
//   {"kind": "w_class", "a": [[0.57735026918962576], [0.57735026918962576], [0.57735026918962576]]}
//   {"kind": "pcs", "a": [...], "p": 0.5, "lambda": 0.3}
//   {"kind": "ou"}  {"kind": "kim_sanders"}  {"kind": "max_entangled", "d": 3}
//
// Table entries in "a" are numbers or [re, im] pairs, one row per party and
// one entry per excited level. "profile" is optional for the generated kinds
// and checked when present.

#pragma once

#include "cren/states.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cren {

/// Malformed state-spec document; the message names the offending field or
/// the line and column of a syntax error.
class SpecError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct StateInput {
    std::string kind;
    std::optional<PureState> pure;
    std::optional<DensityOperator> mixed;
    std::optional<WClassSpec> w;  // w_class and pcs documents
    std::optional<PCSSpec> pcs;   // pcs documents

    const DimensionProfile& profile() const { return pure ? pure->profile() : mixed->profile(); }
    bool is_pure() const { return pure.has_value(); }
    DensityOperator density() const { return pure ? DensityOperator::from_pure(*pure) : *mixed; }
};

StateInput parse_state_spec(std::string_view text);
StateInput load_state_spec(const std::filesystem::path& path);

}  // namespace cren
