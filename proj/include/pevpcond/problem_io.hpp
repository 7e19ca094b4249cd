#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "pevpcond/problems.hpp"

namespace pevpcond {

/// Parses a JSON problem file:
///
///   {"family": "pevp", "n": 2, "d": 2,
///    "coefficients": [[[[re, im], ...], ...], ...],
///    "seed": 42, "index": 0}
///
/// Polynomial families use "N" (and "indices" for lacunary ones) and list
/// their coefficients as [re, im] pairs, a_k multiplying X^k Y^(N-k). When
/// "coefficients" is absent the instance is sampled from (seed, index).
/// Throws Error(parse_error) on malformed input.
ProblemInstance parse_problem_json(std::string_view text);

ProblemInstance load_problem_file(const std::string& path);

/// Serializes an instance with explicit coefficients; parsing the result
/// reproduces the instance bit for bit.
std::string problem_to_json(const ProblemInstance& inst);

}  // namespace pevpcond
