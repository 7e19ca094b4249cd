#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pevpcond {

struct VerificationCheck {
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;  // relative
  bool passed = false;
};

VerificationCheck make_check(std::string name, double measured, double expected, double tolerance);

/// Integral identity over unions of lines (d = 1, 2, 3, 5) and Gaussian
/// Monte Carlo on linear subspaces (n = 1, 2, 3), 1% tolerance.
std::vector<VerificationCheck> verify_lemma_suite();

/// Direction-sampled stochastic condition against mu^2 / ((d+1) n^2) on
/// seeded dense quadratic 2x2 problems, 2% tolerance. One check per
/// instance, reporting its worst eigenvalue.
std::vector<VerificationCheck> verify_stochastic_suite(std::size_t instances = 100, std::size_t directions = 100000,
                                                       std::uint64_t seed = 2024);

/// Structured engine against the finite-difference oracle across all six
/// families, 1e-4 tolerance. One check per instance (worst eigenvalue).
std::vector<VerificationCheck> verify_oracle_suite(std::size_t per_family = 10, std::uint64_t seed = 99);

/// Dispatches "lemma", "stochastic" or "oracle"; throws
/// Error(invalid_argument) for anything else.
std::vector<VerificationCheck> run_verification(std::string_view suite);

}  // namespace pevpcond
