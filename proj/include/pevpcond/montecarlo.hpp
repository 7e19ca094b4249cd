#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pevpcond/problems.hpp"

namespace pevpcond {

struct ExperimentConfig {
  ProblemDescriptor descriptor;
  std::size_t samples = 20000;
  std::uint64_t seed = 42;
  std::size_t blocks = 16;
  std::size_t max_resamples = 100;
  std::size_t workers = 1;
  /// Keep the per-instance statistics in the summary.
  bool keep_values = false;
};

struct ExperimentSummary {
  double mom_estimate = 0.0;
  double naive_mean = 0.0;
  double naive_stderr = 0.0;
  double theory = 0.0;
  double rel_err = 0.0;
  std::size_t resample_count = 0;
  std::size_t count_mismatches = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t blocks = 0;
  /// Diagnostics for the max-condition bounds.
  double mean_mu_max_sq = 0.0;
  double mean_log_mu_max = 0.0;
  std::vector<double> values;
};

/// Outcome of one accepted sample.
struct InstanceStatistic {
  double mean_mu_sq = 0.0;  // (1 / (s d_O)) sum mu^2
  double mu_max = 0.0;
  std::size_t rejected_attempts = 0;
  std::size_t count_mismatches = 0;
};

/// Samples (seed, index, attempt) for attempt = 0, 1, ... until an instance
/// has the expected solution count, only trusted eigen-triples and finite
/// condition numbers. Gives up after `max_attempts` rejections.
InstanceStatistic evaluate_instance(const ProblemDescriptor& desc, std::uint64_t seed, std::uint64_t index,
                                    std::size_t max_attempts);

/// Deterministic for a fixed (descriptor, samples, seed, blocks), whatever
/// the worker count. Throws Error(too_many_resamples) when rejections exceed
/// max_resamples.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

/// Median of the means of `blocks` consecutive equal blocks.
double median_of_means(std::span<const double> values, std::size_t blocks);

/// Integral of ||p||^2 exp(-||p||^2) over the zero set of X^d - Y^d in C^2
/// (d lines through the origin) by radial quadrature. Equals pi d.
double verify_lemma_lines(int degree);

/// pi^n E||p||^2 for p standard complex Gaussian on a random n-dimensional
/// linear subspace of C^(n+1). Equals pi^n n.
double verify_lemma_subspace(int dimension, std::size_t samples, std::uint64_t seed);

}  // namespace pevpcond
