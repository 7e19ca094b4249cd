#include "pevpcond/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "pevpcond/errors.hpp"
#include "pevpcond/random.hpp"

namespace pevpcond {

namespace {

struct AttemptResult {
  bool accepted = false;
  bool count_mismatch = false;
  double mean_mu_sq = 0.0;
  double mu_max = 0.0;
};

AttemptResult try_instance(const ProblemDescriptor& desc, std::uint64_t seed, std::uint64_t index,
                           std::uint64_t attempt) {
  AttemptResult r;
  const ProblemInstance inst = sample_instance(desc, seed, index, attempt);
  EigenSolveOptions options;
  options.seed = substream_seed(seed ^ 0xa5a5a5a5a5a5a5a5ULL, index, attempt);
  try {
    const Solution sol = solve_instance(inst, options);
    if (sol.count_mismatch) {
      r.count_mismatch = true;
      return r;
    }
    for (const auto& t : sol.triples)
      if (!t.trusted) return r;
    const ConditionReport report = condition_of(inst, sol);
    double sum_sq = 0.0;
    for (const auto& e : report.per_eigenvalue) {
      if (!std::isfinite(e.mu)) return r;
      sum_sq += e.mu * e.mu;
    }
    r.mean_mu_sq = sum_sq / static_cast<double>(sol.expected_count);
    r.mu_max = report.mu_max;
    r.accepted = true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::degenerate_instance && e.code() != ErrorCode::non_convergence &&
        e.code() != ErrorCode::exact_singular)
      throw;
  }
  return r;
}

}  // namespace

InstanceStatistic evaluate_instance(const ProblemDescriptor& desc, std::uint64_t seed, std::uint64_t index,
                                    std::size_t max_attempts) {
  InstanceStatistic stat;
  for (std::uint64_t attempt = 0;; ++attempt) {
    const AttemptResult r = try_instance(desc, seed, index, attempt);
    if (r.accepted) {
      stat.mean_mu_sq = r.mean_mu_sq;
      stat.mu_max = r.mu_max;
      return stat;
    }
    ++stat.rejected_attempts;
    if (r.count_mismatch) ++stat.count_mismatches;
    if (stat.rejected_attempts > max_attempts)
      throw Error(ErrorCode::too_many_resamples,
                  "instance " + std::to_string(index) + " rejected " + std::to_string(stat.rejected_attempts) + " times");
  }
}

double median_of_means(std::span<const double> values, std::size_t blocks) {
  if (blocks == 0 || values.empty() || values.size() % blocks != 0)
    throw Error(ErrorCode::invalid_argument, "median_of_means: length must be a positive multiple of blocks");
  const std::size_t size = values.size() / blocks;
  std::vector<double> means(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < size; ++i) sum += values[b * size + i];
    means[b] = sum / static_cast<double>(size);
  }
  std::sort(means.begin(), means.end());
  if (blocks % 2 == 1) return means[blocks / 2];
  return 0.5 * (means[blocks / 2 - 1] + means[blocks / 2]);
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
  if (cfg.blocks == 0 || cfg.samples < cfg.blocks || cfg.samples % cfg.blocks != 0)
    throw Error(ErrorCode::invalid_argument, "run_experiment: samples must be a positive multiple of blocks");

  std::vector<InstanceStatistic> stats(cfg.samples);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= cfg.samples) return;
      try {
        stats[i] = evaluate_instance(cfg.descriptor, cfg.seed, i, cfg.max_resamples);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.workers, cfg.samples));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  // Aggregation is by index, so the result does not depend on scheduling.
  ExperimentSummary out;
  out.samples = cfg.samples;
  out.seed = cfg.seed;
  out.blocks = cfg.blocks;
  out.theory = expected_mean_sq_condition(cfg.descriptor);
  std::vector<double> values(cfg.samples);
  double sum = 0.0;
  double sum_max_sq = 0.0;
  double sum_log_max = 0.0;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    values[i] = stats[i].mean_mu_sq;
    sum += values[i];
    sum_max_sq += stats[i].mu_max * stats[i].mu_max;
    sum_log_max += std::log(stats[i].mu_max);
    out.resample_count += stats[i].rejected_attempts;
    out.count_mismatches += stats[i].count_mismatches;
  }
  if (out.resample_count > cfg.max_resamples)
    throw Error(ErrorCode::too_many_resamples, "run_experiment: " + std::to_string(out.resample_count) +
                                                   " rejected instances exceed the budget of " +
                                                   std::to_string(cfg.max_resamples));
  const double count = static_cast<double>(cfg.samples);
  out.naive_mean = sum / count;
  double var = 0.0;
  for (const double v : values) var += (v - out.naive_mean) * (v - out.naive_mean);
  out.naive_stderr = cfg.samples > 1 ? std::sqrt(var / (count - 1.0) / count) : 0.0;
  out.mom_estimate = median_of_means(values, cfg.blocks);
  out.rel_err = std::abs(out.mom_estimate - out.theory) / out.theory;
  out.mean_mu_max_sq = sum_max_sq / count;
  out.mean_log_mu_max = sum_log_max / count;
  if (cfg.keep_values) out.values = std::move(values);
  return out;
}

double verify_lemma_lines(int degree) {
  if (degree < 1) throw Error(ErrorCode::invalid_argument, "verify_lemma_lines: degree must be at least 1");
  // Composite Simpson for 2 pi int_0^R t^3 exp(-t^2) dt; the tail beyond
  // R = 12 is below 1e-60.
  constexpr int kIntervals = 20000;
  constexpr double kRadius = 12.0;
  const double h = kRadius / kIntervals;

  double total = 0.0;
  for (int j = 0; j < degree; ++j) {
    // Unit direction of the line X = w^j Y with w = exp(2 pi i / d).
    const Complex root = std::polar(1.0, 2.0 * std::numbers::pi * j / degree);
    const Complex dx = root / std::sqrt(2.0);
    const Complex dy = 1.0 / std::sqrt(2.0);
    auto integrand = [&](double t) {
      const Complex x = t * dx;
      const Complex y = t * dy;
      const double norm_sq = std::norm(x) + std::norm(y);
      return norm_sq * std::exp(-norm_sq) * t;  // area element t dt dtheta
    };
    double acc = integrand(0.0) + integrand(kRadius);
    for (int i = 1; i < kIntervals; ++i) acc += (i % 2 ? 4.0 : 2.0) * integrand(i * h);
    total += 2.0 * std::numbers::pi * acc * h / 3.0;
  }
  return total;
}

double verify_lemma_subspace(int dimension, std::size_t samples, std::uint64_t seed) {
  if (dimension < 1 || samples == 0)
    throw Error(ErrorCode::invalid_argument, "verify_lemma_subspace: need dimension >= 1 and samples > 0");
  ComplexGaussian gen(substream_seed(seed, 0));
  // Orthonormal basis of a random n-dimensional subspace of C^(n+1).
  const ComplexMatrix u = random_unitary(dimension + 1, gen);
  const ComplexMatrix basis = u.leftCols(dimension);
  double acc = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const ComplexVector p = basis * gen.vector(dimension);
    acc += p.squaredNorm();
  }
  return std::pow(std::numbers::pi, dimension) * acc / static_cast<double>(samples);
}

}  // namespace pevpcond
