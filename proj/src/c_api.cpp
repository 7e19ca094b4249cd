#include "pevpcond/pevpcond.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "pevpcond/errors.hpp"
#include "pevpcond/montecarlo.hpp"
#include "pevpcond/problem_io.hpp"
#include "pevpcond/problems.hpp"
#include "pevpcond/verify.hpp"

struct pc_problem {
  pevpcond::ProblemInstance instance;
};

struct pc_solution {
  pevpcond::Solution solution;
  pevpcond::ConditionReport report;
};

struct pc_verify_report {
  std::vector<pevpcond::VerificationCheck> checks;
};

namespace {

thread_local std::string last_error;

pc_status status_of(pevpcond::ErrorCode code) {
  using pevpcond::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return PC_INVALID_ARGUMENT;
    case ErrorCode::parse_error: return PC_PARSE_ERROR;
    case ErrorCode::non_convergence: return PC_NON_CONVERGENCE;
    case ErrorCode::exact_singular: return PC_EXACT_SINGULAR;
    case ErrorCode::no_null_vector: return PC_NO_NULL_VECTOR;
    case ErrorCode::degenerate_instance: return PC_DEGENERATE_INSTANCE;
    case ErrorCode::untrusted_eigenpair: return PC_UNTRUSTED_EIGENPAIR;
    case ErrorCode::singular_curve_point: return PC_SINGULAR_CURVE_POINT;
    case ErrorCode::oracle_divergence: return PC_ORACLE_DIVERGENCE;
    case ErrorCode::too_many_resamples: return PC_TOO_MANY_RESAMPLES;
  }
  return PC_INTERNAL_ERROR;
}

template <class F>
pc_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return PC_OK;
  } catch (const pevpcond::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return PC_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return PC_INTERNAL_ERROR;
  }
}

pc_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return PC_INVALID_ARGUMENT;
}

std::vector<std::string> split_masks(const char* text) {
  std::vector<std::string> out;
  if (text == nullptr || *text == '\0') return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

pevpcond::ProblemDescriptor descriptor_of(const pc_descriptor& desc) {
  if (desc.family == nullptr) throw pevpcond::Error(pevpcond::ErrorCode::invalid_argument, "family is required");
  std::vector<int> indices;
  if (desc.indices != nullptr) indices.assign(desc.indices, desc.indices + desc.index_count);
  return pevpcond::make_descriptor(desc.family, desc.n, desc.degree, std::move(indices), split_masks(desc.masks));
}

void fill_theory(const pevpcond::ProblemDescriptor& desc, pc_theory* out) {
  pc_theory t{};
  t.m = desc.m();
  t.r = desc.r();
  t.s = desc.s();
  t.d_o = desc.d_O();
  t.solution_count = pevpcond::expected_solution_count(desc);
  t.theory = pevpcond::expected_mean_sq_condition(desc);
  if (auto printed = desc.printed_value()) {
    t.has_printed_value = 1;
    t.printed_value = *printed;
  }
  std::snprintf(t.label, sizeof t.label, "%s", desc.label().c_str());
  *out = t;
}

}  // namespace

extern "C" {

const char* pc_status_string(pc_status status) {
  switch (status) {
    case PC_OK: return "ok";
    case PC_INVALID_ARGUMENT: return "invalid argument";
    case PC_PARSE_ERROR: return "parse error";
    case PC_NON_CONVERGENCE: return "non-convergence";
    case PC_EXACT_SINGULAR: return "exactly singular";
    case PC_NO_NULL_VECTOR: return "no null vector";
    case PC_DEGENERATE_INSTANCE: return "degenerate instance";
    case PC_UNTRUSTED_EIGENPAIR: return "untrusted eigenpair";
    case PC_SINGULAR_CURVE_POINT: return "singular curve point";
    case PC_ORACLE_DIVERGENCE: return "oracle divergence";
    case PC_TOO_MANY_RESAMPLES: return "too many resamples";
    case PC_IO_ERROR: return "i/o error";
    case PC_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

const char* pc_last_error_message(void) { return last_error.c_str(); }

const char* pc_version(void) { return "0.1.0"; }

pc_status pc_problem_sample(const pc_descriptor* desc, uint64_t seed, uint64_t index, pc_problem** out) {
  if (desc == nullptr) return null_argument("descriptor");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = new pc_problem{pevpcond::sample_instance(descriptor_of(*desc), seed, index)}; });
}

pc_status pc_problem_from_json(const char* text, pc_problem** out) {
  if (text == nullptr) return null_argument("text");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = new pc_problem{pevpcond::parse_problem_json(text)}; });
}

pc_status pc_problem_load(const char* path, pc_problem** out) {
  if (path == nullptr) return null_argument("path");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = new pc_problem{pevpcond::load_problem_file(path)}; });
}

pc_status pc_problem_to_json(const pc_problem* problem, char** out) {
  if (problem == nullptr) return null_argument("problem");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    const std::string text = pevpcond::problem_to_json(problem->instance);
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

void pc_string_free(char* s) { delete[] s; }

void pc_problem_destroy(pc_problem* problem) { delete problem; }

pc_status pc_theory_for_descriptor(const pc_descriptor* desc, pc_theory* out) {
  if (desc == nullptr) return null_argument("descriptor");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { fill_theory(descriptor_of(*desc), out); });
}

pc_status pc_problem_theory(const pc_problem* problem, pc_theory* out) {
  if (problem == nullptr) return null_argument("problem");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { fill_theory(problem->instance.descriptor, out); });
}

pc_status pc_solve(const pc_problem* problem, pc_solution** out) {
  if (problem == nullptr) return null_argument("problem");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    auto solution = pevpcond::solve_instance(problem->instance);
    auto report = pevpcond::condition_of(problem->instance, solution);
    *out = new pc_solution{std::move(solution), std::move(report)};
  });
}

size_t pc_solution_size(const pc_solution* solution) {
  return solution == nullptr ? 0 : solution->solution.triples.size();
}

pc_status pc_solution_record(const pc_solution* solution, size_t i, pc_record* out) {
  if (solution == nullptr) return null_argument("solution");
  if (out == nullptr) return null_argument("out");
  if (i >= solution->solution.triples.size()) {
    last_error = "record index out of range";
    return PC_INVALID_ARGUMENT;
  }
  const auto& triple = solution->solution.triples[i];
  const auto& cond = solution->report.per_eigenvalue[i];
  pc_record r{};
  r.coord_count = static_cast<int>(triple.z.size());
  for (int k = 0; k < r.coord_count && k < 3; ++k) {
    r.coord_re[k] = triple.z[k].real();
    r.coord_im[k] = triple.z[k].imag();
  }
  if (r.coord_count == 2 && std::abs(triple.z[1]) > 1e-12) {
    const pevpcond::Complex lambda = triple.z[0] / triple.z[1];
    r.has_affine = 1;
    r.lambda_re = lambda.real();
    r.lambda_im = lambda.imag();
  }
  r.mu = cond.mu;
  r.mu_st_sq = cond.mu_st_sq;
  r.residual_right = triple.residual_right;
  r.residual_left = triple.residual_left;
  r.trusted = triple.trusted ? 1 : 0;
  *out = r;
  return PC_OK;
}

pc_status pc_solution_summary_get(const pc_solution* solution, pc_solution_summary* out) {
  if (solution == nullptr) return null_argument("solution");
  if (out == nullptr) return null_argument("out");
  pc_solution_summary s{};
  s.count = solution->solution.triples.size();
  s.expected_count = solution->solution.expected_count;
  s.count_mismatch = solution->solution.count_mismatch ? 1 : 0;
  s.mean_mu_sq = solution->report.mean_mu_sq;
  s.mu_max = solution->report.mu_max;
  *out = s;
  return PC_OK;
}

void pc_solution_destroy(pc_solution* solution) { delete solution; }

void pc_experiment_config_default(pc_experiment_config* config) {
  if (config == nullptr) return;
  const pevpcond::ExperimentConfig d{pevpcond::ProblemDescriptor::gevp(1)};
  config->samples = d.samples;
  config->seed = d.seed;
  config->blocks = d.blocks;
  config->max_resamples = d.max_resamples;
  config->workers = d.workers;
}

pc_status pc_run_experiment(const pc_descriptor* desc, const pc_experiment_config* config,
                            pc_experiment_result* out) {
  if (desc == nullptr) return null_argument("descriptor");
  if (config == nullptr) return null_argument("config");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    pevpcond::ExperimentConfig cfg{descriptor_of(*desc)};
    cfg.samples = config->samples;
    cfg.seed = config->seed;
    cfg.blocks = config->blocks;
    cfg.max_resamples = config->max_resamples;
    cfg.workers = config->workers;
    const auto s = pevpcond::run_experiment(cfg);
    pc_experiment_result r{};
    r.mom_estimate = s.mom_estimate;
    r.naive_mean = s.naive_mean;
    r.naive_stderr = s.naive_stderr;
    r.theory = s.theory;
    r.rel_err = s.rel_err;
    r.resample_count = s.resample_count;
    r.count_mismatches = s.count_mismatches;
    r.samples = s.samples;
    r.seed = s.seed;
    r.blocks = s.blocks;
    r.mean_mu_max_sq = s.mean_mu_max_sq;
    r.mean_log_mu_max = s.mean_log_mu_max;
    *out = r;
  });
}

pc_status pc_verify(const char* suite, pc_verify_report** out) {
  if (suite == nullptr) return null_argument("suite");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = new pc_verify_report{pevpcond::run_verification(suite)}; });
}

size_t pc_verify_size(const pc_verify_report* report) { return report == nullptr ? 0 : report->checks.size(); }

pc_status pc_verify_check(const pc_verify_report* report, size_t i, const char** name, double* measured,
                          double* expected, double* tolerance, int* passed) {
  if (report == nullptr) return null_argument("report");
  if (i >= report->checks.size()) {
    last_error = "check index out of range";
    return PC_INVALID_ARGUMENT;
  }
  const auto& c = report->checks[i];
  if (name) *name = c.name.c_str();
  if (measured) *measured = c.measured;
  if (expected) *expected = c.expected;
  if (tolerance) *tolerance = c.tolerance;
  if (passed) *passed = c.passed ? 1 : 0;
  return PC_OK;
}

void pc_verify_destroy(pc_verify_report* report) { delete report; }

}  // extern "C"
