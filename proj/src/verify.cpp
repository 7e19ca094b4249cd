#include "pevpcond/verify.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "pevpcond/condition.hpp"
#include "pevpcond/errors.hpp"
#include "pevpcond/montecarlo.hpp"
#include "pevpcond/problems.hpp"
#include "pevpcond/random.hpp"

namespace pevpcond {

namespace {

double rel_dev(double measured, double expected) { return std::abs(measured - expected) / std::abs(expected); }

// First accepted sample at or after `index`, so suites never run on a
// measure-zero failure.
ProblemInstance usable_instance(const ProblemDescriptor& desc, std::uint64_t seed, std::uint64_t index,
                                Solution& solution) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    ProblemInstance inst = sample_instance(desc, seed, index, attempt);
    try {
      solution = solve_instance(inst);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::degenerate_instance || e.code() == ErrorCode::non_convergence) continue;
      throw;
    }
    bool ok = !solution.count_mismatch;
    for (const auto& t : solution.triples) ok = ok && t.trusted;
    if (ok) return inst;
  }
}

}  // namespace

VerificationCheck make_check(std::string name, double measured, double expected, double tolerance) {
  VerificationCheck c{std::move(name), measured, expected, tolerance, false};
  c.passed = std::isfinite(measured) && rel_dev(measured, expected) <= tolerance;
  return c;
}

std::vector<VerificationCheck> verify_lemma_suite() {
  std::vector<VerificationCheck> out;
  for (const int d : {1, 2, 3, 5})
    out.push_back(make_check("lines d=" + std::to_string(d), verify_lemma_lines(d), std::numbers::pi * d, 0.01));
  for (const int n : {1, 2, 3})
    out.push_back(make_check("subspace n=" + std::to_string(n), verify_lemma_subspace(n, 100000, 1000 + n),
                             std::pow(std::numbers::pi, n) * n, 0.01));
  return out;
}

std::vector<VerificationCheck> verify_stochastic_suite(std::size_t instances, std::size_t directions,
                                                       std::uint64_t seed) {
  const ProblemDescriptor desc = ProblemDescriptor::pevp(2, 2);
  const std::size_t m = desc.m();
  std::vector<VerificationCheck> out;
  for (std::size_t i = 0; i < instances; ++i) {
    Solution sol;
    const ProblemInstance inst = usable_instance(desc, seed, i, sol);
    const StructuredInstance s = inst.structured();
    const MatrixPolynomial p(s.blocks);
    VerificationCheck worst;
    double worst_dev = -1.0;
    for (std::size_t k = 0; k < sol.triples.size(); ++k) {
      const double mu = mu_pevp_closed(p, sol.triples[k]);
      const double sampled =
          mu_stochastic_sampled(s, sol.triples[k], inst.p_norm(), directions, substream_seed(seed + 1, i, k));
      const double expected = mu_stochastic(mu, m);
      const double dev = rel_dev(sampled, expected);
      if (dev > worst_dev) {
        worst_dev = dev;
        worst = make_check("stochastic instance " + std::to_string(i), sampled, expected, 0.02);
      }
    }
    out.push_back(worst);
  }
  return out;
}

std::vector<VerificationCheck> verify_oracle_suite(std::size_t per_family, std::uint64_t seed) {
  const std::vector<ProblemDescriptor> families{
      ProblemDescriptor::dense_poly(5),
      ProblemDescriptor::lacunary_poly(7, {0, 3, 7}),
      ProblemDescriptor::gevp(2),
      ProblemDescriptor::pevp(2, 2),
      ProblemDescriptor::sparse_qep(2),
      ProblemDescriptor::quadric(2),
  };
  std::vector<VerificationCheck> out;
  for (const auto& desc : families) {
    for (std::size_t i = 0; i < per_family; ++i) {
      Solution sol;
      const ProblemInstance inst = usable_instance(desc, seed, i, sol);
      const StructuredInstance s = inst.structured();
      VerificationCheck worst;
      double worst_dev = -1.0;
      for (const auto& t : sol.triples) {
        const double generic = mu_generic(s, t, inst.p_norm());
        double fd = std::numeric_limits<double>::quiet_NaN();
        try {
          fd = mu_fd_oracle(s, t.z, inst.p_norm());
        } catch (const Error& e) {
          if (e.code() != ErrorCode::oracle_divergence) throw;
        }
        const double dev = std::isfinite(fd) ? rel_dev(fd, generic) : std::numeric_limits<double>::infinity();
        if (dev > worst_dev) {
          worst_dev = dev;
          worst = make_check(desc.label() + " #" + std::to_string(i), fd, generic, 1e-4);
        }
      }
      out.push_back(worst);
    }
  }
  return out;
}

std::vector<VerificationCheck> run_verification(std::string_view suite) {
  if (suite == "lemma") return verify_lemma_suite();
  if (suite == "stochastic") return verify_stochastic_suite();
  if (suite == "oracle") return verify_oracle_suite();
  throw Error(ErrorCode::invalid_argument, "unknown verification suite '" + std::string(suite) + "'");
}

}  // namespace pevpcond
