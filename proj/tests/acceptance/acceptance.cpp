// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when everything passes).
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "pevpcond/condition.hpp"
#include "pevpcond/errors.hpp"
#include "pevpcond/montecarlo.hpp"
#include "pevpcond/problems.hpp"
#include "pevpcond/random.hpp"
#include "pevpcond/verify.hpp"

using namespace pevpcond;

namespace {

// Tolerances.
constexpr double kMcTolerance = 0.05;
constexpr double kStochasticTolerance = 0.02;
constexpr double kGenericVsPevp = 1e-10;
constexpr double kPevpVsGevp = 1e-12;
constexpr double kPevpVsScalar = 1e-10;
constexpr double kGenericVsOracle = 1e-4;
constexpr double kResidual = 1e-8;
constexpr double kScaleInvariance = 1e-12;
constexpr double kLemmaTolerance = 0.01;
constexpr double kCorollaryLogBound = 1.5 * std::numbers::ln2 + 0.5 * 1.0986122886681098;  // 1.5 log 2 + 0.5 log 3

constexpr std::uint64_t kSeed = 42;
constexpr std::size_t kBlocks = 16;

struct Outcome {
  bool passed = false;
  std::string detail;
};

int failures = 0;

void report(const char* id, const char* title, const std::function<Outcome()>& run) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = run();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s %s: %s | %s [%.1fs]\n", out.passed ? "PASS" : "FAIL", id, title, out.detail.c_str(), secs);
  std::fflush(stdout);
  if (!out.passed) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

ExperimentSummary experiment(const ProblemDescriptor& desc, std::size_t samples, std::size_t workers = 1) {
  ExperimentConfig cfg{desc};
  cfg.samples = samples;
  cfg.seed = kSeed;
  cfg.blocks = kBlocks;
  cfg.workers = workers;
  return run_experiment(cfg);
}

std::string describe(const ExperimentSummary& s) {
  return fmt("mom=%.6g naive=%.6g+-%.2g theory=%.6g rel_err=%.2f%%", s.mom_estimate, s.naive_mean, s.naive_stderr,
             s.theory, 100.0 * s.rel_err);
}

Outcome mc_criterion(const ProblemDescriptor& desc, std::size_t samples) {
  const auto s = experiment(desc, samples);
  return {s.rel_err <= kMcTolerance && s.resample_count == 0,
          desc.label() + " n=" + std::to_string(samples) + " " + describe(s)};
}

// Within tolerance of exactly one of the two candidate values.
Outcome adjudicate(const ProblemDescriptor& desc, std::size_t samples) {
  const auto s = experiment(desc, samples);
  const double theory = s.theory;
  const double printed = desc.printed_value().value();
  const bool near_theory = std::abs(s.mom_estimate - theory) <= kMcTolerance * theory;
  const bool near_printed = std::abs(s.mom_estimate - printed) <= kMcTolerance * printed;
  const double lo = s.naive_mean - 1.96 * s.naive_stderr, hi = s.naive_mean + 1.96 * s.naive_stderr;
  std::string verdict = near_theory && !near_printed   ? fmt("adjudicated %.6g ((m-1)r/s)", theory)
                        : near_printed && !near_theory ? fmt("adjudicated %.6g (printed)", printed)
                                                       : std::string("no adjudication");
  return {near_theory != near_printed,
          desc.label() + " " + describe(s) + fmt(" printed=%.6g naive 95%% CI [%.4g, %.4g]; ", printed, lo, hi) +
              verdict};
}

// Instance sizes for the engine and solver checks, n <= 4, d <= 3.
struct DeskGen {
  explicit DeskGen(std::uint64_t seed) : gen(seed), state(seed) {}
  int pick(int lo, int hi) {
    state = mix64(state);
    return lo + static_cast<int>(state % static_cast<std::uint64_t>(hi - lo + 1));
  }
  MatrixPolynomial poly(int n, int d) {
    std::vector<ComplexMatrix> c;
    for (int k = 0; k <= d; ++k) c.push_back(gen.matrix(n, n));
    return MatrixPolynomial(std::move(c));
  }
  ComplexGaussian gen;
  std::uint64_t state;
};

// Scalar closed form in whichever affine chart keeps the root bounded;
// the condition number is invariant under the swap of X and Y.
double scalar_closed_any_chart(std::vector<Complex> c, const ProjectivePoint& z) {
  if (std::abs(z[1]) >= std::abs(z[0])) return mu_scalar_closed(c, z[0] / z[1]);
  std::reverse(c.begin(), c.end());
  return mu_scalar_closed(c, z[1] / z[0]);
}

Outcome engine_coherence() {
  constexpr int kInstances = 300;
  int bad_generic = 0, bad_gevp = 0, bad_scalar = 0, bad_oracle = 0;
  double worst_generic = 0, worst_gevp = 0, worst_scalar = 0, worst_oracle = 0;

  for (int i = 0; i < kInstances; ++i) {
    DeskGen g(10000 + i);
    const MatrixPolynomial p = g.poly(g.pick(1, 4), g.pick(1, 3));
    for (const auto& t : eigen_triples(p)) {
      const double e = rel(mu_generic(structured(p), t, p.norm()), mu_pevp_closed(p, t));
      worst_generic = std::max(worst_generic, e);
      bad_generic += !(e <= kGenericVsPevp);
    }
  }
  for (int i = 0; i < kInstances; ++i) {
    DeskGen g(20000 + i);
    const int n = g.pick(1, 4);
    const ComplexMatrix a = g.gen.matrix(n, n), b = g.gen.matrix(n, n);
    const MatrixPolynomial p({a, -b});
    for (const auto& t : eigen_triples(p)) {
      const double e = rel(mu_pevp_closed(p, t), mu_gevp_closed(a, b, t));
      worst_gevp = std::max(worst_gevp, e);
      bad_gevp += !(e <= kPevpVsGevp);
    }
  }
  for (int i = 0; i < kInstances; ++i) {
    DeskGen g(30000 + i);
    std::vector<Complex> c;
    const int d = g.pick(1, 3);
    for (int k = 0; k <= d; ++k) c.push_back(g.gen());
    const MatrixPolynomial p = MatrixPolynomial::scalar(c);
    for (const auto& t : eigen_triples(p)) {
      const double e = rel(mu_pevp_closed(p, t), scalar_closed_any_chart(c, t.z));
      worst_scalar = std::max(worst_scalar, e);
      bad_scalar += !(e <= kPevpVsScalar);
    }
  }
  const std::vector<ProblemDescriptor> families = {
      ProblemDescriptor::dense_poly(3),    ProblemDescriptor::lacunary_poly(7, {0, 3, 7}),
      ProblemDescriptor::gevp(3),          ProblemDescriptor::pevp(2, 3),
      ProblemDescriptor::sparse_qep(3),    ProblemDescriptor::quadric(2),
  };
  for (int i = 0; i < kInstances; ++i) {
    const auto& desc = families[static_cast<std::size_t>(i) % families.size()];
    const auto inst = sample_instance(desc, 40000, static_cast<std::uint64_t>(i));
    const auto sol = solve_instance(inst);
    const auto s = inst.structured();
    for (const auto& t : sol.triples) {
      double e = std::numeric_limits<double>::infinity();
      try {
        e = rel(mu_fd_oracle(s, t.z, inst.p_norm()), mu_generic(s, t, inst.p_norm()));
      } catch (const Error&) {
      }
      worst_oracle = std::max(worst_oracle, e);
      bad_oracle += !(e <= kGenericVsOracle);
    }
  }
  const int bad = bad_generic + bad_gevp + bad_scalar + bad_oracle;
  return {bad == 0, fmt("300 instances each; failures generic/pevp %d (worst %.1e), pevp/gevp %d (%.1e), "
                        "pevp/scalar %d (%.1e), generic/fd %d (%.1e)",
                        bad_generic, worst_generic, bad_gevp, worst_gevp, bad_scalar, worst_scalar, bad_oracle,
                        worst_oracle)};
}

ProblemDescriptor desk_family(int family, int i) {
  const int n = 1 + i % 4;
  switch (family) {
    case 0: return ProblemDescriptor::dense_poly(1 + i % 3);
    case 1: return i % 2 ? ProblemDescriptor::lacunary_poly(3, {0, 1, 3}) : ProblemDescriptor::lacunary_poly(3, {0, 2, 3});
    case 2: return ProblemDescriptor::gevp(n);
    case 3: return ProblemDescriptor::pevp(n, 1 + (i / 4) % 3);
    case 4: return ProblemDescriptor::sparse_qep(n);
    default: return ProblemDescriptor::quadric(n);
  }
}

Outcome solver_certification() {
  constexpr int kPerFamily = 1000;
  const char* names[] = {"dense", "lacunary", "gevp", "pevp", "sparse_qep", "quadric"};
  std::string detail;
  bool ok = true;
  for (int f = 0; f < 6; ++f) {
    int count_bad = 0, residual_bad = 0, scale_bad = 0;
    double worst_res = 0, worst_scale = 0;
    for (int i = 0; i < kPerFamily; ++i) {
      const auto desc = desk_family(f, i);
      const auto inst = sample_instance(desc, 50000 + f, static_cast<std::uint64_t>(i));
      const auto sol = solve_instance(inst);
      count_bad += sol.triples.size() != expected_solution_count(desc);
      const auto s = inst.structured();
      for (const auto& t : sol.triples) {
        const double r = std::max({t.residual_right, t.residual_left,
                                   smallest_singular_value(s.evaluate(t.z.coords())) / inst.p_norm()});
        worst_res = std::max(worst_res, r);
        residual_bad += !(r <= kResidual);
        const double mu = mu_generic_unchecked(s, t, inst.p_norm());
        for (Complex scale : {Complex(2.0), Complex(0.0, 3.0), Complex(1e-3)}) {
          StructuredInstance st = s;
          for (auto& b : st.blocks) b *= scale;
          const double e = rel(mu_generic_unchecked(st, t, st.norm()), mu);
          worst_scale = std::max(worst_scale, e);
          scale_bad += !(e <= kScaleInvariance);
        }
      }
    }
    ok = ok && count_bad == 0 && residual_bad == 0 && scale_bad == 0;
    detail += fmt("%s: count %d/%d ok, residual max %.1e, scale max %.1e; ", names[f], kPerFamily - count_bad,
                  kPerFamily, worst_res, worst_scale);
  }
  return {ok, detail};
}

Outcome determinism() {
  const auto desc = ProblemDescriptor::pevp(2, 2);
  auto columns = [](const ExperimentSummary& s) {
    return fmt("%.17g,%.17g,%.17g,%.17g,%.17g,%zu", s.mom_estimate, s.naive_mean, s.naive_stderr, s.theory, s.rel_err,
               s.resample_count);
  };
  const std::string base = columns(experiment(desc, 40000, 1));
  bool ok = columns(experiment(desc, 40000, 1)) == base;
  for (std::size_t w : {4, 8}) ok = ok && columns(experiment(desc, 40000, w)) == base;
  return {ok, "pevp(n=2,d=2) n=40000 workers {1,1,4,8}: " + base};
}

}  // namespace

int main() {
  report("AC1", "dense polynomial roots", [] { return mc_criterion(ProblemDescriptor::dense_poly(6), 20000); });

  report("AC2", "dense matrix polynomials and pencils", [] {
    const auto a = experiment(ProblemDescriptor::pevp(2, 2), 40000);
    const auto b = experiment(ProblemDescriptor::pevp(3, 1), 40000);
    const auto c = experiment(ProblemDescriptor::gevp(3), 40000);
    const bool ok = a.rel_err <= kMcTolerance && b.rel_err <= kMcTolerance && c.rel_err <= kMcTolerance &&
                    std::abs(c.mom_estimate - 17.0) <= kMcTolerance * 17.0;
    return Outcome{ok, "pevp(2,2) " + describe(a) + "; pevp(3,1) " + describe(b) + "; gevp(3) " + describe(c)};
  });

  report("AC3", "lacunary polynomial", [] {
    return mc_criterion(ProblemDescriptor::lacunary_poly(7, {0, 3, 7}), 40000);
  });

  report("AC4", "sparse quadratic problem adjudication", [] { return adjudicate(ProblemDescriptor::sparse_qep(2), 100000); });

  report("AC5", "conic problem adjudication", [] { return adjudicate(ProblemDescriptor::quadric(2), 100000); });

  report("AC6", "bounds on the worst eigenvalue", [] {
    const auto s = experiment(ProblemDescriptor::pevp(2, 2), 10000);
    const bool ok = s.mean_mu_max_sq <= 22.0 && s.mean_log_mu_max <= kCorollaryLogBound;
    return Outcome{ok, fmt("mean mu_max^2=%.4g (<= 22), mean log mu_max=%.4g (<= %.4f)", s.mean_mu_max_sq,
                           s.mean_log_mu_max, kCorollaryLogBound)};
  });

  report("AC7", "stochastic condition relation", [] {
    const auto checks = verify_stochastic_suite(100, 100000, 2024);
    int bad = 0;
    double worst = 0;
    for (const auto& c : checks) {
      bad += !c.passed;
      worst = std::max(worst, rel(c.measured, c.expected));
    }
    return Outcome{bad == 0 && checks.size() == 100 && checks.front().tolerance == kStochasticTolerance,
                   fmt("%zu instances, %d outside 2%%, worst deviation %.3f%%", checks.size(), bad, 100 * worst)};
  });

  report("AC8", "condition engine coherence", engine_coherence);

  report("AC9", "solver certification", solver_certification);

  report("AC10", "integral lemma", [] {
    std::string detail;
    bool ok = true;
    for (int d : {1, 2, 3, 5}) {
      const double v = verify_lemma_lines(d), e = std::numbers::pi * d;
      ok = ok && rel(v, e) <= kLemmaTolerance;
      detail += fmt("lines d=%d %.8f/%.8f; ", d, v, e);
    }
    for (int n : {1, 2, 3}) {
      const double v = verify_lemma_subspace(n, 100000, 7), e = std::pow(std::numbers::pi, n) * n;
      ok = ok && rel(v, e) <= kLemmaTolerance;
      detail += fmt("subspace n=%d %.5g/%.5g; ", n, v, e);
    }
    return Outcome{ok, detail};
  });

  report("AC11", "determinism", determinism);

  std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
