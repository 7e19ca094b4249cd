#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "pevpcond/errors.hpp"
#include "pevpcond/montecarlo.hpp"
#include "pevpcond/random.hpp"

using namespace pevpcond;

TEST_SUITE("montecarlo") {
  TEST_CASE("median of means") {
    const std::vector<double> a{2.0, 100.0, 3.0};
    CHECK(median_of_means(a, 3) == 3.0);
    const std::vector<double> b{1, 1, 1, 1, 1000, 1};
    CHECK(median_of_means(b, 3) == 1.0);
    const std::vector<double> c(12, 2.5);
    CHECK(median_of_means(c, 4) == 2.5);
    CHECK(median_of_means(c, 1) == 2.5);
    CHECK_THROWS_AS(median_of_means(b, 4), Error);
    CHECK_THROWS_AS(median_of_means(b, 0), Error);
  }

  TEST_CASE("substream seeds") {
    CHECK(substream_seed(42, 0) == substream_seed(42, 0));
    CHECK(substream_seed(42, 0) != substream_seed(42, 1));
    CHECK(substream_seed(42, 0, 0) != substream_seed(42, 0, 1));
    CHECK(substream_seed(42, 5) != substream_seed(43, 5));
  }

  TEST_CASE("lemma on unions of lines") {
    for (int d : {1, 2, 3, 5}) CHECK(std::abs(verify_lemma_lines(d) - std::numbers::pi * d) < 1e-6);
  }

  TEST_CASE("lemma on linear subspaces") {
    CHECK(std::abs(verify_lemma_subspace(2, 100000, 5) / (2.0 * std::numbers::pi * std::numbers::pi) - 1.0) < 0.01);
  }

  TEST_CASE("small experiment agrees with theory") {
    ExperimentConfig cfg{ProblemDescriptor::gevp(2)};
    cfg.samples = 4000;
    cfg.blocks = 8;
    cfg.seed = 3;
    const auto s = run_experiment(cfg);
    CHECK(s.theory == 7.0);
    CHECK(s.resample_count == 0);
    CHECK(s.count_mismatches == 0);
    CHECK(std::abs(s.naive_mean - 7.0) < 5.0 * s.naive_stderr);
    CHECK(s.rel_err == doctest::Approx(std::abs(s.mom_estimate - 7.0) / 7.0));
  }

  TEST_CASE("determinism across worker counts") {
    ExperimentConfig cfg{ProblemDescriptor::sparse_qep(2)};
    cfg.samples = 800;
    cfg.blocks = 16;
    cfg.keep_values = true;
    cfg.workers = 1;
    const auto base = run_experiment(cfg);
    for (std::size_t w : {4, 8}) {
      cfg.workers = w;
      const auto other = run_experiment(cfg);
      CHECK(other.mom_estimate == base.mom_estimate);
      CHECK(other.naive_mean == base.naive_mean);
      CHECK(other.naive_stderr == base.naive_stderr);
      CHECK(other.values == base.values);
    }
  }

  TEST_CASE("config validation") {
    ExperimentConfig cfg{ProblemDescriptor::gevp(2)};
    cfg.samples = 100;
    cfg.blocks = 16;
    CHECK_THROWS_AS(run_experiment(cfg), Error);
    cfg.blocks = 0;
    CHECK_THROWS_AS(run_experiment(cfg), Error);
  }

  TEST_CASE("evaluate_instance") {
    const auto st = evaluate_instance(ProblemDescriptor::pevp(2, 2), 42, 0, 10);
    CHECK(st.rejected_attempts == 0);
    CHECK(st.mean_mu_sq > 0.0);
    CHECK(st.mu_max * st.mu_max >= st.mean_mu_sq);
  }
}
