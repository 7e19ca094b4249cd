#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "pevpcond/condition.hpp"
#include "pevpcond/errors.hpp"
#include "pevpcond/problems.hpp"
#include "support.hpp"

using namespace pevpcond;
using testing::diag;
using testing::identity;
using testing::rel_diff;

namespace {

const Complex i1(0.0, 1.0);

EigenTriple manual_triple(ProjectivePoint z, ComplexVector x, ComplexVector y) {
  EigenTriple t;
  t.z = std::move(z);
  t.x = std::move(x);
  t.y = std::move(y);
  t.trusted = true;
  return t;
}

ComplexVector e1(Eigen::Index n) {
  ComplexVector v = ComplexVector::Zero(n);
  v(0) = 1.0;
  return v;
}

MatrixPolynomial fixed_quadratic() {
  ComplexMatrix a0(2, 2), a1(2, 2), a2(2, 2);
  a0 << 1.0 + 2.0 * i1, -0.5, 0.3 * i1, 2.0;
  a1 << 0.5, 1.0 - i1, -1.0, 0.25 * i1;
  a2 << 2.0, 0.1, -0.4 * i1, 1.0 + i1;
  return MatrixPolynomial({a0, a1, a2});
}

struct Frozen {
  Complex lambda;
  double mu;
};

// From tests/oracles/frozen_values.py (mpmath, 50 digits).
const Frozen kQuadratic[] = {
    {{-0.82257854510425748, -1.2961023377138014}, 1.1595457112000178},
    {{-0.65070690797962148, 0.85018806377274406}, 1.0044987100365619},
    {{0.39592258852277282, 1.0671699876757812}, 1.1605269424054126},
    {{0.48238148836036118, -0.71437471000996393}, 0.92824744211640145},
};

const Frozen kCubic[] = {
    {{-0.73440416485737996, 0.17887881981031991}, 0.55901132671393407},
    {{0.92318826346421715, 0.066463314311457488}, 0.80234976867301793},
    {{1.0612159013931628, -1.9953421341217774}, 1.030189614644602},
};

const Frozen& nearest(const Frozen* table, std::size_t n, Complex lambda) {
  const Frozen* best = table;
  for (std::size_t k = 1; k < n; ++k)
    if (std::abs(table[k].lambda - lambda) < std::abs(best->lambda - lambda)) best = table + k;
  return *best;
}

}  // namespace

TEST_SUITE("condition") {
  TEST_CASE("closed forms on the diagonal pencil") {
    const MatrixPolynomial p({diag({1.0, 2.0}), -identity(2)});
    const ProjectivePoint z{1.0, 1.0};
    const EigenTriple t = manual_triple(z, e1(2), e1(2));
    CHECK(std::abs(mu_pevp_closed(p, t) - std::sqrt(3.5)) < 1e-14);
    CHECK(std::abs(mu_gevp_closed(diag({1.0, 2.0}), identity(2), t) - std::sqrt(3.5)) < 1e-14);
    CHECK(std::abs(mu_generic(structured(p), t, p.norm()) - std::sqrt(3.5)) < 1e-14);

    ComplexVector e2 = ComplexVector::Zero(2);
    e2(1) = 1.0;
    const EigenTriple t2 = manual_triple(ProjectivePoint{2.0, 1.0}, e2, e2);
    CHECK(std::abs(mu_gevp_closed(diag({1.0, 2.0}), identity(2), t2) - std::sqrt(1.4)) < 1e-14);
    CHECK(std::abs(mu_stochastic(std::sqrt(3.5), 8) - 7.0 / 16.0) < 1e-15);
  }

  TEST_CASE("scalar closed form") {
    const std::vector<Complex> c{-1.0, 0.0, 1.0};
    CHECK(std::abs(mu_scalar_closed(c, 1.0) - std::sqrt(6.0) / 4.0) < 1e-15);
    CHECK(std::abs(mu_scalar_closed(c, -1.0) - std::sqrt(6.0) / 4.0) < 1e-15);
    const EigenTriple t = manual_triple(ProjectivePoint{1.0, 1.0}, e1(1), e1(1));
    CHECK(std::abs(mu_pevp_closed(MatrixPolynomial::scalar(c), t) - std::sqrt(6.0) / 4.0) < 1e-14);
    const std::vector<Complex> x3{0.0, 0.0, 0.0, 1.0};
    CHECK(std::isinf(mu_scalar_closed(x3, 0.0)));
  }

  TEST_CASE("multiple eigenvalue has infinite condition") {
    const MatrixPolynomial p({identity(2), -2.0 * identity(2), identity(2)});
    const EigenTriple t = manual_triple(ProjectivePoint{1.0, 1.0}, e1(2), e1(2));
    CHECK(std::isinf(mu_pevp_closed(p, t)));
    CHECK(std::isinf(mu_generic(structured(p), t, p.norm())));
    CHECK(std::isinf(mu_stochastic(std::numeric_limits<double>::infinity(), 12)));
  }

  TEST_CASE("untrusted triples are refused") {
    const MatrixPolynomial p({diag({1.0, 2.0}), -identity(2)});
    EigenTriple t = manual_triple(ProjectivePoint{1.0, 1.0}, e1(2), e1(2));
    t.trusted = false;
    CHECK_THROWS_AS(mu_pevp_closed(p, t), Error);
    CHECK_THROWS_AS(mu_generic(structured(p), t, p.norm()), Error);
    CHECK(std::abs(mu_generic_unchecked(structured(p), t, p.norm()) - std::sqrt(3.5)) < 1e-14);
  }

  TEST_CASE("frozen oracle: quadratic 2x2 instance") {
    const MatrixPolynomial p = fixed_quadratic();
    const auto triples = eigen_triples(p);
    REQUIRE(triples.size() == 4);
    for (const auto& t : triples) {
      REQUIRE(std::abs(t.z[1]) > 0.1);
      const Complex lambda = t.z[0] / t.z[1];
      const Frozen& f = nearest(kQuadratic, 4, lambda);
      CHECK(std::abs(lambda - f.lambda) < 1e-12);
      CHECK(rel_diff(mu_pevp_closed(p, t), f.mu) < 1e-10);
      CHECK(rel_diff(mu_generic(structured(p), t, p.norm()), f.mu) < 1e-10);
    }
  }

  TEST_CASE("frozen oracle: scalar cubic") {
    const std::vector<Complex> c{{2.0, -1.0}, {0.0, 0.0}, {-3.0, 0.5}, {1.0, 1.0}};
    const auto roots = roots_homogeneous(c);
    REQUIRE(roots.size() == 3);
    for (const auto& z : roots) {
      const Complex lambda = z[0] / z[1];
      const Frozen& f = nearest(kCubic, 3, lambda);
      CHECK(std::abs(lambda - f.lambda) < 1e-12);
      CHECK(rel_diff(mu_scalar_closed(c, lambda), f.mu) < 1e-12);
    }
  }

  TEST_CASE("property: structured engine equals the PEVP closed form with full masks") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      testing::Gen g(seed);
      const int n = g.integer(1, 4), d = g.integer(1, 3);
      const MatrixPolynomial p = g.poly(n, d);
      for (const auto& t : eigen_triples(p))
        CHECK(rel_diff(mu_generic(structured(p), t, p.norm()), mu_pevp_closed(p, t)) < 1e-10);
    }
  }

  TEST_CASE("property: PEVP with d = 1 equals the GEVP closed form") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      testing::Gen g(seed);
      const int n = g.integer(1, 4);
      const ComplexMatrix a = g.matrix(n), b = g.matrix(n);
      const MatrixPolynomial p({a, -b});
      for (const auto& t : eigen_triples(p))
        CHECK(rel_diff(mu_pevp_closed(p, t), mu_gevp_closed(a, b, t)) < 1e-12);
    }
  }

  TEST_CASE("property: PEVP with n = 1 equals the scalar closed form") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      testing::Gen g(seed);
      const int d = g.integer(1, 6);
      std::vector<Complex> c;
      for (int k = 0; k <= d; ++k) c.push_back(g.scalar());
      const MatrixPolynomial p = MatrixPolynomial::scalar(c);
      for (const auto& t : eigen_triples(p)) {
        if (std::abs(t.z[1]) < 1e-3) continue;
        CHECK(rel_diff(mu_pevp_closed(p, t), mu_scalar_closed(c, t.z[0] / t.z[1])) < 1e-10);
      }
    }
  }

  TEST_CASE("finite-difference oracle on the hand examples") {
    const MatrixPolynomial p({diag({1.0, 2.0}), -identity(2)});
    CHECK(rel_diff(mu_fd_oracle(structured(p), ProjectivePoint{1.0, 1.0}, p.norm()), std::sqrt(3.5)) < 1e-4);
    const std::vector<Complex> c{-1.0, 0.0, 1.0};
    const MatrixPolynomial s = MatrixPolynomial::scalar(c);
    CHECK(rel_diff(mu_fd_oracle(structured(s), ProjectivePoint{1.0, 1.0}, s.norm()), std::sqrt(6.0) / 4.0) < 1e-4);
  }

  TEST_CASE("property: structured engine equals the finite-difference oracle") {
    const std::vector<ProblemDescriptor> families = {
        ProblemDescriptor::dense_poly(4),   ProblemDescriptor::lacunary_poly(5, {0, 2, 5}),
        ProblemDescriptor::gevp(3),         ProblemDescriptor::pevp(2, 3),
        ProblemDescriptor::sparse_qep(3),   ProblemDescriptor::quadric(2),
    };
    for (const auto& desc : families) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const ProblemInstance inst = sample_instance(desc, 1000 + seed, 0);
        const auto sol = solve_instance(inst);
        const auto s = inst.structured();
        for (const auto& t : sol.triples) {
          const double mu = mu_generic(s, t, inst.p_norm());
          CHECK_MESSAGE(rel_diff(mu_fd_oracle(s, t.z, inst.p_norm()), mu) < 1e-4, desc.label());
        }
      }
    }
  }

  TEST_CASE("scale invariance on a fixed triple") {
    const ProblemInstance inst = sample_instance(ProblemDescriptor::sparse_qep(2), 5, 0);
    const auto sol = solve_instance(inst);
    const StructuredInstance s = inst.structured();
    for (Complex t : {Complex(2.0), Complex(0.0, 3.0), Complex(1e-3)}) {
      StructuredInstance scaled = s;
      for (auto& b : scaled.blocks) b *= t;
      for (const auto& tr : sol.triples)
        CHECK(rel_diff(mu_generic(scaled, tr, scaled.norm()), mu_generic(s, tr, s.norm())) < 1e-12);
    }
  }

  TEST_CASE("direction-sampled stochastic condition") {
    testing::Gen g(8);
    const MatrixPolynomial p = g.poly(2, 2);
    const auto s = structured(p);
    for (const auto& t : eigen_triples(p)) {
      const double mu = mu_pevp_closed(p, t);
      CHECK(rel_diff(mu_stochastic_sampled(s, t, p.norm(), 100000, 77), mu_stochastic(mu, 12)) < 0.02);
    }
  }

  TEST_CASE("stochastic relation on structured families") {
    for (const auto& desc : {ProblemDescriptor::sparse_qep(2), ProblemDescriptor::quadric(2),
                             ProblemDescriptor::lacunary_poly(7, {0, 3, 7})}) {
      const auto inst = sample_instance(desc, 5, 0);
      const auto s = inst.structured();
      for (const auto& t : solve_instance(inst).triples) {
        const double mu = mu_generic(s, t, inst.p_norm());
        CHECK_MESSAGE(rel_diff(mu_stochastic_sampled(s, t, inst.p_norm(), 100000, 3), mu_stochastic(mu, desc.m())) < 0.02,
                      desc.label());
      }
    }
  }

  TEST_CASE("condition report") {
    const MatrixPolynomial p({diag({1.0, 2.0}), -identity(2)});
    const auto triples = eigen_triples(p);
    const auto rep = condition_report(structured(p), triples, p.norm());
    REQUIRE(rep.per_eigenvalue.size() == 2);
    CHECK(std::abs(rep.mean_mu_sq - (3.5 + 1.4) / 2.0) < 1e-12);
    CHECK(std::abs(rep.mu_max - std::sqrt(3.5)) < 1e-12);
    for (const auto& e : rep.per_eigenvalue) CHECK(std::abs(e.mu_st_sq - e.mu * e.mu / 8.0) < 1e-14);
  }

  TEST_CASE("structured instance validation") {
    StructuredInstance s = sample_instance(ProblemDescriptor::sparse_qep(2), 1, 0).structured();
    s.validate();
    s.blocks[2](0, 1) = 1.0;  // A_2 is diagonal
    CHECK_THROWS_AS(s.validate(), Error);
    CHECK(StructuredWeights::quadric(2).free_count() == 12);
    CHECK(StructuredWeights::dense_line(3, 2).free_count() == 27);
  }
}
