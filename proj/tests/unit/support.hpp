#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "pevpcond/condition.hpp"
#include "pevpcond/matpoly.hpp"
#include "pevpcond/problems.hpp"
#include "pevpcond/random.hpp"

namespace testing {

using pevpcond::Complex;
using pevpcond::ComplexMatrix;
using pevpcond::ComplexVector;

inline double rel_diff(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

inline ComplexMatrix diag(std::initializer_list<Complex> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (Complex c : d) m(i, i) = c, ++i;
  return m;
}

inline ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

// Small generator for property tests: sizes, degrees and Gaussian data, all
// derived from one seed.
struct Gen {
  explicit Gen(std::uint64_t seed) : gauss(seed), state(seed) {}

  int integer(int lo, int hi) {
    state = pevpcond::mix64(state);
    return lo + static_cast<int>(state % static_cast<std::uint64_t>(hi - lo + 1));
  }
  ComplexMatrix matrix(Eigen::Index n) { return gauss.matrix(n, n); }
  pevpcond::MatrixPolynomial poly(Eigen::Index n, int d) {
    std::vector<ComplexMatrix> c;
    for (int k = 0; k <= d; ++k) c.push_back(matrix(n));
    return pevpcond::MatrixPolynomial(std::move(c));
  }
  Complex scalar() { return gauss(); }

  pevpcond::ComplexGaussian gauss;
  std::uint64_t state;
};

// Worst smallest singular value of M(z) over the solutions, relative to the
// input norm.
inline double worst_relative_residual(const pevpcond::ProblemInstance& inst, const pevpcond::Solution& sol) {
  const auto s = inst.structured();
  double worst = 0.0;
  for (const auto& t : sol.triples)
    worst = std::max(worst, pevpcond::smallest_singular_value(s.evaluate(t.z.coords())) / inst.p_norm());
  return worst;
}

}  // namespace testing
