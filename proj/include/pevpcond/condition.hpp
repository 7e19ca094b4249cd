#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pevpcond/geometry.hpp"
#include "pevpcond/linalg.hpp"
#include "pevpcond/matpoly.hpp"
#include "pevpcond/projective.hpp"

namespace pevpcond {

/// Free-entry pattern of one coefficient block.
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// How the matrix-valued map M(z) = sum_k w_k(z) B_k depends on the output
/// point z, and which entries of each block B_k are free.
///
/// On the projective line the weights are the monomials alpha^k beta^(d-k),
/// k = 0..d. On the conic they are the coordinates (alpha, beta, gamma).
struct StructuredWeights {
  OutputVariety variety = OutputVariety::projective_line;
  int degree = 1;
  std::vector<Mask> masks;

  static StructuredWeights dense_line(Eigen::Index n, int degree);
  static StructuredWeights quadric(Eigen::Index n);

  std::size_t block_count() const { return masks.size(); }
  /// Number of free complex parameters, m.
  std::size_t free_count() const;
  std::vector<Complex> weights(const ComplexVector& z) const;
  /// Directional derivatives D w_k(z) t.
  std::vector<Complex> directional(const ComplexVector& z, const ComplexVector& t) const;
};

/// Structure plus concrete blocks. Masked entries are expected to be zero.
struct StructuredInstance {
  StructuredWeights structure;
  std::vector<ComplexMatrix> blocks;

  Eigen::Index n() const { return blocks.front().rows(); }
  /// Stacked Euclidean norm of the blocks.
  double norm() const;
  ComplexMatrix evaluate(const ComplexVector& z) const;
  /// D_t M(z) = sum_k (D w_k(z) t) B_k.
  ComplexMatrix directional_derivative(const ComplexVector& z, const ComplexVector& t) const;
  /// Throws Error(invalid_argument) on shape or mask violations.
  void validate() const;
};

StructuredInstance structured(const MatrixPolynomial& p);

/// Closed-form PEVP condition number at the unit representative (alpha,
/// beta), with v = conj(beta) dP/dalpha x - conj(alpha) dP/dbeta x.
double mu_pevp_closed(const MatrixPolynomial& p, const EigenTriple& triple);

/// Closed-form GEVP condition number for det(beta A - alpha B) = 0.
double mu_gevp_closed(const ComplexMatrix& a, const ComplexMatrix& b, const EigenTriple& triple);

/// ||p|| ||(1, z, ..., z^N)|| / (|p'(z)| (1 + |z|^2)) at an affine root z.
double mu_scalar_closed(std::span<const Complex> coeffs, Complex z);

/// Structured condition number: the input metric restricted to the free
/// entries, output measured along the tangent of the output variety.
/// Reduces to mu_pevp_closed when every mask is full.
double mu_generic(const StructuredInstance& inst, const EigenTriple& triple, double p_norm);

/// Same as mu_generic without the trusted-triple check.
double mu_generic_unchecked(const StructuredInstance& inst, const EigenTriple& triple, double p_norm);

struct FdOracleOptions {
  double step = 1e-6;  // relative to the instance norm
  double newton_tolerance = 1e-12;
  int max_newton_steps = 10;
};

/// Condition number by central differences of the solution map. Each free
/// real direction is perturbed and the solution re-tracked by Newton's
/// method on the output variety starting from z. Throws
/// Error(oracle_divergence) when tracking fails.
double mu_fd_oracle(const StructuredInstance& inst, const ProjectivePoint& z, double p_norm,
                    const FdOracleOptions& options = {});

/// mu_st^2 = mu^2 / m.
double mu_stochastic(double mu, std::size_t m_full);

/// Direction-sampled mu_st^2: average over uniformly random unit
/// perturbations of the free parameters of |y* M(dp, z) x|^2 / |y* D_t M x|^2,
/// times p_norm^2.
double mu_stochastic_sampled(const StructuredInstance& inst, const EigenTriple& triple, double p_norm,
                             std::size_t samples, std::uint64_t seed);

struct EigenCondition {
  ProjectivePoint z;
  double mu = 0.0;
  double mu_st_sq = 0.0;
  bool trusted = false;
};

struct ConditionReport {
  std::vector<EigenCondition> per_eigenvalue;
  double mean_mu_sq = 0.0;
  double mu_max = 0.0;
};

ConditionReport condition_report(const StructuredInstance& inst, std::span<const EigenTriple> triples, double p_norm);

/// Threshold below which a condition denominator counts as zero, relative
/// to the input scale.
inline constexpr double kInfiniteConditionFactor = 1e3 * kMachineEpsilon;

}  // namespace pevpcond
