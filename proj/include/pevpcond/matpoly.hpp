#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pevpcond/linalg.hpp"
#include "pevpcond/projective.hpp"

namespace pevpcond {

/// P(alpha, beta) = sum_k alpha^k beta^(d-k) A_k with n x n coefficients.
class MatrixPolynomial {
 public:
  /// Throws Error(invalid_argument) unless there are d+1 >= 2 square
  /// coefficients of one size with finite, nonzero stacked norm.
  explicit MatrixPolynomial(std::vector<ComplexMatrix> coeffs);

  /// Scalar (1 x 1) polynomial with coefficient a_k of X^k Y^(N-k).
  static MatrixPolynomial scalar(std::span<const Complex> coeffs);

  Eigen::Index n() const { return coeffs_.front().rows(); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const ComplexMatrix& coeff(int k) const { return coeffs_[static_cast<std::size_t>(k)]; }
  const std::vector<ComplexMatrix>& coeffs() const { return coeffs_; }
  /// Euclidean norm of the stacked coefficients, ||A||_F.
  double norm() const;

 private:
  std::vector<ComplexMatrix> coeffs_;
};

enum class HomogeneousVariable { alpha, beta };

ComplexMatrix evaluate(const MatrixPolynomial& p, const ProjectivePoint& z);
ComplexMatrix evaluate(const MatrixPolynomial& p, Complex alpha, Complex beta);
ComplexMatrix derivative(const MatrixPolynomial& p, const ProjectivePoint& z, HomogeneousVariable var);
ComplexMatrix derivative(const MatrixPolynomial& p, Complex alpha, Complex beta, HomogeneousVariable var);

/// First companion form lambda E - F: E = diag(I, ..., I, A_d); F has identity
/// blocks on the block superdiagonal and last block row (-A_0, ..., -A_{d-1}).
struct CompanionPencil {
  ComplexMatrix e;
  ComplexMatrix f;
};

CompanionPencil companion_pencil(const MatrixPolynomial& p);

/// Change of homogeneous variables z = u z~ with |det u| = 1.
class MoebiusMap {
 public:
  explicit MoebiusMap(Eigen::Matrix2cd u);
  static MoebiusMap identity();
  static MoebiusMap swap();

  const Eigen::Matrix2cd& matrix() const { return u_; }
  ProjectivePoint apply(const ProjectivePoint& z) const;
  ProjectivePoint apply_inverse(const ProjectivePoint& z) const;

 private:
  Eigen::Matrix2cd u_;
};

/// p~(z~) = p(u z~), expanded coefficient-wise.
MatrixPolynomial moebius_substitute(const MatrixPolynomial& p, const MoebiusMap& u);

struct EigenSolveOptions {
  std::uint64_t seed = 0x5eedULL;
  int moebius_retries = 3;
  double leading_tolerance = 1e-6;
  SchurOptions schur;
};

/// All d*n homogeneous eigenvalues, with multiplicity. Throws
/// Error(degenerate_instance) when no substitution yields a usable leading
/// coefficient.
std::vector<ProjectivePoint> hom_eigenvalues(const MatrixPolynomial& p, const EigenSolveOptions& options = {});

struct EigenTriple {
  ProjectivePoint z;
  ComplexVector x;  // right eigenvector, unit
  ComplexVector y;  // left eigenvector, unit
  double residual_right = 0.0;
  double residual_left = 0.0;
  bool trusted = false;
};

inline constexpr double kTrustedResidual = 1e-8;

/// Null vectors of the singular matrix m = M(z). Residuals are measured
/// relative to `scale` (the stacked input norm).
EigenTriple eigen_triple_at(const ComplexMatrix& m, const ProjectivePoint& z, double scale,
                            std::uint64_t seed = 0x5eedULL);

std::vector<EigenTriple> eigen_triples(const MatrixPolynomial& p, const EigenSolveOptions& options = {});

/// Projective roots of sum_k a_k X^k Y^(N-k).
std::vector<ProjectivePoint> roots_homogeneous(std::span<const Complex> coeffs, const EigenSolveOptions& options = {});

}  // namespace pevpcond
