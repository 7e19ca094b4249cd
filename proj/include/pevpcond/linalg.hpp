#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace pevpcond {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

inline constexpr double kMachineEpsilon = 2.220446049250313e-16;

struct SchurDecomposition {
  ComplexMatrix q;  // unitary
  ComplexMatrix t;  // upper triangular, m = q t q*
  std::vector<Complex> eigenvalues;
};

struct SchurOptions {
  int max_size = 512;
  int sweeps_per_eigenvalue = 30;
};

/// Complex Schur form via Hessenberg reduction and shifted QR.
/// Throws Error(non_convergence) when the sweep budget is exhausted and
/// Error(invalid_argument) for non-square, non-finite or oversized input.
SchurDecomposition schur_eigenvalues(const ComplexMatrix& m, const SchurOptions& options = {});

/// LU factorization with partial pivoting, P m = L U.
class LuFactorization {
 public:
  /// When `regularization` is positive, pivots smaller in modulus are
  /// replaced by a pivot of that magnitude (phase kept). Otherwise an exactly
  /// zero pivot raises Error(exact_singular).
  explicit LuFactorization(const ComplexMatrix& m, double regularization = 0.0);

  ComplexVector solve(const ComplexVector& rhs) const;
  Complex determinant() const;
  int size() const { return static_cast<int>(lu_.rows()); }
  bool regularized() const { return regularized_; }

 private:
  ComplexMatrix lu_;
  std::vector<int> perm_;
  int sign_ = 1;
  bool regularized_ = false;
};

ComplexVector lu_solve(const ComplexMatrix& m, const ComplexVector& rhs);

Complex determinant(const ComplexMatrix& m);

enum class Side { left, right };

struct NullVectorOptions {
  // Residual scale; zero means the Frobenius norm of the matrix.
  double scale = 0.0;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
  int max_iterations = 5;
  double tolerance = 1e-10;
};

struct NullVectorResult {
  ComplexVector vector;  // unit, canonical phase
  double residual = 0.0;  // ||m x|| or ||x* m||, absolute
  bool converged = false;
};

/// Inverse iteration without the error path; `converged` reports whether the
/// residual target was met.
NullVectorResult try_null_vector(const ComplexMatrix& m, Side side, const NullVectorOptions& options = {});

/// Unit vector x with m x ~ 0 (right) or x* m ~ 0 (left), by inverse
/// iteration. Phase is canonical: largest-modulus entry real positive.
/// Throws Error(no_null_vector) if the residual target is missed.
ComplexVector null_vector(const ComplexMatrix& m, Side side, const NullVectorOptions& options = {});

std::vector<double> singular_values(const ComplexMatrix& m);
double smallest_singular_value(const ComplexMatrix& m);

/// Multiplies v by a unit scalar so that its largest-modulus entry (lowest
/// index on ties within a relative 1e-12) is real and positive.
void canonicalize_phase(ComplexVector& v);

bool all_finite(const ComplexMatrix& m);

}  // namespace pevpcond
