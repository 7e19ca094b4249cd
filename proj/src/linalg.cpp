#include "pevpcond/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "pevpcond/errors.hpp"

namespace pevpcond {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::non_convergence: return "NonConvergence";
    case ErrorCode::exact_singular: return "ExactSingular";
    case ErrorCode::no_null_vector: return "NoNullVector";
    case ErrorCode::degenerate_instance: return "DegenerateInstance";
    case ErrorCode::untrusted_eigenpair: return "UntrustedEigenpair";
    case ErrorCode::singular_curve_point: return "SingularCurvePoint";
    case ErrorCode::oracle_divergence: return "OracleDivergence";
    case ErrorCode::too_many_resamples: return "TooManyResamples";
  }
  return "Unknown";
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex c = m.data()[i];
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

SchurDecomposition schur_eigenvalues(const ComplexMatrix& m, const SchurOptions& options) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::invalid_argument, "schur_eigenvalues: matrix is not square");
  if (m.rows() == 0) throw Error(ErrorCode::invalid_argument, "schur_eigenvalues: empty matrix");
  if (m.rows() > options.max_size)
    throw Error(ErrorCode::invalid_argument,
                "schur_eigenvalues: size " + std::to_string(m.rows()) + " exceeds cap " +
                    std::to_string(options.max_size));
  if (!all_finite(m)) throw Error(ErrorCode::invalid_argument, "schur_eigenvalues: non-finite entries");

  // Householder Hessenberg reduction followed by single-shift QR with
  // Wilkinson shifts and exceptional shifts after stalled sweeps.
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(m.rows());
  schur.setMaxIterations(static_cast<Eigen::Index>(options.sweeps_per_eigenvalue) * m.rows());
  schur.compute(Eigen::MatrixXcd(m), true);
  if (schur.info() != Eigen::Success)
    throw Error(ErrorCode::non_convergence, "schur_eigenvalues: QR iteration did not converge");

  SchurDecomposition out;
  out.q = schur.matrixU();
  out.t = schur.matrixT();
  // Eigen leaves rounding noise below the diagonal; the factor is triangular.
  for (Eigen::Index i = 0; i < out.t.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j) out.t(i, j) = 0.0;
  out.eigenvalues.reserve(static_cast<std::size_t>(out.t.rows()));
  for (Eigen::Index i = 0; i < out.t.rows(); ++i) out.eigenvalues.push_back(out.t(i, i));
  return out;
}

LuFactorization::LuFactorization(const ComplexMatrix& m, double regularization) : lu_(m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::invalid_argument, "LU: matrix is not square");
  const int n = static_cast<int>(m.rows());
  perm_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm_[static_cast<std::size_t>(i)] = i;

  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(lu_(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double a = std::abs(lu_(i, k));
      if (a > best) {
        best = a;
        piv = i;
      }
    }
    if (piv != k) {
      lu_.row(k).swap(lu_.row(piv));
      std::swap(perm_[static_cast<std::size_t>(k)], perm_[static_cast<std::size_t>(piv)]);
      sign_ = -sign_;
    }
    Complex& pivot = lu_(k, k);
    if (regularization > 0.0 && std::abs(pivot) < regularization) {
      pivot = (pivot == Complex(0.0)) ? Complex(regularization) : regularization * pivot / std::abs(pivot);
      regularized_ = true;
    } else if (pivot == Complex(0.0)) {
      throw Error(ErrorCode::exact_singular, "LU: exactly zero pivot at column " + std::to_string(k));
    }
    for (int i = k + 1; i < n; ++i) {
      const Complex f = lu_(i, k) / pivot;
      lu_(i, k) = f;
      if (f == Complex(0.0)) continue;
      for (int j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
    }
  }
}

ComplexVector LuFactorization::solve(const ComplexVector& rhs) const {
  const int n = size();
  if (rhs.size() != n) throw Error(ErrorCode::invalid_argument, "LU solve: rhs length mismatch");
  ComplexVector x(n);
  for (int i = 0; i < n; ++i) x(i) = rhs(perm_[static_cast<std::size_t>(i)]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) x(i) -= lu_(i, j) * x(j);
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) x(i) -= lu_(i, j) * x(j);
    x(i) /= lu_(i, i);
  }
  return x;
}

Complex LuFactorization::determinant() const {
  Complex det = static_cast<double>(sign_);
  for (int i = 0; i < size(); ++i) det *= lu_(i, i);
  return det;
}

ComplexVector lu_solve(const ComplexMatrix& m, const ComplexVector& rhs) {
  if (m.rows() != rhs.size()) throw Error(ErrorCode::invalid_argument, "lu_solve: rhs length mismatch");
  return LuFactorization(m).solve(rhs);
}

Complex determinant(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::invalid_argument, "determinant: matrix is not square");
  try {
    return LuFactorization(m).determinant();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::exact_singular) return 0.0;
    throw;
  }
}

void canonicalize_phase(ComplexVector& v) {
  double largest = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) largest = std::max(largest, std::abs(v(i)));
  if (largest == 0.0) return;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a >= largest * (1.0 - 1e-12)) {
      const Complex phase = std::conj(v(i)) / a;
      v *= phase;
      v(i) = Complex(std::abs(v(i)), 0.0);
      return;
    }
  }
}

NullVectorResult try_null_vector(const ComplexMatrix& m, Side side, const NullVectorOptions& options) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(ErrorCode::invalid_argument, "null_vector: matrix must be square and non-empty");
  const Eigen::Index n = m.rows();
  const double fro = m.norm();
  const double scale = options.scale > 0.0 ? options.scale : fro;

  const ComplexMatrix a = side == Side::right ? ComplexMatrix(m) : ComplexMatrix(m.adjoint());
  const double tiny = 1e2 * kMachineEpsilon * (fro > 0.0 ? fro : 1.0);
  const LuFactorization lu(a, tiny);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  NullVectorResult out;
  ComplexVector& x = out.vector;
  x.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = Complex(normal(rng), normal(rng));
  x.normalize();

  const double target = options.tolerance * scale;
  out.residual = (a * x).norm();
  for (int it = 0; it < options.max_iterations && !(out.residual <= target); ++it) {
    ComplexVector next = lu.solve(x);
    const double nx = next.norm();
    if (!std::isfinite(nx) || nx == 0.0) break;
    x = next / nx;
    out.residual = (a * x).norm();
  }
  out.converged = out.residual <= target;
  canonicalize_phase(x);
  return out;
}

ComplexVector null_vector(const ComplexMatrix& m, Side side, const NullVectorOptions& options) {
  NullVectorResult r = try_null_vector(m, side, options);
  if (!r.converged) {
    const double scale = options.scale > 0.0 ? options.scale : m.norm();
    throw Error(ErrorCode::no_null_vector,
                "null_vector: relative residual " + std::to_string(r.residual / scale) + " above target after " +
                    std::to_string(options.max_iterations) + " iterations");
  }
  return std::move(r.vector);
}

std::vector<double> singular_values(const ComplexMatrix& m) {
  const Eigen::MatrixXcd dense = m;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(dense);
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

double smallest_singular_value(const ComplexMatrix& m) {
  const auto s = singular_values(m);
  return s.empty() ? 0.0 : *std::min_element(s.begin(), s.end());
}

}  // namespace pevpcond
