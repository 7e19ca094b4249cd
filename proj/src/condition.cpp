#include "pevpcond/condition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "pevpcond/errors.hpp"
#include "pevpcond/random.hpp"

namespace pevpcond {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_trusted(const EigenTriple& triple) {
  if (!triple.trusted)
    throw Error(ErrorCode::untrusted_eigenpair, "condition number requested for an untrusted eigen-triple");
}

std::vector<Complex> powers(Complex x, int d) {
  std::vector<Complex> out(static_cast<std::size_t>(d) + 1);
  out[0] = 1.0;
  for (int k = 1; k <= d; ++k) out[static_cast<std::size_t>(k)] = out[static_cast<std::size_t>(k) - 1] * x;
  return out;
}

// tr(M^{-1} D) from an explicit inverse.
Complex trace_product(const ComplexMatrix& inverse, const ComplexMatrix& d) {
  Complex tr = 0.0;
  for (Eigen::Index i = 0; i < inverse.rows(); ++i)
    for (Eigen::Index j = 0; j < inverse.cols(); ++j) tr += inverse(i, j) * d(j, i);
  return tr;
}

// Newton tracking of a solution of det M(w) = 0 (and g(w) = 0 on the conic)
// in the affine chart w = z + basis c. Returns the chart coordinates c.
ComplexVector track_solution(const StructuredInstance& inst, const ComplexVector& z, const ComplexMatrix& basis,
                             const FdOracleOptions& options) {
  const Eigen::Index dim = basis.cols();
  const Eigen::Index n = inst.n();
  ComplexVector c = ComplexVector::Zero(dim);
  for (int it = 0; it < options.max_newton_steps; ++it) {
    const ComplexVector w = z + basis * c;
    const ComplexMatrix m = inst.evaluate(w);
    ComplexMatrix inverse(n, n);
    try {
      const LuFactorization lu(m);
      for (Eigen::Index j = 0; j < n; ++j) inverse.col(j) = lu.solve(ComplexVector::Unit(n, j));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::exact_singular) return c;
      throw;
    }
    ComplexVector tau(dim);
    for (Eigen::Index j = 0; j < dim; ++j)
      tau(j) = trace_product(inverse, inst.directional_derivative(w, basis.col(j)));

    ComplexVector delta(dim);
    if (inst.structure.variety == OutputVariety::projective_line) {
      delta(0) = -1.0 / tau(0);
    } else {
      const ComplexVector grad = quadric_gradient(w);
      Eigen::Matrix2cd jac;
      jac(0, 0) = (grad.transpose() * basis.col(0))(0);
      jac(0, 1) = (grad.transpose() * basis.col(1))(0);
      jac(1, 0) = tau(0);
      jac(1, 1) = tau(1);
      const Eigen::Vector2cd rhs(-quadric_value(w), Complex(-1.0));
      delta = jac.partialPivLu().solve(rhs);
    }
    if (!delta.allFinite()) break;
    c += delta;
    if (c.norm() > 1e-1) break;
    if (delta.norm() <= options.newton_tolerance) return c;
  }
  throw Error(ErrorCode::oracle_divergence, "mu_fd_oracle: Newton tracking did not converge");
}

}  // namespace

StructuredWeights StructuredWeights::dense_line(Eigen::Index n, int degree) {
  StructuredWeights s;
  s.variety = OutputVariety::projective_line;
  s.degree = degree;
  s.masks.assign(static_cast<std::size_t>(degree) + 1, Mask::Constant(n, n, true));
  return s;
}

StructuredWeights StructuredWeights::quadric(Eigen::Index n) {
  StructuredWeights s;
  s.variety = OutputVariety::quadric_curve;
  s.degree = 1;
  s.masks.assign(3, Mask::Constant(n, n, true));
  return s;
}

std::size_t StructuredWeights::free_count() const {
  std::size_t m = 0;
  for (const auto& mask : masks) m += static_cast<std::size_t>(mask.count());
  return m;
}

std::vector<Complex> StructuredWeights::weights(const ComplexVector& z) const {
  if (variety == OutputVariety::quadric_curve) return {z(0), z(1), z(2)};
  const auto pa = powers(z(0), degree);
  const auto pb = powers(z(1), degree);
  std::vector<Complex> w(static_cast<std::size_t>(degree) + 1);
  for (int k = 0; k <= degree; ++k)
    w[static_cast<std::size_t>(k)] = pa[static_cast<std::size_t>(k)] * pb[static_cast<std::size_t>(degree - k)];
  return w;
}

std::vector<Complex> StructuredWeights::directional(const ComplexVector& z, const ComplexVector& t) const {
  if (variety == OutputVariety::quadric_curve) return {t(0), t(1), t(2)};
  const int d = degree;
  const auto pa = powers(z(0), d);
  const auto pb = powers(z(1), d);
  std::vector<Complex> w(static_cast<std::size_t>(d) + 1, Complex(0.0));
  for (int k = 0; k <= d; ++k) {
    Complex v = 0.0;
    if (k > 0) v += static_cast<double>(k) * pa[static_cast<std::size_t>(k - 1)] * pb[static_cast<std::size_t>(d - k)] * t(0);
    if (k < d) v += static_cast<double>(d - k) * pa[static_cast<std::size_t>(k)] * pb[static_cast<std::size_t>(d - k - 1)] * t(1);
    w[static_cast<std::size_t>(k)] = v;
  }
  return w;
}

double StructuredInstance::norm() const {
  double sq = 0.0;
  for (const auto& b : blocks) sq += b.squaredNorm();
  return std::sqrt(sq);
}

ComplexMatrix StructuredInstance::evaluate(const ComplexVector& z) const {
  const auto w = structure.weights(z);
  ComplexMatrix out = ComplexMatrix::Zero(n(), n());
  for (std::size_t k = 0; k < blocks.size(); ++k) out += w[k] * blocks[k];
  return out;
}

ComplexMatrix StructuredInstance::directional_derivative(const ComplexVector& z, const ComplexVector& t) const {
  const auto w = structure.directional(z, t);
  ComplexMatrix out = ComplexMatrix::Zero(n(), n());
  for (std::size_t k = 0; k < blocks.size(); ++k) out += w[k] * blocks[k];
  return out;
}

void StructuredInstance::validate() const {
  const std::size_t expected =
      structure.variety == OutputVariety::quadric_curve ? 3 : static_cast<std::size_t>(structure.degree) + 1;
  if (blocks.size() != expected || structure.masks.size() != expected)
    throw Error(ErrorCode::invalid_argument, "StructuredInstance: expected " + std::to_string(expected) + " blocks");
  const Eigen::Index size = blocks.front().rows();
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const auto& b = blocks[k];
    const auto& mask = structure.masks[k];
    if (b.rows() != size || b.cols() != size || mask.rows() != size || mask.cols() != size)
      throw Error(ErrorCode::invalid_argument, "StructuredInstance: inconsistent block sizes");
    for (Eigen::Index i = 0; i < size; ++i)
      for (Eigen::Index j = 0; j < size; ++j)
        if (!mask(i, j) && b(i, j) != Complex(0.0))
          throw Error(ErrorCode::invalid_argument, "StructuredInstance: nonzero entry outside the mask in block " +
                                                       std::to_string(k));
  }
  if (structure.free_count() == 0) throw Error(ErrorCode::invalid_argument, "StructuredInstance: no free entries");
}

StructuredInstance structured(const MatrixPolynomial& p) {
  return StructuredInstance{StructuredWeights::dense_line(p.n(), p.degree()), p.coeffs()};
}

double mu_pevp_closed(const MatrixPolynomial& p, const EigenTriple& triple) {
  require_trusted(triple);
  const ProjectivePoint& z = triple.z;
  if (z.size() != 2) throw Error(ErrorCode::invalid_argument, "mu_pevp_closed: point must lie in P(C^2)");
  const Complex alpha = z[0];
  const Complex beta = z[1];
  const int d = p.degree();

  double weight_sq = 0.0;
  for (int k = 0; k <= d; ++k) weight_sq += std::pow(std::norm(alpha), k) * std::pow(std::norm(beta), d - k);

  const ComplexVector v = std::conj(beta) * (derivative(p, alpha, beta, HomogeneousVariable::alpha) * triple.x) -
                          std::conj(alpha) * (derivative(p, alpha, beta, HomogeneousVariable::beta) * triple.x);
  const double den = std::abs(triple.y.dot(v));
  const double xy = triple.x.norm() * triple.y.norm();
  const double a_norm = p.norm();
  if (den < kInfiniteConditionFactor * a_norm * xy) return kInf;
  return std::sqrt(weight_sq) * xy / den * a_norm;
}

double mu_gevp_closed(const ComplexMatrix& a, const ComplexMatrix& b, const EigenTriple& triple) {
  require_trusted(triple);
  if (triple.z.size() != 2) throw Error(ErrorCode::invalid_argument, "mu_gevp_closed: point must lie in P(C^2)");
  const Complex alpha = triple.z[0];
  const Complex beta = triple.z[1];
  const Complex yax = triple.y.dot(a * triple.x);
  const Complex ybx = triple.y.dot(b * triple.x);
  const double den = std::abs(std::conj(alpha) * yax + std::conj(beta) * ybx);
  const double xy = triple.x.norm() * triple.y.norm();
  const double pair_norm = std::sqrt(a.squaredNorm() + b.squaredNorm());
  if (den < kInfiniteConditionFactor * pair_norm * xy) return kInf;
  return triple.z.coords().norm() * xy / den * pair_norm;
}

double mu_scalar_closed(std::span<const Complex> coeffs, Complex z) {
  if (coeffs.size() < 2) throw Error(ErrorCode::invalid_argument, "mu_scalar_closed: degree must be at least 1");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw Error(ErrorCode::invalid_argument, "mu_scalar_closed: root must be finite");
  double p_sq = 0.0;
  double mono_sq = 0.0;
  Complex deriv = 0.0;
  Complex zk = 1.0;  // z^k
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    p_sq += std::norm(coeffs[k]);
    mono_sq += std::norm(zk);
    if (k + 1 < coeffs.size()) deriv += static_cast<double>(k + 1) * coeffs[k + 1] * zk;
    zk *= z;
  }
  if (deriv == Complex(0.0)) return kInf;
  return std::sqrt(p_sq) * std::sqrt(mono_sq) / (std::abs(deriv) * (1.0 + std::norm(z)));
}

double mu_generic_unchecked(const StructuredInstance& inst, const EigenTriple& triple, double p_norm) {
  const ComplexVector& z = triple.z.coords();
  const ComplexVector t = tangent(inst.structure.variety, triple.z);
  const ComplexVector x = triple.x.normalized();
  const ComplexVector y = triple.y.normalized();

  const auto w = inst.structure.weights(z);
  double num_sq = 0.0;
  for (std::size_t k = 0; k < inst.blocks.size(); ++k) {
    const Mask& mask = inst.structure.masks[k];
    double block = 0.0;
    for (Eigen::Index i = 0; i < mask.rows(); ++i)
      for (Eigen::Index j = 0; j < mask.cols(); ++j)
        if (mask(i, j)) block += std::norm(y(i)) * std::norm(x(j));
    num_sq += std::norm(w[k]) * block;
  }
  const double den = std::abs(y.dot(inst.directional_derivative(z, t) * x));
  if (den < kInfiniteConditionFactor * inst.norm()) return kInf;
  return p_norm * std::sqrt(num_sq) / den;
}

double mu_generic(const StructuredInstance& inst, const EigenTriple& triple, double p_norm) {
  require_trusted(triple);
  return mu_generic_unchecked(inst, triple, p_norm);
}

double mu_fd_oracle(const StructuredInstance& inst, const ProjectivePoint& z, double p_norm,
                    const FdOracleOptions& options) {
  const ComplexVector& z0 = z.coords();
  const ComplexMatrix basis = orthogonal_complement(z0);
  const Eigen::Index dim = basis.cols();
  const double h = options.step * inst.norm();

  // Real Jacobian of the solution map: rows are (Re, Im) of the chart
  // coordinates, columns the real and imaginary directions of every free entry.
  const std::size_t m = inst.structure.free_count();
  Eigen::MatrixXd jac(2 * dim, static_cast<Eigen::Index>(2 * m));
  Eigen::Index col = 0;
  StructuredInstance perturbed = inst;
  for (std::size_t k = 0; k < inst.blocks.size(); ++k) {
    const Mask& mask = inst.structure.masks[k];
    for (Eigen::Index i = 0; i < mask.rows(); ++i) {
      for (Eigen::Index j = 0; j < mask.cols(); ++j) {
        if (!mask(i, j)) continue;
        for (const Complex dir : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
          Complex& entry = perturbed.blocks[k](i, j);
          const Complex original = entry;
          entry = original + h * dir;
          const ComplexVector plus = track_solution(perturbed, z0, basis, options);
          entry = original - h * dir;
          const ComplexVector minus = track_solution(perturbed, z0, basis, options);
          entry = original;
          const ComplexVector slope = (plus - minus) / (2.0 * h);
          for (Eigen::Index r = 0; r < dim; ++r) {
            jac(2 * r, col) = slope(r).real();
            jac(2 * r + 1, col) = slope(r).imag();
          }
          ++col;
        }
      }
    }
  }
  const Eigen::MatrixXd gram = jac * jac.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double largest = eig.eigenvalues().maxCoeff();
  return p_norm * std::sqrt(std::max(0.0, largest));
}

double mu_stochastic(double mu, std::size_t m_full) {
  if (m_full == 0) throw Error(ErrorCode::invalid_argument, "mu_stochastic: m must be positive");
  if (std::isinf(mu)) return kInf;
  return mu * mu / static_cast<double>(m_full);
}

double mu_stochastic_sampled(const StructuredInstance& inst, const EigenTriple& triple, double p_norm,
                             std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw Error(ErrorCode::invalid_argument, "mu_stochastic_sampled: need at least one sample");
  const ComplexVector& z = triple.z.coords();
  const ComplexVector x = triple.x.normalized();
  const ComplexVector y = triple.y.normalized();
  const auto w = inst.structure.weights(z);

  // y* M(dp, z) x is linear in the free entries: sum_e c_e dp_e.
  std::vector<Complex> c;
  c.reserve(inst.structure.free_count());
  for (std::size_t k = 0; k < inst.blocks.size(); ++k) {
    const Mask& mask = inst.structure.masks[k];
    for (Eigen::Index i = 0; i < mask.rows(); ++i)
      for (Eigen::Index j = 0; j < mask.cols(); ++j)
        if (mask(i, j)) c.push_back(w[k] * std::conj(y(i)) * x(j));
  }

  const ComplexVector t = tangent(inst.structure.variety, triple.z);
  const double den = std::abs(y.dot(inst.directional_derivative(z, t) * x));
  if (den < kInfiniteConditionFactor * inst.norm()) return kInf;

  ComplexGaussian gen(seed);
  double acc = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    Complex dot = 0.0;
    double norm_sq = 0.0;
    for (const Complex ce : c) {
      const Complex g = gen();
      dot += ce * g;
      norm_sq += std::norm(g);
    }
    acc += std::norm(dot) / norm_sq;
  }
  return acc / static_cast<double>(samples) * p_norm * p_norm / (den * den);
}

ConditionReport condition_report(const StructuredInstance& inst, std::span<const EigenTriple> triples, double p_norm) {
  ConditionReport report;
  const std::size_t m = inst.structure.free_count();
  double sum_sq = 0.0;
  for (const auto& triple : triples) {
    EigenCondition e;
    e.z = triple.z;
    e.mu = mu_generic_unchecked(inst, triple, p_norm);
    e.mu_st_sq = mu_stochastic(e.mu, m);
    e.trusted = triple.trusted;
    sum_sq += e.mu * e.mu;
    report.mu_max = std::max(report.mu_max, e.mu);
    report.per_eigenvalue.push_back(std::move(e));
  }
  if (!triples.empty()) report.mean_mu_sq = sum_sq / static_cast<double>(triples.size());
  return report;
}

}  // namespace pevpcond
