#include "pevpcond/matpoly.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "pevpcond/errors.hpp"
#include "pevpcond/random.hpp"

namespace pevpcond {

namespace {

std::vector<Complex> powers(Complex x, int d) {
  std::vector<Complex> out(static_cast<std::size_t>(d) + 1);
  out[0] = 1.0;
  for (int k = 1; k <= d; ++k) out[static_cast<std::size_t>(k)] = out[static_cast<std::size_t>(k) - 1] * x;
  return out;
}

bool leading_well_conditioned(const ComplexMatrix& lead, double tolerance) {
  const double fro = lead.norm();
  if (!(fro > 0.0)) return false;
  return smallest_singular_value(lead) >= tolerance * fro;
}

std::vector<ProjectivePoint> companion_eigenvalues(const MatrixPolynomial& p, const SchurOptions& schur) {
  const Eigen::Index n = p.n();
  const int d = p.degree();
  const Eigen::Index size = n * d;
  ComplexMatrix c = ComplexMatrix::Zero(size, size);
  for (int i = 0; i + 1 < d; ++i) c.block(i * n, (i + 1) * n, n, n).setIdentity();

  // Last block row of E^{-1} F is -A_d^{-1} (A_0, ..., A_{d-1}).
  const LuFactorization lead(p.coeff(d));
  for (int k = 0; k < d; ++k) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const ComplexVector col = lead.solve(p.coeff(k).col(j));
      c.block((d - 1) * n, k * n + j, n, 1) = -col;
    }
  }

  const SchurDecomposition s = schur_eigenvalues(c, schur);
  std::vector<ProjectivePoint> out;
  out.reserve(s.eigenvalues.size());
  for (const Complex lambda : s.eigenvalues) out.emplace_back(ProjectivePoint{lambda, Complex(1.0)});
  return out;
}

}  // namespace

MatrixPolynomial::MatrixPolynomial(std::vector<ComplexMatrix> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() < 2) throw Error(ErrorCode::invalid_argument, "MatrixPolynomial: degree must be at least 1");
  const Eigen::Index n = coeffs_.front().rows();
  if (n == 0) throw Error(ErrorCode::invalid_argument, "MatrixPolynomial: empty coefficients");
  for (const auto& a : coeffs_) {
    if (a.rows() != n || a.cols() != n)
      throw Error(ErrorCode::invalid_argument, "MatrixPolynomial: coefficients must all be " + std::to_string(n) +
                                                   "x" + std::to_string(n));
    if (!all_finite(a)) throw Error(ErrorCode::invalid_argument, "MatrixPolynomial: non-finite coefficient");
  }
  if (!(norm() > 0.0)) throw Error(ErrorCode::invalid_argument, "MatrixPolynomial: all coefficients are zero");
}

MatrixPolynomial MatrixPolynomial::scalar(std::span<const Complex> coeffs) {
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(coeffs.size());
  for (const Complex c : coeffs) blocks.push_back(ComplexMatrix::Constant(1, 1, c));
  return MatrixPolynomial(std::move(blocks));
}

double MatrixPolynomial::norm() const {
  double sq = 0.0;
  for (const auto& a : coeffs_) sq += a.squaredNorm();
  return std::sqrt(sq);
}

ComplexMatrix evaluate(const MatrixPolynomial& p, Complex alpha, Complex beta) {
  const int d = p.degree();
  const auto pa = powers(alpha, d);
  const auto pb = powers(beta, d);
  ComplexMatrix out = ComplexMatrix::Zero(p.n(), p.n());
  for (int k = 0; k <= d; ++k) out += (pa[static_cast<std::size_t>(k)] * pb[static_cast<std::size_t>(d - k)]) * p.coeff(k);
  return out;
}

ComplexMatrix evaluate(const MatrixPolynomial& p, const ProjectivePoint& z) {
  if (z.size() != 2) throw Error(ErrorCode::invalid_argument, "evaluate: point must lie in P(C^2)");
  return evaluate(p, z[0], z[1]);
}

ComplexMatrix derivative(const MatrixPolynomial& p, Complex alpha, Complex beta, HomogeneousVariable var) {
  const int d = p.degree();
  const auto pa = powers(alpha, d);
  const auto pb = powers(beta, d);
  ComplexMatrix out = ComplexMatrix::Zero(p.n(), p.n());
  for (int k = 0; k <= d; ++k) {
    Complex w;
    if (var == HomogeneousVariable::alpha) {
      if (k == 0) continue;
      w = static_cast<double>(k) * pa[static_cast<std::size_t>(k - 1)] * pb[static_cast<std::size_t>(d - k)];
    } else {
      if (k == d) continue;
      w = static_cast<double>(d - k) * pa[static_cast<std::size_t>(k)] * pb[static_cast<std::size_t>(d - k - 1)];
    }
    out += w * p.coeff(k);
  }
  return out;
}

ComplexMatrix derivative(const MatrixPolynomial& p, const ProjectivePoint& z, HomogeneousVariable var) {
  if (z.size() != 2) throw Error(ErrorCode::invalid_argument, "derivative: point must lie in P(C^2)");
  return derivative(p, z[0], z[1], var);
}

CompanionPencil companion_pencil(const MatrixPolynomial& p) {
  const Eigen::Index n = p.n();
  const int d = p.degree();
  const Eigen::Index size = n * d;
  CompanionPencil out{ComplexMatrix::Identity(size, size), ComplexMatrix::Zero(size, size)};
  out.e.block((d - 1) * n, (d - 1) * n, n, n) = p.coeff(d);
  for (int i = 0; i + 1 < d; ++i) out.f.block(i * n, (i + 1) * n, n, n).setIdentity();
  for (int k = 0; k < d; ++k) out.f.block((d - 1) * n, k * n, n, n) = -p.coeff(k);
  return out;
}

MoebiusMap::MoebiusMap(Eigen::Matrix2cd u) : u_(std::move(u)) {
  const double det = std::abs(u_.determinant());
  if (!(std::abs(det - 1.0) <= 1e-12))
    throw Error(ErrorCode::invalid_argument, "MoebiusMap: |det u| must be 1, got " + std::to_string(det));
}

MoebiusMap MoebiusMap::identity() { return MoebiusMap(Eigen::Matrix2cd::Identity()); }

MoebiusMap MoebiusMap::swap() {
  Eigen::Matrix2cd u;
  u << 0.0, 1.0, 1.0, 0.0;
  return MoebiusMap(u);
}

ProjectivePoint MoebiusMap::apply(const ProjectivePoint& z) const {
  return ProjectivePoint(ComplexVector(u_ * z.coords()));
}

ProjectivePoint MoebiusMap::apply_inverse(const ProjectivePoint& z) const {
  return ProjectivePoint(ComplexVector(u_.inverse() * z.coords()));
}

MatrixPolynomial moebius_substitute(const MatrixPolynomial& p, const MoebiusMap& map) {
  const int d = p.degree();
  const auto& u = map.matrix();
  // Coefficient vectors indexed by the power of alpha~.
  const std::vector<Complex> alpha_factor{u(0, 1), u(0, 0)};
  const std::vector<Complex> beta_factor{u(1, 1), u(1, 0)};
  auto multiply = [](const std::vector<Complex>& a, const std::vector<Complex>& b) {
    std::vector<Complex> out(a.size() + b.size() - 1, Complex(0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
  };

  std::vector<ComplexMatrix> out(static_cast<std::size_t>(d) + 1, ComplexMatrix::Zero(p.n(), p.n()));
  for (int k = 0; k <= d; ++k) {
    std::vector<Complex> poly{Complex(1.0)};
    for (int i = 0; i < k; ++i) poly = multiply(poly, alpha_factor);
    for (int i = 0; i < d - k; ++i) poly = multiply(poly, beta_factor);
    for (int j = 0; j <= d; ++j) out[static_cast<std::size_t>(j)] += poly[static_cast<std::size_t>(j)] * p.coeff(k);
  }
  return MatrixPolynomial(std::move(out));
}

std::vector<ProjectivePoint> hom_eigenvalues(const MatrixPolynomial& p, const EigenSolveOptions& options) {
  if (leading_well_conditioned(p.coeff(p.degree()), options.leading_tolerance))
    return companion_eigenvalues(p, options.schur);

  for (int attempt = 0; attempt < options.moebius_retries; ++attempt) {
    ComplexGaussian gen(substream_seed(options.seed, 0x4d6f6562ULL, static_cast<std::uint64_t>(attempt)));
    const ComplexMatrix u = random_unitary(2, gen);
    // Unitary, so |det| = 1 up to rounding; renormalize to stay inside the
    // MoebiusMap tolerance.
    const Complex det = Eigen::Matrix2cd(u).determinant();
    const MoebiusMap map(Eigen::Matrix2cd(u) / std::sqrt(std::abs(det)));
    const MatrixPolynomial q = moebius_substitute(p, map);
    if (!leading_well_conditioned(q.coeff(q.degree()), options.leading_tolerance)) continue;
    std::vector<ProjectivePoint> out;
    for (const auto& w : companion_eigenvalues(q, options.schur)) out.push_back(map.apply(w));
    return out;
  }
  throw Error(ErrorCode::degenerate_instance,
              "hom_eigenvalues: leading coefficient stays ill-conditioned after Moebius substitutions");
}

EigenTriple eigen_triple_at(const ComplexMatrix& m, const ProjectivePoint& z, double scale, std::uint64_t seed) {
  NullVectorOptions opts;
  opts.scale = scale;
  opts.seed = seed;
  NullVectorResult right = try_null_vector(m, Side::right, opts);
  opts.seed = mix64(seed);
  NullVectorResult left = try_null_vector(m, Side::left, opts);

  EigenTriple t;
  t.z = z;
  t.residual_right = right.residual / scale;
  t.residual_left = left.residual / scale;
  t.trusted = right.converged && left.converged && t.residual_right <= kTrustedResidual &&
              t.residual_left <= kTrustedResidual;
  t.x = std::move(right.vector);
  t.y = std::move(left.vector);
  return t;
}

std::vector<EigenTriple> eigen_triples(const MatrixPolynomial& p, const EigenSolveOptions& options) {
  const auto points = hom_eigenvalues(p, options);
  const double scale = p.norm();
  std::vector<EigenTriple> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    out.push_back(eigen_triple_at(evaluate(p, points[i]), points[i], scale, substream_seed(options.seed, i)));
  return out;
}

std::vector<ProjectivePoint> roots_homogeneous(std::span<const Complex> coeffs, const EigenSolveOptions& options) {
  return hom_eigenvalues(MatrixPolynomial::scalar(coeffs), options);
}

}  // namespace pevpcond
