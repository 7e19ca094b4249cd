#include "pevpcond/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pevpcond/errors.hpp"

namespace pevpcond {

Complex quadric_value(const ComplexVector& z) { return z(0) * z(1) + z(0) * z(2) + z(1) * z(2); }

ComplexVector quadric_gradient(const ComplexVector& z) {
  ComplexVector g(3);
  g << z(1) + z(2), z(0) + z(2), z(0) + z(1);
  return g;
}

ComplexMatrix orthogonal_complement(const ComplexVector& z) {
  const Eigen::Index b = z.size();
  const ComplexVector unit = z.normalized();
  // Gram-Schmidt on the standard basis, dropping the coordinate most aligned
  // with z.
  Eigen::Index skip = 0;
  for (Eigen::Index i = 1; i < b; ++i)
    if (std::abs(unit(i)) > std::abs(unit(skip))) skip = i;
  ComplexMatrix basis(b, b - 1);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < b; ++i) {
    if (i == skip) continue;
    ComplexVector v = ComplexVector::Unit(b, i);
    for (int pass = 0; pass < 2; ++pass) {
      v -= unit * unit.dot(v);
      for (Eigen::Index j = 0; j < col; ++j) v -= basis.col(j) * basis.col(j).dot(v);
    }
    basis.col(col++) = v.normalized();
  }
  return basis;
}

ComplexVector tangent(OutputVariety o, const ProjectivePoint& z) {
  const ComplexVector& c = z.coords();
  if (o == OutputVariety::projective_line) {
    if (c.size() != 2) throw Error(ErrorCode::invalid_argument, "tangent: point must lie in P(C^2)");
    ComplexVector t(2);
    t << -std::conj(c(1)), std::conj(c(0));
    return t;
  }
  if (c.size() != 3) throw Error(ErrorCode::invalid_argument, "tangent: point must lie in P(C^3)");
  if (!(std::abs(quadric_value(c)) <= 1e-10))
    throw Error(ErrorCode::invalid_argument, "tangent: point is not on the conic (|g| = " +
                                                 std::to_string(std::abs(quadric_value(c))) + ")");
  const ComplexVector grad = quadric_gradient(c);
  const ComplexMatrix basis = orthogonal_complement(c);
  // Dg(z) t = 0 for t = a e1 + b e2 gives (a, b) proportional to (-g2, g1).
  const Complex g1 = (grad.transpose() * basis.col(0))(0);
  const Complex g2 = (grad.transpose() * basis.col(1))(0);
  const double scale = std::max(1.0, grad.norm());
  if (std::abs(g1) + std::abs(g2) <= 1e-12 * scale)
    throw Error(ErrorCode::singular_curve_point, "tangent: gradient vanishes on the tangent plane");
  ComplexVector t = -g2 * basis.col(0) + g1 * basis.col(1);
  t.normalize();
  canonicalize_phase(t);
  return t;
}

ProjectivePoint quadric_parametrize(Complex u, Complex v) {
  if (u == Complex(0.0) && v == Complex(0.0))
    throw Error(ErrorCode::invalid_argument, "quadric_parametrize: (u, v) must be nonzero");
  const Complex s = u + v;
  return ProjectivePoint{u * v, -u * s, -v * s};
}

}  // namespace pevpcond
