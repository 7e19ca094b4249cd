#pragma once

#include "pevpcond/linalg.hpp"
#include "pevpcond/projective.hpp"

namespace pevpcond {

/// The curve O on which solutions live: P(C^2) itself, or the conic
/// alpha*beta + alpha*gamma + beta*gamma = 0 in P(C^3).
enum class OutputVariety { projective_line, quadric_curve };

constexpr int ambient_dimension(OutputVariety o) { return o == OutputVariety::projective_line ? 2 : 3; }
constexpr int variety_degree(OutputVariety o) { return o == OutputVariety::projective_line ? 1 : 2; }

/// g(a, b, c) = ab + ac + bc.
Complex quadric_value(const ComplexVector& z);
/// (b + c, a + c, a + b).
ComplexVector quadric_gradient(const ComplexVector& z);

/// Unit vector spanning T_z O inside z^perp. For the line this is
/// (-conj(beta), conj(alpha)); for the conic it is normalized to canonical
/// phase. Throws Error(invalid_argument) for points off the conic and
/// Error(singular_curve_point) when the gradient vanishes on z^perp.
ComplexVector tangent(OutputVariety o, const ProjectivePoint& z);

/// Orthonormal basis of z^perp, as columns.
ComplexMatrix orthogonal_complement(const ComplexVector& z);

/// (uv, -u(u+v), -v(u+v)): a degree-2 parametrization of the conic through
/// the base point (1, 0, 0).
ProjectivePoint quadric_parametrize(Complex u, Complex v);

}  // namespace pevpcond
