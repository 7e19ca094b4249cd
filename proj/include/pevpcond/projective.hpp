#pragma once

#include <initializer_list>
#include <vector>

#include "pevpcond/linalg.hpp"

namespace pevpcond {

/// Canonical representative of a point of P(C^b): unit norm, with the
/// largest-modulus coordinate real and positive.
class ProjectivePoint {
 public:
  ProjectivePoint() = default;
  /// Normalizes and canonicalizes; throws Error(invalid_argument) for a zero
  /// or non-finite vector.
  explicit ProjectivePoint(ComplexVector coords);
  ProjectivePoint(std::initializer_list<Complex> coords);

  /// Wraps an already unit-norm vector without touching its phase.
  static ProjectivePoint unnormalized_phase(ComplexVector unit_coords);

  const ComplexVector& coords() const { return coords_; }
  Eigen::Index size() const { return coords_.size(); }
  Complex operator[](Eigen::Index i) const { return coords_(i); }

  friend bool operator==(const ProjectivePoint& a, const ProjectivePoint& b) { return a.coords_ == b.coords_; }

 private:
  ComplexVector coords_;
};

/// Chordal distance sqrt(1 - |<a,b>|^2) between two projective points.
double projective_distance(const ProjectivePoint& a, const ProjectivePoint& b);

/// Largest distance in the best matching between two equally sized
/// multisets (exhaustive for small sizes, greedy otherwise). Returns +inf on
/// a size mismatch.
double multiset_distance(const std::vector<ProjectivePoint>& a, const std::vector<ProjectivePoint>& b);

}  // namespace pevpcond
