#include "pevpcond/projective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pevpcond/errors.hpp"

namespace pevpcond {

ProjectivePoint::ProjectivePoint(ComplexVector coords) : coords_(std::move(coords)) {
  const double norm = coords_.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw Error(ErrorCode::invalid_argument, "ProjectivePoint: zero or non-finite coordinates");
  coords_ /= norm;
  canonicalize_phase(coords_);
}

ProjectivePoint::ProjectivePoint(std::initializer_list<Complex> coords)
    : ProjectivePoint([&] {
        ComplexVector v(static_cast<Eigen::Index>(coords.size()));
        Eigen::Index i = 0;
        for (const auto& c : coords) v(i++) = c;
        return v;
      }()) {}

ProjectivePoint ProjectivePoint::unnormalized_phase(ComplexVector unit_coords) {
  ProjectivePoint p;
  p.coords_ = std::move(unit_coords);
  return p;
}

double projective_distance(const ProjectivePoint& a, const ProjectivePoint& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  // Lagrange identity: 1 - |<a,b>|^2 = sum_{i<j} |a_i b_j - a_j b_i|^2 for
  // unit vectors, without the cancellation.
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = i + 1; j < a.size(); ++j) s += std::norm(a[i] * b[j] - a[j] * b[i]);
  return std::min(1.0, std::sqrt(s));
}

double multiset_distance(const std::vector<ProjectivePoint>& a, const std::vector<ProjectivePoint>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  const std::size_t n = a.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double worst = 0.0;
      for (std::size_t i = 0; i < n && worst < best; ++i) worst = std::max(worst, projective_distance(a[i], b[perm[i]]));
      best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  std::vector<bool> used(n, false);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t pick = n;
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double dj = projective_distance(a[i], b[j]);
      if (dj < d) {
        d = dj;
        pick = j;
      }
    }
    used[pick] = true;
    worst = std::max(worst, d);
  }
  return worst;
}

}  // namespace pevpcond
