#include "pevpcond/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pevpcond/errors.hpp"
#include "pevpcond/geometry.hpp"
#include "pevpcond/random.hpp"

namespace pevpcond {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::invalid_argument, message);
}

bool same_mask(const Mask& a, const Mask& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a == b).all();
}

}  // namespace

const char* to_string(Family family) noexcept {
  switch (family) {
    case Family::dense_poly: return "dense_poly";
    case Family::lacunary_poly: return "lacunary_poly";
    case Family::gevp: return "gevp";
    case Family::pevp: return "pevp";
    case Family::masked_pevp: return "masked_pevp";
    case Family::quadric: return "quadric";
  }
  return "unknown";
}

Family family_from_string(std::string_view name) {
  if (name == "dense_poly" || name == "dense") return Family::dense_poly;
  if (name == "lacunary_poly" || name == "lacunary") return Family::lacunary_poly;
  if (name == "gevp") return Family::gevp;
  if (name == "pevp") return Family::pevp;
  if (name == "masked_pevp" || name == "masked" || name == "sparse_qep") return Family::masked_pevp;
  if (name == "quadric") return Family::quadric;
  throw Error(ErrorCode::invalid_argument, "unknown problem family '" + std::string(name) + "'");
}

Mask mask_full(Eigen::Index n) { return Mask::Constant(n, n, true); }

Mask mask_diagonal(Eigen::Index n) {
  Mask m = Mask::Constant(n, n, false);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = true;
  return m;
}

Mask mask_upper(Eigen::Index n) {
  Mask m = Mask::Constant(n, n, false);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) m(i, j) = true;
  return m;
}

Mask mask_lower(Eigen::Index n) {
  Mask m = Mask::Constant(n, n, false);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) m(i, j) = true;
  return m;
}

Mask mask_from_name(std::string_view name, Eigen::Index n) {
  if (name == "full") return mask_full(n);
  if (name == "diag" || name == "diagonal") return mask_diagonal(n);
  if (name == "upper") return mask_upper(n);
  if (name == "lower") return mask_lower(n);
  throw Error(ErrorCode::invalid_argument, "unknown mask '" + std::string(name) + "'");
}

std::string mask_name(const Mask& mask) {
  const Eigen::Index n = mask.rows();
  if (mask.cols() != n) return {};
  if (same_mask(mask, mask_full(n))) return "full";
  if (same_mask(mask, mask_diagonal(n))) return "diag";
  if (same_mask(mask, mask_upper(n))) return "upper";
  if (same_mask(mask, mask_lower(n))) return "lower";
  return {};
}

ProblemDescriptor ProblemDescriptor::dense_poly(int degree) {
  require(degree >= 1, "dense_poly: degree must be at least 1");
  ProblemDescriptor d;
  d.family_ = Family::dense_poly;
  d.n_ = 1;
  d.degree_ = degree;
  d.masks_.assign(static_cast<std::size_t>(degree) + 1, mask_full(1));
  return d;
}

ProblemDescriptor ProblemDescriptor::lacunary_poly(int degree, std::vector<int> indices) {
  require(degree >= 1, "lacunary_poly: degree must be at least 1");
  std::sort(indices.begin(), indices.end());
  require(std::adjacent_find(indices.begin(), indices.end()) == indices.end(), "lacunary_poly: duplicate index");
  require(!indices.empty() && indices.front() == 0 && indices.back() == degree,
          "lacunary_poly: index set must contain 0 and N");
  ProblemDescriptor d;
  d.family_ = Family::lacunary_poly;
  d.n_ = 1;
  d.degree_ = degree;
  d.masks_.assign(static_cast<std::size_t>(degree) + 1, Mask::Constant(1, 1, false));
  for (const int i : indices) d.masks_[static_cast<std::size_t>(i)](0, 0) = true;
  d.indices_ = std::move(indices);
  return d;
}

ProblemDescriptor ProblemDescriptor::gevp(int n) {
  require(n >= 1, "gevp: n must be at least 1");
  ProblemDescriptor d;
  d.family_ = Family::gevp;
  d.n_ = n;
  d.degree_ = 1;
  d.masks_.assign(2, mask_full(n));
  return d;
}

ProblemDescriptor ProblemDescriptor::pevp(int n, int degree) {
  require(n >= 1, "pevp: n must be at least 1");
  require(degree >= 1, "pevp: degree must be at least 1");
  ProblemDescriptor d;
  d.family_ = Family::pevp;
  d.n_ = n;
  d.degree_ = degree;
  d.masks_.assign(static_cast<std::size_t>(degree) + 1, mask_full(n));
  return d;
}

ProblemDescriptor ProblemDescriptor::masked_pevp(int n, int degree, std::vector<Mask> masks) {
  require(n >= 1, "masked_pevp: n must be at least 1");
  require(degree >= 1, "masked_pevp: degree must be at least 1");
  require(masks.size() == static_cast<std::size_t>(degree) + 1, "masked_pevp: need one mask per coefficient");
  for (const auto& m : masks) {
    require(m.rows() == n && m.cols() == n, "masked_pevp: mask size must match n");
    require(m.count() >= 1, "masked_pevp: every mask needs at least one free entry");
  }
  ProblemDescriptor d;
  d.family_ = Family::masked_pevp;
  d.n_ = n;
  d.degree_ = degree;
  d.masks_ = std::move(masks);
  return d;
}

ProblemDescriptor ProblemDescriptor::sparse_qep(int n) {
  return masked_pevp(n, 2, {mask_upper(n), mask_full(n), mask_diagonal(n)});
}

ProblemDescriptor ProblemDescriptor::quadric(int n) {
  require(n >= 1, "quadric: n must be at least 1");
  ProblemDescriptor d;
  d.family_ = Family::quadric;
  d.n_ = n;
  d.degree_ = 1;
  d.masks_.assign(3, mask_full(n));
  return d;
}

std::size_t ProblemDescriptor::m() const {
  std::size_t m = 0;
  for (const auto& mask : masks_) m += static_cast<std::size_t>(mask.count());
  return m;
}

int ProblemDescriptor::r() const {
  return (family_ == Family::dense_poly || family_ == Family::lacunary_poly) ? 1 : n_;
}

int ProblemDescriptor::s() const {
  switch (family_) {
    case Family::dense_poly:
    case Family::lacunary_poly: return degree_;
    case Family::gevp:
    case Family::quadric: return n_;
    case Family::pevp:
    case Family::masked_pevp: return degree_ * n_;
  }
  return 1;
}

int ProblemDescriptor::d_O() const { return family_ == Family::quadric ? 2 : 1; }

OutputVariety ProblemDescriptor::variety() const {
  return family_ == Family::quadric ? OutputVariety::quadric_curve : OutputVariety::projective_line;
}

bool ProblemDescriptor::is_sparse_qep() const {
  if (family_ != Family::masked_pevp || degree_ != 2) return false;
  return same_mask(masks_[0], mask_upper(n_)) && same_mask(masks_[1], mask_full(n_)) &&
         same_mask(masks_[2], mask_diagonal(n_));
}

std::optional<double> ProblemDescriptor::printed_value() const {
  const double n = n_;
  if (is_sparse_qep()) return (3.0 * n * n + 3.0 * n) / 4.0;
  if (family_ == Family::quadric) return 3.0 * n * n;
  return std::nullopt;
}

std::string ProblemDescriptor::label() const {
  std::ostringstream out;
  out << to_string(family_);
  switch (family_) {
    case Family::dense_poly: out << "(N=" << degree_ << ")"; break;
    case Family::lacunary_poly: {
      out << "(N=" << degree_ << ",i={";
      for (std::size_t i = 0; i < indices_.size(); ++i) out << (i ? "," : "") << indices_[i];
      out << "})";
      break;
    }
    case Family::gevp:
    case Family::quadric: out << "(n=" << n_ << ")"; break;
    case Family::pevp: out << "(n=" << n_ << ",d=" << degree_ << ")"; break;
    case Family::masked_pevp: {
      out << "(n=" << n_ << ",d=" << degree_ << ",masks=";
      for (std::size_t k = 0; k < masks_.size(); ++k) {
        const std::string name = mask_name(masks_[k]);
        out << (k ? "," : "") << (name.empty() ? "custom" : name);
      }
      out << ")";
      break;
    }
  }
  return out.str();
}

ProblemDescriptor make_descriptor(std::string_view family, int n, int degree, std::vector<int> indices,
                                  const std::vector<std::string>& masks) {
  switch (family_from_string(family)) {
    case Family::dense_poly: return ProblemDescriptor::dense_poly(degree);
    case Family::lacunary_poly: return ProblemDescriptor::lacunary_poly(degree, std::move(indices));
    case Family::gevp: return ProblemDescriptor::gevp(n);
    case Family::pevp: return ProblemDescriptor::pevp(n, degree);
    case Family::quadric: return ProblemDescriptor::quadric(n);
    case Family::masked_pevp: {
      if (masks.empty()) {
        require(family == "sparse_qep", "masked problems need one mask per coefficient");
        return ProblemDescriptor::sparse_qep(n);
      }
      require(n >= 1, "masked_pevp: n must be at least 1");
      std::vector<Mask> parsed;
      for (const auto& name : masks) parsed.push_back(mask_from_name(name, n));
      const int d = static_cast<int>(parsed.size()) - 1;
      return ProblemDescriptor::masked_pevp(n, d, std::move(parsed));
    }
  }
  throw Error(ErrorCode::invalid_argument, "unknown family");
}

double expected_mean_sq_condition(const ProblemDescriptor& desc) {
  return (static_cast<double>(desc.m()) - 1.0) * desc.r() / desc.s();
}

std::size_t expected_solution_count(const ProblemDescriptor& desc) {
  return static_cast<std::size_t>(desc.s()) * static_cast<std::size_t>(desc.d_O());
}

ProblemInstance ProblemInstance::create(ProblemDescriptor descriptor, std::vector<ComplexMatrix> blocks) {
  const auto& masks = descriptor.masks();
  require(blocks.size() == masks.size(), "ProblemInstance: expected " + std::to_string(masks.size()) +
                                             " coefficient blocks, got " + std::to_string(blocks.size()));
  const Eigen::Index n = descriptor.n();
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const auto& b = blocks[k];
    require(b.rows() == n && b.cols() == n, "ProblemInstance: block " + std::to_string(k) + " must be " +
                                                std::to_string(n) + "x" + std::to_string(n));
    require(all_finite(b), "ProblemInstance: non-finite coefficient");
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        require(masks[k](i, j) || b(i, j) == Complex(0.0),
                "ProblemInstance: nonzero entry outside the mask in block " + std::to_string(k));
  }
  ProblemInstance inst{std::move(descriptor), std::move(blocks)};
  require(inst.p_norm() > 0.0, "ProblemInstance: all coefficients are zero");
  return inst;
}

double ProblemInstance::p_norm() const {
  double sq = 0.0;
  for (const auto& b : blocks) sq += b.squaredNorm();
  return std::sqrt(sq);
}

StructuredInstance ProblemInstance::structured() const {
  StructuredInstance s;
  s.structure.variety = descriptor.variety();
  s.structure.degree = descriptor.family() == Family::quadric ? 1 : descriptor.degree();
  s.structure.masks = descriptor.masks();
  s.blocks = blocks;
  if (descriptor.family() == Family::gevp) s.blocks[1] = -blocks[1];
  return s;
}

MatrixPolynomial ProblemInstance::matrix_polynomial() const {
  require(descriptor.variety() == OutputVariety::projective_line,
          "matrix_polynomial: the conic problem is not a matrix polynomial");
  return MatrixPolynomial(structured().blocks);
}

ProblemInstance sample_instance(const ProblemDescriptor& desc, std::uint64_t seed, std::uint64_t index,
                                std::uint64_t attempt) {
  ComplexGaussian gen(substream_seed(seed, index, attempt));
  const Eigen::Index n = desc.n();
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(desc.masks().size());
  for (const auto& mask : desc.masks()) {
    ComplexMatrix b = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (mask(i, j)) b(i, j) = gen();
    blocks.push_back(std::move(b));
  }
  return ProblemInstance{desc, std::move(blocks)};
}

namespace {

// det M(phi(u, v)) is a binary form of degree 2n in (u, v); its coefficients
// come from values at the (2n+1)-th roots of unity by an inverse DFT.
std::vector<ProjectivePoint> solve_quadric_points(const StructuredInstance& s, const EigenSolveOptions& options) {
  const int n = static_cast<int>(s.n());
  const int degree = 2 * n;
  const int nodes = degree + 1;
  std::vector<Complex> values(static_cast<std::size_t>(nodes));
  for (int j = 0; j < nodes; ++j) {
    const Complex u = std::polar(1.0, 2.0 * std::numbers::pi * j / nodes);
    const Complex v = 1.0;
    ComplexVector z(3);
    z << u * v, -u * (u + v), -v * (u + v);
    values[static_cast<std::size_t>(j)] = determinant(s.evaluate(z));
  }
  std::vector<Complex> coeffs(static_cast<std::size_t>(nodes), Complex(0.0));
  for (int k = 0; k < nodes; ++k) {
    Complex acc = 0.0;
    for (int j = 0; j < nodes; ++j)
      acc += values[static_cast<std::size_t>(j)] * std::polar(1.0, -2.0 * std::numbers::pi * ((j * k) % nodes) / nodes);
    coeffs[static_cast<std::size_t>(k)] = acc / static_cast<double>(nodes);
  }
  double norm_sq = 0.0;
  for (const Complex c : coeffs) norm_sq += std::norm(c);
  if (!(norm_sq > 0.0))
    throw Error(ErrorCode::degenerate_instance, "quadric: determinant vanishes identically on the conic");

  std::vector<ProjectivePoint> out;
  out.reserve(static_cast<std::size_t>(degree));
  for (const auto& uv : roots_homogeneous(coeffs, options)) out.push_back(quadric_parametrize(uv[0], uv[1]));
  return out;
}

}  // namespace

Solution solve_instance(const ProblemInstance& inst, const EigenSolveOptions& options) {
  Solution sol;
  sol.expected_count = expected_solution_count(inst.descriptor);
  const double scale = inst.p_norm();
  if (inst.descriptor.family() == Family::quadric) {
    const StructuredInstance s = inst.structured();
    const auto points = solve_quadric_points(s, options);
    sol.triples.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
      sol.triples.push_back(
          eigen_triple_at(s.evaluate(points[i].coords()), points[i], scale, substream_seed(options.seed, i)));
  } else {
    sol.triples = eigen_triples(inst.matrix_polynomial(), options);
  }
  sol.count_mismatch = sol.triples.size() != sol.expected_count;
  return sol;
}

ConditionReport condition_of(const ProblemInstance& inst, const Solution& solution) {
  const StructuredInstance s = inst.structured();
  const double p_norm = inst.p_norm();
  ConditionReport report = condition_report(s, solution.triples, p_norm);
  const Family family = inst.descriptor.family();
  const bool dense = family == Family::dense_poly || family == Family::gevp || family == Family::pevp;
  if (!dense) return report;

  // Closed forms for the unstructured families.
  const std::size_t m = inst.descriptor.m();
  const MatrixPolynomial p(s.blocks);
  double sum_sq = 0.0;
  report.mu_max = 0.0;
  for (std::size_t i = 0; i < solution.triples.size(); ++i) {
    const auto& triple = solution.triples[i];
    auto& e = report.per_eigenvalue[i];
    if (triple.trusted) {
      e.mu = family == Family::gevp ? mu_gevp_closed(inst.blocks[0], inst.blocks[1], triple)
                                    : mu_pevp_closed(p, triple);
      e.mu_st_sq = mu_stochastic(e.mu, m);
    }
    sum_sq += e.mu * e.mu;
    report.mu_max = std::max(report.mu_max, e.mu);
  }
  if (!solution.triples.empty()) report.mean_mu_sq = sum_sq / static_cast<double>(solution.triples.size());
  return report;
}

}  // namespace pevpcond
