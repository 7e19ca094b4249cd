#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pevpcond/condition.hpp"
#include "pevpcond/matpoly.hpp"

namespace pevpcond {

enum class Family { dense_poly, lacunary_poly, gevp, pevp, masked_pevp, quadric };

const char* to_string(Family family) noexcept;
/// Accepts the canonical names plus the short aliases "dense", "lacunary",
/// "masked" and "sparse_qep" (the latter resolves to masked_pevp).
Family family_from_string(std::string_view name);

Mask mask_full(Eigen::Index n);
Mask mask_diagonal(Eigen::Index n);
Mask mask_upper(Eigen::Index n);
Mask mask_lower(Eigen::Index n);
/// "full", "diag", "upper" or "lower".
Mask mask_from_name(std::string_view name, Eigen::Index n);
/// Inverse of mask_from_name; empty when the pattern has no name.
std::string mask_name(const Mask& mask);

/// A problem family with its parameters (m, r, s, d_O): input dimension,
/// degree of F in the input, degree of F in the output point, and degree of
/// the output variety.
class ProblemDescriptor {
 public:
  static ProblemDescriptor dense_poly(int degree);
  /// `indices` must contain 0 and `degree`; duplicates are rejected.
  static ProblemDescriptor lacunary_poly(int degree, std::vector<int> indices);
  static ProblemDescriptor gevp(int n);
  static ProblemDescriptor pevp(int n, int degree);
  /// One mask per coefficient A_0..A_d.
  static ProblemDescriptor masked_pevp(int n, int degree, std::vector<Mask> masks);
  /// Quadratic problem with A_2 diagonal, A_1 full and A_0 upper triangular.
  static ProblemDescriptor sparse_qep(int n);
  static ProblemDescriptor quadric(int n);

  Family family() const { return family_; }
  int n() const { return n_; }
  /// N for the polynomial families, d for the matrix polynomial ones, 1 for
  /// the pencil and the conic problem.
  int degree() const { return degree_; }
  const std::vector<int>& indices() const { return indices_; }
  /// Masks of the input blocks, in input order.
  const std::vector<Mask>& masks() const { return masks_; }

  std::size_t m() const;
  int r() const;
  int s() const;
  int d_O() const;

  OutputVariety variety() const;
  bool is_sparse_qep() const;
  /// Closed form printed in the literature when it differs from (m-1)r/s.
  std::optional<double> printed_value() const;
  std::string label() const;

 private:
  ProblemDescriptor() = default;

  Family family_ = Family::pevp;
  int n_ = 1;
  int degree_ = 1;
  std::vector<int> indices_;
  std::vector<Mask> masks_;
};

/// Descriptor from a family name and its parameters. `degree` is N for the
/// polynomial families and d for matrix polynomials; it is ignored where the
/// family fixes it. Masks are given by name, one per coefficient block, and
/// are required for masked problems other than "sparse_qep".
ProblemDescriptor make_descriptor(std::string_view family, int n, int degree, std::vector<int> indices = {},
                                  const std::vector<std::string>& masks = {});

/// (m - 1) r / s.
double expected_mean_sq_condition(const ProblemDescriptor& desc);
/// s d_O.
std::size_t expected_solution_count(const ProblemDescriptor& desc);

/// Descriptor plus coefficient blocks in input order: a_0..a_N as 1x1 blocks
/// for polynomials, (A, B) for the pencil det(beta A - alpha B), A_0..A_d for
/// matrix polynomials and (A, B, C) for the conic problem.
struct ProblemInstance {
  ProblemDescriptor descriptor;
  std::vector<ComplexMatrix> blocks;

  /// Throws Error(invalid_argument) on shape or mask violations.
  static ProblemInstance create(ProblemDescriptor descriptor, std::vector<ComplexMatrix> blocks);

  double p_norm() const;
  /// M(z) = sum_k w_k(z) B_k form; the pencil becomes (A, -B).
  StructuredInstance structured() const;
  /// Only for families on the projective line.
  MatrixPolynomial matrix_polynomial() const;
};

/// Standard complex Gaussian on the free entries, zeros elsewhere. Fully
/// determined by (seed, index, attempt).
ProblemInstance sample_instance(const ProblemDescriptor& desc, std::uint64_t seed, std::uint64_t index,
                                std::uint64_t attempt = 0);

struct Solution {
  std::vector<EigenTriple> triples;
  std::size_t expected_count = 0;
  bool count_mismatch = false;
};

Solution solve_instance(const ProblemInstance& inst, const EigenSolveOptions& options = {});

/// Per-eigenvalue condition numbers, closed forms for the dense families
/// and the structured engine otherwise.
ConditionReport condition_of(const ProblemInstance& inst, const Solution& solution);

}  // namespace pevpcond
