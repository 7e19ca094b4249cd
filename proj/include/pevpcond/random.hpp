#pragma once

#include <cstdint>
#include <random>

#include "pevpcond/linalg.hpp"

namespace pevpcond {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for the substream addressed by (seed, index, attempt). Streams for
/// different addresses are independent of the order in which they are used.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t attempt = 0) noexcept;

/// Generator for standard complex Gaussians: real and imaginary parts are
/// independent N(0, 1/2), so E|z|^2 = 1.
class ComplexGaussian {
 public:
  explicit ComplexGaussian(std::uint64_t seed) : engine_(seed) {}

  Complex operator()();
  ComplexMatrix matrix(Eigen::Index rows, Eigen::Index cols);
  ComplexVector vector(Eigen::Index size);
  double uniform();

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Haar-distributed unitary matrix (QR of a Gaussian matrix with the
/// diagonal phase fix).
ComplexMatrix random_unitary(Eigen::Index n, ComplexGaussian& gen);

}  // namespace pevpcond
