#include "pevpcond/random.hpp"

#include <cmath>

#include <Eigen/QR>

namespace pevpcond {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t attempt) noexcept {
  return mix64(mix64(mix64(seed) ^ index) ^ (attempt * 0xd1b54a32d192ed03ULL));
}

Complex ComplexGaussian::operator()() {
  constexpr double kScale = 0.70710678118654752440;
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {kScale * re, kScale * im};
}

ComplexMatrix ComplexGaussian::matrix(Eigen::Index rows, Eigen::Index cols) {
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = (*this)();
  return m;
}

ComplexVector ComplexGaussian::vector(Eigen::Index size) {
  ComplexVector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = (*this)();
  return v;
}

double ComplexGaussian::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

ComplexMatrix random_unitary(Eigen::Index n, ComplexGaussian& gen) {
  const Eigen::MatrixXcd g = gen.matrix(n, n);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    if (a > 0.0) q.col(j) *= d / a;
  }
  return q;
}

}  // namespace pevpcond
