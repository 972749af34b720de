#include "ksynth/dense.hpp"

#include <bit>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace ksynth {

Matrix pauli_word_dense(const PauliString& word) {
  const int L = word.length();
  if (L > 15) throw std::invalid_argument("pauli_word_dense: length too large");
  const auto dim = std::size_t{1} << L;
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  // Column b has one entry: row b ^ x_mask, value i^{#Y} (-1)^{popcount(z & b)}.
  const std::uint64_t x = word.x_mask();
  const std::uint64_t z = word.z_mask();
  const int num_y = std::popcount(x & z);
  Complex base{1.0, 0.0};
  switch (num_y % 4) {
    case 1:
      base = {0.0, 1.0};
      break;
    case 2:
      base = {-1.0, 0.0};
      break;
    case 3:
      base = {0.0, -1.0};
      break;
    default:
      break;
  }
  for (std::uint64_t b = 0; b < dim; ++b) {
    const Real sign = std::popcount(z & b) % 2 == 0 ? 1.0 : -1.0;
    m(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b)) = base * sign;
  }
  return m;
}

Matrix to_dense(const OperatorSum& a, int max_length) {
  if (a.length() > max_length) {
    throw std::invalid_argument("to_dense: length " + std::to_string(a.length()) +
                                " exceeds configured max " + std::to_string(max_length));
  }
  const auto dim = Eigen::Index{1} << a.length();
  Matrix m = Matrix::Zero(dim, dim);
  for (const auto& [word, c] : a) {
    m += c * pauli_word_dense(word);
  }
  return m;
}

Matrix hermitian_exponential(const Matrix& h, Real t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_exponential: eigendecomposition failed");
  }
  const Vector phases =
      (Complex(0.0, -t) * es.eigenvalues().cast<Complex>().array()).exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace ksynth
