#include "gme/local_unitary.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace gme {

namespace {
constexpr double kUnitarityTolerance = 1e-12;
}

SingleQubitUnitary identity_2x2() { return SingleQubitUnitary::Identity(); }

SingleQubitUnitary hadamard_2x2() {
  SingleQubitUnitary h;
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

bool is_unitary(const SingleQubitUnitary& u, double tolerance) {
  return (u * u.adjoint() - SingleQubitUnitary::Identity()).cwiseAbs().maxCoeff() <= tolerance;
}

LocalUnitary::LocalUnitary(std::vector<SingleQubitUnitary> blocks)
    : n_(static_cast<int>(blocks.size())), blocks_(std::move(blocks)) {
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (!is_unitary(blocks_[i], kUnitarityTolerance)) {
      throw std::invalid_argument("block " + std::to_string(i + 1) + " is not unitary");
    }
  }
}

LocalUnitary LocalUnitary::identity(QubitCount n) {
  return LocalUnitary{std::vector<SingleQubitUnitary>(n.value(), identity_2x2())};
}

LocalUnitary LocalUnitary::hadamard_all(QubitCount n) {
  return LocalUnitary{std::vector<SingleQubitUnitary>(n.value(), hadamard_2x2())};
}

LocalUnitary LocalUnitary::repeated(QubitCount n, const SingleQubitUnitary& block) {
  return LocalUnitary{std::vector<SingleQubitUnitary>(n.value(), block)};
}

const SingleQubitUnitary& LocalUnitary::block(int index) const {
  if (index < 0 || index >= n_.value())
    throw std::invalid_argument("block index " + std::to_string(index) + " out of range");
  return blocks_[static_cast<std::size_t>(index)];
}

LocalUnitary LocalUnitary::compose(const LocalUnitary& other) const {
  if (!(n_ == other.n_))
    throw std::invalid_argument("cannot compose local unitaries of different sizes");
  std::vector<SingleQubitUnitary> blocks(blocks_.size());
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks[i] = blocks_[i] * other.blocks_[i];
  return LocalUnitary{std::move(blocks)};
}

}  // namespace gme
