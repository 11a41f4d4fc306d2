#include "gme/qubits.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include "gme/errors.hpp"

namespace gme {

QubitCount::QubitCount(int n) : n_(n) {
  if (n < min_qubits || n > max_qubits) {
    throw std::invalid_argument("qubit count must be in [" + std::to_string(min_qubits) + ", " +
                                std::to_string(max_qubits) + "], got " + std::to_string(n));
  }
}

SubsetMask::SubsetMask(QubitCount n, std::uint32_t mask) : n_(n), mask_(mask) {
  if (mask >= n.dim()) {
    throw std::invalid_argument("subset mask " + std::to_string(mask) + " out of range for " +
                                std::to_string(n.value()) + " qubits");
  }
}

SubsetMask SubsetMask::full(QubitCount n) {
  return {n, static_cast<std::uint32_t>(n.dim() - 1)};
}

SubsetMask SubsetMask::single(QubitCount n, int qubit) {
  if (qubit < 1 || qubit > n.value())
    throw std::invalid_argument("qubit index " + std::to_string(qubit) + " out of range");
  return {n, std::uint32_t{1} << (n.value() - qubit)};
}

int SubsetMask::popcount() const noexcept { return std::popcount(mask_); }

bool SubsetMask::contains(int qubit) const {
  if (qubit < 1 || qubit > n_.value())
    throw std::invalid_argument("qubit index " + std::to_string(qubit) + " out of range");
  return (mask_ >> (n_.value() - qubit)) & 1u;
}

SubsetMask SubsetMask::complement() const noexcept {
  return SubsetMask{n_, static_cast<std::uint32_t>((n_.dim() - 1) & ~mask_)};
}

SubsetMask SubsetMask::intersect(const SubsetMask& other) const {
  if (!(n_ == other.n_)) throw std::invalid_argument("subset masks of different register sizes");
  return SubsetMask{n_, mask_ & other.mask_};
}

SubsetMask SubsetMask::unite(const SubsetMask& other) const {
  if (!(n_ == other.n_)) throw std::invalid_argument("subset masks of different register sizes");
  return SubsetMask{n_, mask_ | other.mask_};
}

}  // namespace gme
