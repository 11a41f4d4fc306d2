#pragma once

// Register-size and qubit-subset value types.
//
// Index convention used throughout: qubit 1 is the leftmost ket symbol and
// therefore the most significant bit of a computational-basis index.  For
// n = 3 the ket |001> has index 1, and the basis vector whose excited qubits
// form a subset alpha sits at the index equal to alpha's bit mask.

#include <cstddef>
#include <cstdint>

namespace gme {

// Number of qubits in a register.  Dense 2^n x 2^n storage is used
// throughout, which keeps the supported range small.
class QubitCount {
 public:
  static constexpr int min_qubits = 2;
  static constexpr int max_qubits = 12;

  explicit QubitCount(int n);

  int value() const noexcept { return n_; }
  std::size_t dim() const noexcept { return std::size_t{1} << n_; }

  friend bool operator==(QubitCount a, QubitCount b) noexcept = default;

 private:
  int n_;
};

// Subset of the qubits {1, ..., n}, stored as a bit mask aligned with the
// basis-index convention above: qubit i occupies bit (n - i), so the mask of
// a subset equals the basis index of the ket that excites exactly that
// subset.
class SubsetMask {
 public:
  SubsetMask(QubitCount n, std::uint32_t mask);

  static SubsetMask empty(QubitCount n) { return {n, 0}; }
  static SubsetMask full(QubitCount n);
  static SubsetMask single(QubitCount n, int qubit);

  QubitCount qubit_count() const noexcept { return n_; }
  std::uint32_t mask() const noexcept { return mask_; }
  // Index of the basis ket exciting exactly this subset.
  std::size_t basis_index() const noexcept { return mask_; }

  int popcount() const noexcept;
  bool contains(int qubit) const;  // qubit is 1-based
  SubsetMask complement() const noexcept;
  SubsetMask intersect(const SubsetMask& other) const;
  SubsetMask unite(const SubsetMask& other) const;

  friend bool operator==(const SubsetMask& a, const SubsetMask& b) noexcept = default;

 private:
  QubitCount n_;
  std::uint32_t mask_;
};

}  // namespace gme
