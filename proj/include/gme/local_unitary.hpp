#pragma once

// Local (product) unitaries: one 2x2 block per qubit, acting as
// U_1 (x) U_2 (x) ... (x) U_n.  Global phases cancel under conjugation of a
// state, so special-unitary blocks cover every single-qubit basis change.

#include <vector>

#include <Eigen/Dense>

#include "gme/qubits.hpp"

namespace gme {

using SingleQubitUnitary = Eigen::Matrix2cd;

SingleQubitUnitary identity_2x2();
SingleQubitUnitary hadamard_2x2();

// True when u u^dagger = 1 within `tolerance` (max absolute deviation).
bool is_unitary(const SingleQubitUnitary& u, double tolerance = 1e-12);

class LocalUnitary {
 public:
  // One block per qubit; block i acts on qubit i+1 (qubit 1 = leftmost =
  // most significant bit).  Every block must be unitary within 1e-12.
  explicit LocalUnitary(std::vector<SingleQubitUnitary> blocks);

  static LocalUnitary identity(QubitCount n);
  static LocalUnitary hadamard_all(QubitCount n);
  // The same block on every qubit.
  static LocalUnitary repeated(QubitCount n, const SingleQubitUnitary& block);

  QubitCount qubit_count() const noexcept { return n_; }
  const SingleQubitUnitary& block(int index) const;  // 0-based
  const std::vector<SingleQubitUnitary>& blocks() const noexcept { return blocks_; }

  // Blockwise product: (*this).compose(other) applies `other` first, i.e.
  // returns the local unitary with blocks U_i V_i.
  LocalUnitary compose(const LocalUnitary& other) const;

 private:
  QubitCount n_;
  std::vector<SingleQubitUnitary> blocks_;
};

}  // namespace gme
