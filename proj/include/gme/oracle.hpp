#pragma once

// Literal two-copy oracle for the criteria in criteria.hpp.
//
// Each criterion term is an expectation value on rho (x) rho of explicit
// permutation operators that exchange a subset of qubits between the two
// copies.  This is the defining form of the criteria; it is exponentially
// more expensive than the element formulas and exists to cross-check them,
// so it is capped at small registers.

#include <Eigen/Dense>

#include "gme/qubits.hpp"
#include "gme/states.hpp"

namespace gme {

// P_alpha on the two-copy space: maps |a>|b> to |a'>|b'> where a' takes the
// bits inside `swap_set` from b and keeps the rest from a, and vice versa.
// Materialized as a dense 4^n x 4^n 0/1 matrix; n is capped at 4
// (CapabilityError beyond).
class PermutationOperator {
 public:
  PermutationOperator(QubitCount n, const SubsetMask& swap_set);

  QubitCount qubit_count() const noexcept { return n_; }
  const SubsetMask& swap_set() const noexcept { return swap_set_; }
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }

  // Index of P |a>|b> in the two-copy basis (row-major: index = a * 2^n + b).
  std::size_t map_basis(std::size_t a, std::size_t b) const;

 private:
  QubitCount n_;
  SubsetMask swap_set_;
  Eigen::MatrixXd matrix_;
};

// kron(rho, rho) in the same two-copy basis ordering.
Eigen::MatrixXcd two_copy(const DensityMatrix& rho);

// The criteria evaluated through the permutation operators, no element
// shortcuts.  Same caps as PermutationOperator.
double oracle_q0(const DensityMatrix& rho);
double oracle_qm(const DensityMatrix& rho, int m);

}  // namespace gme
