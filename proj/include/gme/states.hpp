#pragma once

// Multi-qubit pure states, density matrices, and isotropic-noise families.
//
// Basis indexing follows qubits.hpp: qubit 1 is the most significant bit, so
// e.g. the three-qubit W state has its nonzero amplitudes at indices 1, 2
// and 4.

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "gme/errors.hpp"
#include "gme/local_unitary.hpp"
#include "gme/qubits.hpp"

namespace gme {

using Complex = std::complex<double>;

class StateVector {
 public:
  // Amplitudes must have length 2^n and unit norm within 1e-12.
  StateVector(QubitCount n, Eigen::VectorXcd amplitudes);

  QubitCount qubit_count() const noexcept { return n_; }
  const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
  Complex amplitude(std::size_t index) const { return amplitudes_(static_cast<Eigen::Index>(index)); }

 private:
  QubitCount n_;
  Eigen::VectorXcd amplitudes_;
};

StateVector make_ghz(QubitCount n);
StateVector make_w(QubitCount n);
// Symmetric Dicke state with `excitations` qubits excited, 1 <= excitations <= n-1.
StateVector make_dicke(QubitCount n, int excitations);

class NoiseFamily;

class DensityMatrix {
 public:
  // Validates shape, Hermiticity, unit trace, and positive semidefiniteness
  // (smallest eigenvalue >= -tolerance).
  static DensityMatrix from_entries(QubitCount n, Eigen::MatrixXcd entries,
                                    double tolerance = 1e-10);
  static DensityMatrix pure(const StateVector& psi);

  QubitCount qubit_count() const noexcept { return n_; }
  const Eigen::MatrixXcd& entries() const noexcept { return entries_; }
  Complex element(std::size_t row, std::size_t col) const {
    return entries_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }

 private:
  struct Trusted {};
  DensityMatrix(QubitCount n, Eigen::MatrixXcd entries, Trusted);

  friend DensityMatrix realize(const NoiseFamily& family);
  friend DensityMatrix add_isotropic_noise(const DensityMatrix& rho, double q);
  friend DensityMatrix apply_local_unitary(const DensityMatrix& rho, const LocalUnitary& u);

  QubitCount n_;
  Eigen::MatrixXcd entries_;
};

// A pure base state mixed isotropically with the maximally mixed state:
// rho(q) = (1-q) |base><base| + q/2^n * 1.
class NoiseFamily {
 public:
  NoiseFamily(StateVector base, double q);  // q in [0, 1]

  const StateVector& base() const noexcept { return base_; }
  double q() const noexcept { return q_; }

 private:
  StateVector base_;
  double q_;
};

DensityMatrix realize(const NoiseFamily& family);

// (1-q) rho + q/2^n * 1 for an arbitrary (already mixed) state.
DensityMatrix add_isotropic_noise(const DensityMatrix& rho, double q);

// Matrix-element view of (1-q)|phi><phi| + q/2^n * 1 that never forms the
// matrix.  Holds a reference to the amplitude vector; the vector must
// outlive the view.
class IsotropicView {
 public:
  IsotropicView(QubitCount n, const Eigen::VectorXcd& amplitudes, double q);

  QubitCount qubit_count() const noexcept { return n_; }
  Complex element(std::size_t row, std::size_t col) const {
    Complex value = pure_weight_ * (*amplitudes_)(static_cast<Eigen::Index>(row)) *
                    std::conj((*amplitudes_)(static_cast<Eigen::Index>(col)));
    if (row == col) value += noise_diagonal_;
    return value;
  }

 private:
  QubitCount n_;
  const Eigen::VectorXcd* amplitudes_;
  double pure_weight_;
  double noise_diagonal_;
};

StateVector apply_local_unitary(const StateVector& psi, const LocalUnitary& u);
DensityMatrix apply_local_unitary(const DensityMatrix& rho, const LocalUnitary& u);

// Low-level amplitude transform without the StateVector norm re-check; the
// vector length must be 2^n for the unitary's n.  Used in sampling loops.
void apply_local_unitary_in_place(Eigen::VectorXcd& amplitudes, const LocalUnitary& u);

// JSON density-matrix files: {"n": <int>, "entries": [[re, im] x 4^n]} with
// entries in row-major order.  Loading validates at tolerance 1e-8 and
// throws ParseError for structural problems, ValidationError for physical
// ones.
DensityMatrix load_density_matrix(std::istream& in);
DensityMatrix load_density_matrix(const std::string& path);
void save_density_matrix(const DensityMatrix& rho, std::ostream& out);

}  // namespace gme
