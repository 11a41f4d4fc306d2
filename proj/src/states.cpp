#include "gme/states.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace gme {

namespace {

std::string format_double(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3g", x);
  return buffer;
}

// Applies a 2x2 block to the qubit at bit position `bit` (0 = least
// significant) of a state vector.
void apply_block_to_vector(Eigen::VectorXcd& amps, const SingleQubitUnitary& u, int bit) {
  const std::size_t stride = std::size_t{1} << bit;
  const std::size_t dim = static_cast<std::size_t>(amps.size());
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t offset = 0; offset < stride; ++offset) {
      const auto i = static_cast<Eigen::Index>(base + offset);
      const auto j = static_cast<Eigen::Index>(base + offset + stride);
      const Complex x = amps(i);
      const Complex y = amps(j);
      amps(i) = u(0, 0) * x + u(0, 1) * y;
      amps(j) = u(1, 0) * x + u(1, 1) * y;
    }
  }
}

// m <- (u on qubit `bit`) m, i.e. the block mixes row pairs.
void apply_block_left(Eigen::MatrixXcd& m, const SingleQubitUnitary& u, int bit,
                      Eigen::RowVectorXcd& x, Eigen::RowVectorXcd& y) {
  const std::size_t stride = std::size_t{1} << bit;
  const std::size_t dim = static_cast<std::size_t>(m.rows());
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t offset = 0; offset < stride; ++offset) {
      const auto i = static_cast<Eigen::Index>(base + offset);
      const auto j = static_cast<Eigen::Index>(base + offset + stride);
      x = m.row(i);
      y = m.row(j);
      m.row(i) = u(0, 0) * x + u(0, 1) * y;
      m.row(j) = u(1, 0) * x + u(1, 1) * y;
    }
  }
}

// m <- m (u on qubit `bit`)^dagger, mixing column pairs.
void apply_block_right_adjoint(Eigen::MatrixXcd& m, const SingleQubitUnitary& u, int bit,
                               Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
  const std::size_t stride = std::size_t{1} << bit;
  const std::size_t dim = static_cast<std::size_t>(m.cols());
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t offset = 0; offset < stride; ++offset) {
      const auto i = static_cast<Eigen::Index>(base + offset);
      const auto j = static_cast<Eigen::Index>(base + offset + stride);
      x = m.col(i);
      y = m.col(j);
      m.col(i) = std::conj(u(0, 0)) * x + std::conj(u(0, 1)) * y;
      m.col(j) = std::conj(u(1, 0)) * x + std::conj(u(1, 1)) * y;
    }
  }
}

void check_register_match(QubitCount state_n, QubitCount unitary_n) {
  if (!(state_n == unitary_n)) {
    throw std::invalid_argument("local unitary acts on " + std::to_string(unitary_n.value()) +
                                " qubits, state has " + std::to_string(state_n.value()));
  }
}

}  // namespace

StateVector::StateVector(QubitCount n, Eigen::VectorXcd amplitudes)
    : n_(n), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != static_cast<Eigen::Index>(n.dim())) {
    throw std::invalid_argument("amplitude vector has length " +
                                std::to_string(amplitudes_.size()) + ", expected " +
                                std::to_string(n.dim()));
  }
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > 1e-12) {
    throw ValidationError(ValidationIssue::Norm,
                          "state vector norm is " + format_double(norm) + ", expected 1");
  }
}

StateVector make_ghz(QubitCount n) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n.dim()));
  const double s = 1.0 / std::sqrt(2.0);
  amps(0) = s;
  amps(amps.size() - 1) = s;
  return {n, std::move(amps)};
}

StateVector make_dicke(QubitCount n, int excitations) {
  if (excitations < 1 || excitations > n.value() - 1) {
    throw std::invalid_argument("excitation number must be in [1, n-1], got " +
                                std::to_string(excitations));
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n.dim()));
  std::size_t count = 0;
  for (std::uint32_t basis = 0; basis < n.dim(); ++basis) {
    if (std::popcount(basis) == excitations) ++count;
  }
  const double amp = 1.0 / std::sqrt(static_cast<double>(count));
  for (std::uint32_t basis = 0; basis < n.dim(); ++basis) {
    if (std::popcount(basis) == excitations) amps(basis) = amp;
  }
  return {n, std::move(amps)};
}

StateVector make_w(QubitCount n) { return make_dicke(n, 1); }

DensityMatrix::DensityMatrix(QubitCount n, Eigen::MatrixXcd entries, Trusted)
    : n_(n), entries_(std::move(entries)) {}

DensityMatrix DensityMatrix::from_entries(QubitCount n, Eigen::MatrixXcd entries,
                                          double tolerance) {
  const auto dim = static_cast<Eigen::Index>(n.dim());
  if (entries.rows() != dim || entries.cols() != dim) {
    throw std::invalid_argument("matrix is " + std::to_string(entries.rows()) + "x" +
                                std::to_string(entries.cols()) + ", expected " +
                                std::to_string(dim) + "x" + std::to_string(dim));
  }
  const double hermiticity_defect = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  if (hermiticity_defect > tolerance) {
    throw ValidationError(ValidationIssue::Hermiticity, "max |rho - rho^dagger| = " +
                                                            format_double(hermiticity_defect));
  }
  const double trace_defect = std::abs(entries.trace() - Complex{1.0, 0.0});
  if (trace_defect > tolerance) {
    throw ValidationError(ValidationIssue::Trace,
                          "|tr(rho) - 1| = " + format_double(trace_defect));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (entries + entries.adjoint()),
                                                         Eigen::EigenvaluesOnly);
  const double min_eigenvalue = solver.eigenvalues().minCoeff();
  if (min_eigenvalue < -tolerance) {
    throw ValidationError(ValidationIssue::Positivity,
                          "smallest eigenvalue is " + format_double(min_eigenvalue));
  }
  return DensityMatrix{n, std::move(entries), Trusted{}};
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  const auto& a = psi.amplitudes();
  return DensityMatrix{psi.qubit_count(), a * a.adjoint(), Trusted{}};
}

NoiseFamily::NoiseFamily(StateVector base, double q) : base_(std::move(base)), q_(q) {
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("noise weight must be in [0, 1], got " + format_double(q));
}

DensityMatrix realize(const NoiseFamily& family) {
  const auto& a = family.base().amplitudes();
  Eigen::MatrixXcd m = (1.0 - family.q()) * (a * a.adjoint());
  m.diagonal().array() += family.q() / static_cast<double>(a.size());
  return DensityMatrix{family.base().qubit_count(), std::move(m), DensityMatrix::Trusted{}};
}

DensityMatrix add_isotropic_noise(const DensityMatrix& rho, double q) {
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("noise weight must be in [0, 1], got " + format_double(q));
  Eigen::MatrixXcd m = (1.0 - q) * rho.entries();
  m.diagonal().array() += q / static_cast<double>(rho.qubit_count().dim());
  return DensityMatrix{rho.qubit_count(), std::move(m), DensityMatrix::Trusted{}};
}

IsotropicView::IsotropicView(QubitCount n, const Eigen::VectorXcd& amplitudes, double q)
    : n_(n), amplitudes_(&amplitudes), pure_weight_(1.0 - q),
      noise_diagonal_(q / static_cast<double>(n.dim())) {
  if (amplitudes.size() != static_cast<Eigen::Index>(n.dim()))
    throw std::invalid_argument("amplitude vector length does not match register size");
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("noise weight must be in [0, 1], got " + format_double(q));
}

void apply_local_unitary_in_place(Eigen::VectorXcd& amplitudes, const LocalUnitary& u) {
  const int n = u.qubit_count().value();
  if (amplitudes.size() != static_cast<Eigen::Index>(u.qubit_count().dim()))
    throw std::invalid_argument("amplitude vector length does not match the unitary");
  for (int qubit = 1; qubit <= n; ++qubit)
    apply_block_to_vector(amplitudes, u.block(qubit - 1), n - qubit);
}

StateVector apply_local_unitary(const StateVector& psi, const LocalUnitary& u) {
  check_register_match(psi.qubit_count(), u.qubit_count());
  Eigen::VectorXcd amps = psi.amplitudes();
  apply_local_unitary_in_place(amps, u);
  return {psi.qubit_count(), std::move(amps)};
}

DensityMatrix apply_local_unitary(const DensityMatrix& rho, const LocalUnitary& u) {
  check_register_match(rho.qubit_count(), u.qubit_count());
  const int n = rho.qubit_count().value();
  Eigen::MatrixXcd m = rho.entries();
  Eigen::RowVectorXcd row_x(m.cols()), row_y(m.cols());
  Eigen::VectorXcd col_x(m.rows()), col_y(m.rows());
  for (int qubit = 1; qubit <= n; ++qubit) {
    apply_block_left(m, u.block(qubit - 1), n - qubit, row_x, row_y);
    apply_block_right_adjoint(m, u.block(qubit - 1), n - qubit, col_x, col_y);
  }
  return DensityMatrix{rho.qubit_count(), std::move(m), DensityMatrix::Trusted{}};
}

DensityMatrix load_density_matrix(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("entries"))
    throw ParseError("expected an object with \"n\" and \"entries\" fields");
  if (!doc["n"].is_number_integer()) throw ParseError("\"n\" must be an integer");
  const int n_raw = doc["n"].get<int>();
  if (n_raw < QubitCount::min_qubits || n_raw > QubitCount::max_qubits)
    throw ParseError("\"n\" must be in [" + std::to_string(QubitCount::min_qubits) + ", " +
                     std::to_string(QubitCount::max_qubits) + "], got " + std::to_string(n_raw));
  const QubitCount n{n_raw};
  const auto dim = static_cast<Eigen::Index>(n.dim());

  const auto& raw = doc["entries"];
  if (!raw.is_array() || raw.size() != static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim))
    throw ParseError("\"entries\" must be an array of 4^n [re, im] pairs");
  Eigen::MatrixXcd m(dim, dim);
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const auto& pair = raw[k];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
      throw ParseError("entry " + std::to_string(k) + " is not a [re, im] pair");
    m(static_cast<Eigen::Index>(k / n.dim()), static_cast<Eigen::Index>(k % n.dim())) =
        Complex{pair[0].get<double>(), pair[1].get<double>()};
  }
  return DensityMatrix::from_entries(n, std::move(m), 1e-8);
}

DensityMatrix load_density_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  return load_density_matrix(in);
}

void save_density_matrix(const DensityMatrix& rho, std::ostream& out) {
  nlohmann::json doc;
  doc["n"] = rho.qubit_count().value();
  nlohmann::json entries = nlohmann::json::array();
  const auto dim = static_cast<Eigen::Index>(rho.qubit_count().dim());
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      const Complex v = rho.entries()(r, c);
      entries.push_back({v.real(), v.imag()});
    }
  }
  doc["entries"] = std::move(entries);
  out << doc.dump() << '\n';
}

}  // namespace gme
