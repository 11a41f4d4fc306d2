#include "gme/oracle.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include "gme/criteria.hpp"
#include "gme/errors.hpp"

namespace gme {

namespace {

constexpr int kMaxOracleQubits = 4;

void check_oracle_cap(QubitCount n) {
  if (n.value() > kMaxOracleQubits)
    throw CapabilityError("the two-copy oracle supports at most " +
                          std::to_string(kMaxOracleQubits) + " qubits, got " +
                          std::to_string(n.value()));
}

// Index of |a>|b> in the row-major two-copy basis.
std::size_t pair_index(std::size_t a, std::size_t b, QubitCount n) {
  return a * n.dim() + b;
}

Eigen::VectorXcd basis_pair(std::size_t a, std::size_t b, QubitCount n) {
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n.dim() * n.dim()));
  e(static_cast<Eigen::Index>(pair_index(a, b, n))) = 1.0;
  return e;
}

// <e_{a,b}| (rho (x) rho) P |e_{a,b}>: the permutation inserted on one side.
double cross_expectation(const Eigen::MatrixXcd& pair_state, const PermutationOperator& perm,
                         std::size_t a, std::size_t b, QubitCount n) {
  const Eigen::VectorXcd e = basis_pair(a, b, n);
  const Eigen::VectorXcd mapped = perm.matrix().cast<Complex>() * e;
  return e.dot(pair_state * mapped).real();
}

// <P e_{a,b}| (rho (x) rho) |P e_{a,b}>: the permuted pair's expectation.
double permuted_expectation(const Eigen::MatrixXcd& pair_state, const PermutationOperator& perm,
                            std::size_t a, std::size_t b, QubitCount n) {
  const Eigen::VectorXcd mapped = perm.matrix().cast<Complex>() * basis_pair(a, b, n);
  return mapped.dot(pair_state * mapped).real();
}

double sqrt_clamped(double x) { return std::sqrt(x > 0.0 ? x : 0.0); }

}  // namespace

PermutationOperator::PermutationOperator(QubitCount n, const SubsetMask& swap_set)
    : n_(n), swap_set_(swap_set) {
  check_oracle_cap(n);
  if (!(swap_set.qubit_count() == n))
    throw std::invalid_argument("swap set register size does not match the operator");
  const std::size_t dim = n.dim();
  const auto dim2 = static_cast<Eigen::Index>(dim * dim);
  matrix_ = Eigen::MatrixXd::Zero(dim2, dim2);
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      matrix_(static_cast<Eigen::Index>(map_basis(a, b)),
              static_cast<Eigen::Index>(pair_index(a, b, n_))) = 1.0;
    }
  }
}

std::size_t PermutationOperator::map_basis(std::size_t a, std::size_t b) const {
  const std::size_t swap = swap_set_.mask();
  const std::size_t a_out = (a & ~swap) | (b & swap);
  const std::size_t b_out = (b & ~swap) | (a & swap);
  return pair_index(a_out, b_out, n_);
}

Eigen::MatrixXcd two_copy(const DensityMatrix& rho) {
  check_oracle_cap(rho.qubit_count());
  const auto dim = static_cast<Eigen::Index>(rho.qubit_count().dim());
  Eigen::MatrixXcd out(dim * dim, dim * dim);
  for (Eigen::Index ar = 0; ar < dim; ++ar)
    for (Eigen::Index ac = 0; ac < dim; ++ac)
      out.block(ar * dim, ac * dim, dim, dim) = rho.entries()(ar, ac) * rho.entries();
  return out;
}

double oracle_q0(const DensityMatrix& rho) {
  const QubitCount n = rho.qubit_count();
  check_oracle_cap(n);
  const Eigen::MatrixXcd pair_state = two_copy(rho);
  const std::size_t last = n.dim() - 1;

  // |rho(0, full)|^2 is the cross expectation of the full-register exchange
  // on the (0, full) basis pair.
  const PermutationOperator full_swap{n, SubsetMask::full(n)};
  double total = sqrt_clamped(cross_expectation(pair_state, full_swap, 0, last, n));

  // rho(a, a) rho(~a, ~a) is the plain expectation after exchanging one side
  // of the cut, which maps |0, full> to |a, ~a>.
  for (const Bipartition& cut : all_bipartitions(n)) {
    const PermutationOperator part_swap{n, cut.part_a()};
    total -= sqrt_clamped(permuted_expectation(pair_state, part_swap, 0, last, n));
  }
  return total;
}

double oracle_qm(const DensityMatrix& rho, int m) {
  const QubitCount n = rho.qubit_count();
  check_oracle_cap(n);
  CriterionEvaluator{CriterionId::qm(m), n};  // argument validation only
  const Eigen::MatrixXcd pair_state = two_copy(rho);
  const auto dim = static_cast<std::uint32_t>(n.dim());

  double total = 0.0;
  for (std::uint32_t alpha = 0; alpha < dim; ++alpha) {
    if (std::popcount(alpha) != m) continue;
    for (std::uint32_t beta = 0; beta < dim; ++beta) {
      if (beta == alpha || std::popcount(beta) != m) continue;
      if (std::popcount(alpha & beta) != m - 1) continue;
      // Exchanging the symmetric difference maps (d_alpha, d_beta) onto
      // (d_beta, d_alpha), so the cross expectation is |rho(d_alpha, d_beta)|^2.
      const PermutationOperator off_swap{n, SubsetMask{n, alpha ^ beta}};
      const double off = cross_expectation(pair_state, off_swap, alpha, beta, n);
      // Exchanging alpha \ beta maps (d_alpha, d_beta) onto (d_and, d_or),
      // whose plain expectation is rho(d_and, d_and) rho(d_or, d_or).
      const PermutationOperator diag_swap{n, SubsetMask{n, alpha & ~beta}};
      const double diag = permuted_expectation(pair_state, diag_swap, alpha, beta, n);
      total += sqrt_clamped(off) - sqrt_clamped(diag);
    }
  }

  // rho(d_alpha, d_alpha) is the square root of the identity-permutation
  // expectation on the doubled pair.
  double population = 0.0;
  const PermutationOperator identity{n, SubsetMask::empty(n)};
  for (std::uint32_t alpha = 0; alpha < dim; ++alpha) {
    if (std::popcount(alpha) != m) continue;
    population += sqrt_clamped(permuted_expectation(pair_state, identity, alpha, alpha, n));
  }
  return total - static_cast<double>(m) * (n.value() - m - 1) * population;
}

}  // namespace gme
