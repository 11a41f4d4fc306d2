#pragma once

// Density-matrix-element entanglement criteria.
//
// Two families are implemented for an n-qubit state rho, both reading only
// a handful of matrix elements:
//
//   q0 = |rho(0, 2^n-1)| - sum over bipartitions gamma of
//          sqrt(rho(a, a) * rho(~a, ~a))
//
// where gamma runs over the 2^(n-1) - 1 unordered bipartitions of the
// register, a is the basis index exciting one side of the cut, and ~a its
// complement; and for 1 <= m <= n/2
//
//   q_m = sum over ordered subset pairs (alpha, beta), |alpha| = |beta| = m,
//           |alpha ^ beta| = m - 1, of
//             |rho(d_alpha, d_beta)| - sqrt(rho(d_and, d_and) * rho(d_or, d_or))
//         - m (n - m - 1) * sum over |alpha| = m of rho(d_alpha, d_alpha)
//
// with d_alpha the index of the basis ket exciting exactly alpha, d_and and
// d_or those of the intersection and union.  Every q_i is nonpositive on
// every biseparable state, so a value above the detection threshold
// certifies genuine multipartite entanglement.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gme/local_unitary.hpp"
#include "gme/qubits.hpp"
#include "gme/states.hpp"

namespace gme {

// Strict positivity margin: a criterion value counts as a detection only
// above this, keeping rounding noise on biseparable states out.
inline constexpr double detection_threshold = 1e-10;

// Anything exposing density-matrix elements by index.
template <class S>
concept ElementSource = requires(const S& s, std::size_t i, std::size_t j) {
  { s.qubit_count() } -> std::same_as<QubitCount>;
  { s.element(i, j) } -> std::convertible_to<Complex>;
};

// Which criterion: q0 or q_m for m >= 1.
class CriterionId {
 public:
  static CriterionId q0() noexcept { return CriterionId{0}; }
  static CriterionId qm(int m);  // m in [1, QubitCount::max_qubits / 2]

  bool is_q0() const noexcept { return index_ == 0; }
  // m for a q_m criterion, 0 for q0.
  int excitations() const noexcept { return index_; }
  std::string name() const;                       // "q0", "q1", ...
  static CriterionId parse(std::string_view text);  // accepts the same names

  friend bool operator==(CriterionId a, CriterionId b) noexcept = default;
  friend bool operator<(CriterionId a, CriterionId b) noexcept { return a.index_ < b.index_; }

 private:
  explicit CriterionId(int index) noexcept : index_(index) {}
  int index_;
};

struct CriterionResult {
  double value = 0.0;
  bool detected = false;  // value > detection_threshold
};

// Unordered bipartition of the register into a nonempty proper subset and
// its complement, canonicalized so the stored subset contains qubit 1.
class Bipartition {
 public:
  explicit Bipartition(const SubsetMask& part);

  const SubsetMask& part_a() const noexcept { return part_; }
  SubsetMask part_b() const noexcept { return part_.complement(); }

  friend bool operator==(const Bipartition& a, const Bipartition& b) noexcept = default;

 private:
  SubsetMask part_;
};

// All 2^(n-1) - 1 bipartitions, in increasing order of the canonical mask.
std::vector<Bipartition> all_bipartitions(QubitCount n);

using ElementIndex = std::pair<std::size_t, std::size_t>;

// Precomputed index tables for one criterion at a fixed register size.
// Construction validates the (criterion, n) combination; evaluation then
// only walks the tables, so it is cheap enough for inner Monte Carlo loops.
class CriterionEvaluator {
 public:
  CriterionEvaluator(CriterionId id, QubitCount n);

  CriterionId id() const noexcept { return id_; }
  QubitCount qubit_count() const noexcept { return n_; }

  template <ElementSource S>
  double value(const S& source) const {
    return id_.is_q0() ? value_q0(source) : value_qm(source);
  }

  template <ElementSource S>
  CriterionResult evaluate(const S& source) const {
    const double v = value(source);
    return {v, v > detection_threshold};
  }

  // Exactly the element indices evaluation reads, sorted, duplicates removed.
  std::vector<ElementIndex> required_elements() const;

 private:
  struct DiagonalPair {
    std::uint32_t a;
    std::uint32_t b;
  };
  struct PairTerm {
    std::uint32_t row;
    std::uint32_t col;
    std::uint32_t meet;
    std::uint32_t join;
  };

  template <ElementSource S>
  static double diagonal(const S& source, std::uint32_t i) {
    // Clamp tiny negative rounding noise so the square roots stay real.
    const double d = source.element(i, i).real();
    return d > 0.0 ? d : 0.0;
  }

  template <ElementSource S>
  double value_q0(const S& source) const {
    double total = std::abs(source.element(0, n_.dim() - 1));
    for (const DiagonalPair& p : diagonal_pairs_)
      total -= std::sqrt(diagonal(source, p.a) * diagonal(source, p.b));
    return total;
  }

  template <ElementSource S>
  double value_qm(const S& source) const {
    double total = 0.0;
    for (const PairTerm& t : pair_terms_) {
      total += std::abs(source.element(t.row, t.col)) -
               std::sqrt(diagonal(source, t.meet) * diagonal(source, t.join));
    }
    if (population_coefficient_ > 0.0) {
      double population = 0.0;
      for (std::uint32_t d : level_diagonals_) population += diagonal(source, d);
      total -= population_coefficient_ * population;
    }
    return total;
  }

  CriterionId id_;
  QubitCount n_;
  std::vector<DiagonalPair> diagonal_pairs_;  // q0 only
  std::vector<PairTerm> pair_terms_;          // q_m only
  std::vector<std::uint32_t> level_diagonals_;
  double population_coefficient_ = 0.0;
};

template <ElementSource S>
CriterionResult eval_q0(const S& source) {
  return CriterionEvaluator(CriterionId::q0(), source.qubit_count()).evaluate(source);
}

template <ElementSource S>
CriterionResult eval_qm(const S& source, int m) {
  return CriterionEvaluator(CriterionId::qm(m), source.qubit_count()).evaluate(source);
}

std::vector<ElementIndex> required_elements(CriterionId id, QubitCount n);

// Which basis a criterion is read in: a fixed local rotation applied to the
// state before the elements are taken.
class BasisRotation {
 public:
  enum class Kind { Computational, Hadamard, Fixed };

  static BasisRotation computational() { return BasisRotation{Kind::Computational}; }
  static BasisRotation hadamard() { return BasisRotation{Kind::Hadamard}; }
  static BasisRotation fixed(LocalUnitary u);

  Kind kind() const noexcept { return kind_; }
  const LocalUnitary& fixed_unitary() const;  // Fixed only
  std::string name() const;

  // The rotation as a local unitary on n qubits; validates that a Fixed
  // rotation was built for the same register size.
  LocalUnitary unitary(QubitCount n) const;

  friend bool operator==(const BasisRotation& a, const BasisRotation& b);

 private:
  explicit BasisRotation(Kind kind) : kind_(kind) {}
  Kind kind_;
  std::optional<LocalUnitary> fixed_;
};

// A set of (criterion, basis) pairs evaluated jointly: the detector value is
// the maximum of the member criteria, each read in its basis.
class DetectorConfig {
 public:
  using Pair = std::pair<CriterionId, BasisRotation>;

  explicit DetectorConfig(std::vector<Pair> pairs);  // nonempty; duplicates removed

  static DetectorConfig single(CriterionId id, BasisRotation basis);

  const std::vector<Pair>& pairs() const noexcept { return pairs_; }
  std::string name() const;  // "q0@comp,q1@hadamard"

 private:
  std::vector<Pair> pairs_;
};

// max over the detector's pairs of the criterion value in its basis, along
// with the detection flag at the shared threshold.
CriterionResult eval_detector(const DensityMatrix& rho, const DetectorConfig& detector);

}  // namespace gme
