#include "gme/criteria.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace gme {

CriterionId CriterionId::qm(int m) {
  if (m < 1 || m > QubitCount::max_qubits / 2)
    throw std::invalid_argument("criterion index must be in [1, " +
                                std::to_string(QubitCount::max_qubits / 2) + "], got " +
                                std::to_string(m));
  return CriterionId{m};
}

std::string CriterionId::name() const { return "q" + std::to_string(index_); }

CriterionId CriterionId::parse(std::string_view text) {
  if (text.size() >= 2 && (text[0] == 'q' || text[0] == 'Q')) {
    const std::string_view digits = text.substr(1);
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](unsigned char c) {
          return std::isdigit(c) != 0;
        })) {
      const int index = std::stoi(std::string(digits));
      return index == 0 ? q0() : qm(index);
    }
  }
  throw std::invalid_argument("unknown criterion \"" + std::string(text) +
                              "\" (expected q0, q1, ...)");
}

Bipartition::Bipartition(const SubsetMask& part) : part_(part) {
  const int count = part.popcount();
  if (count == 0 || count == part.qubit_count().value())
    throw std::invalid_argument("a bipartition needs a nonempty proper subset");
  if (!part_.contains(1)) part_ = part_.complement();
}

std::vector<Bipartition> all_bipartitions(QubitCount n) {
  std::vector<Bipartition> result;
  const std::uint32_t msb = static_cast<std::uint32_t>(n.dim()) >> 1;
  const std::uint32_t full = static_cast<std::uint32_t>(n.dim()) - 1;
  for (std::uint32_t mask = msb; mask < full; ++mask)
    result.emplace_back(SubsetMask{n, mask});
  return result;
}

CriterionEvaluator::CriterionEvaluator(CriterionId id, QubitCount n) : id_(id), n_(n) {
  const auto dim = static_cast<std::uint32_t>(n.dim());
  if (id.is_q0()) {
    for (const Bipartition& cut : all_bipartitions(n)) {
      diagonal_pairs_.push_back({static_cast<std::uint32_t>(cut.part_a().basis_index()),
                                 static_cast<std::uint32_t>(cut.part_b().basis_index())});
    }
    return;
  }
  const int m = id.excitations();
  if (m > n.value() / 2)
    throw std::invalid_argument("q" + std::to_string(m) + " needs at least " +
                                std::to_string(2 * m) + " qubits, got " +
                                std::to_string(n.value()));
  for (std::uint32_t alpha = 0; alpha < dim; ++alpha) {
    if (std::popcount(alpha) != m) continue;
    level_diagonals_.push_back(alpha);
    for (std::uint32_t beta = 0; beta < dim; ++beta) {
      if (beta == alpha || std::popcount(beta) != m) continue;
      if (std::popcount(alpha & beta) != m - 1) continue;
      pair_terms_.push_back({alpha, beta, alpha & beta, alpha | beta});
    }
  }
  population_coefficient_ = static_cast<double>(m) * (n.value() - m - 1);
}

std::vector<ElementIndex> CriterionEvaluator::required_elements() const {
  std::set<ElementIndex> elements;
  if (id_.is_q0()) {
    elements.emplace(0, n_.dim() - 1);
    for (const DiagonalPair& p : diagonal_pairs_) {
      elements.emplace(p.a, p.a);
      elements.emplace(p.b, p.b);
    }
  } else {
    for (const PairTerm& t : pair_terms_) {
      elements.emplace(t.row, t.col);
      elements.emplace(t.meet, t.meet);
      elements.emplace(t.join, t.join);
    }
    if (population_coefficient_ > 0.0) {
      for (std::uint32_t d : level_diagonals_) elements.emplace(d, d);
    }
  }
  return {elements.begin(), elements.end()};
}

std::vector<ElementIndex> required_elements(CriterionId id, QubitCount n) {
  return CriterionEvaluator(id, n).required_elements();
}

BasisRotation BasisRotation::fixed(LocalUnitary u) {
  BasisRotation rotation{Kind::Fixed};
  rotation.fixed_ = std::move(u);
  return rotation;
}

const LocalUnitary& BasisRotation::fixed_unitary() const {
  if (!fixed_) throw std::invalid_argument("rotation has no fixed unitary");
  return *fixed_;
}

std::string BasisRotation::name() const {
  switch (kind_) {
    case Kind::Computational:
      return "comp";
    case Kind::Hadamard:
      return "hadamard";
    case Kind::Fixed:
      return "fixed";
  }
  return "unknown";
}

LocalUnitary BasisRotation::unitary(QubitCount n) const {
  switch (kind_) {
    case Kind::Computational:
      return LocalUnitary::identity(n);
    case Kind::Hadamard:
      return LocalUnitary::hadamard_all(n);
    case Kind::Fixed:
      break;
  }
  const LocalUnitary& u = fixed_unitary();
  if (!(u.qubit_count() == n))
    throw std::invalid_argument("fixed rotation was built for " +
                                std::to_string(u.qubit_count().value()) + " qubits, state has " +
                                std::to_string(n.value()));
  return u;
}

bool operator==(const BasisRotation& a, const BasisRotation& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ != BasisRotation::Kind::Fixed) return true;
  const auto& ua = a.fixed_->blocks();
  const auto& ub = b.fixed_->blocks();
  if (ua.size() != ub.size()) return false;
  for (std::size_t i = 0; i < ua.size(); ++i) {
    if (ua[i] != ub[i]) return false;
  }
  return true;
}

DetectorConfig::DetectorConfig(std::vector<Pair> pairs) {
  if (pairs.empty()) throw std::invalid_argument("a detector needs at least one pair");
  for (auto& pair : pairs) {
    if (std::find(pairs_.begin(), pairs_.end(), pair) == pairs_.end())
      pairs_.push_back(std::move(pair));
  }
}

DetectorConfig DetectorConfig::single(CriterionId id, BasisRotation basis) {
  return DetectorConfig{{{id, std::move(basis)}}};
}

std::string DetectorConfig::name() const {
  std::string result;
  for (const Pair& pair : pairs_) {
    if (!result.empty()) result += ',';
    result += pair.first.name() + "@" + pair.second.name();
  }
  return result;
}

CriterionResult eval_detector(const DensityMatrix& rho, const DetectorConfig& detector) {
  const QubitCount n = rho.qubit_count();
  std::vector<BasisRotation> rotations;
  for (const auto& [id, rotation] : detector.pairs()) {
    if (std::find(rotations.begin(), rotations.end(), rotation) == rotations.end())
      rotations.push_back(rotation);
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const BasisRotation& rotation : rotations) {
    std::optional<DensityMatrix> rotated;
    const DensityMatrix* target = &rho;
    if (rotation.kind() != BasisRotation::Kind::Computational) {
      rotated = apply_local_unitary(rho, rotation.unitary(n));
      target = &*rotated;
    }
    for (const auto& [id, pair_rotation] : detector.pairs()) {
      if (!(pair_rotation == rotation)) continue;
      best = std::max(best, CriterionEvaluator(id, n).value(*target));
    }
  }
  return {best, best > detection_threshold};
}

}  // namespace gme
