#include "gme/haar.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "gme/errors.hpp"

namespace gme {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Stafford/splitmix64 finalizer: a bijective avalanche mix of 64 bits.
std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_index) noexcept
    : state_(mix64(seed + kGolden * (stream_index + 1))), stream_index_(stream_index) {}

std::uint64_t RandomStream::next_u64() noexcept {
  state_ += kGolden;
  return mix64(state_);
}

double RandomStream::next_unit() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::next_gaussian() noexcept {
  if (has_cached_gaussian_) {
    has_cached_gaussian_ = false;
    return cached_gaussian_;
  }
  double u, v, s;
  do {
    u = 2.0 * next_unit() - 1.0;
    v = 2.0 * next_unit() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  cached_gaussian_ = v * f;
  has_cached_gaussian_ = true;
  return u * f;
}

SingleQubitUnitary sample_su2(RandomStream& rng) {
  double a, b, c, d, norm;
  do {
    a = rng.next_gaussian();
    b = rng.next_gaussian();
    c = rng.next_gaussian();
    d = rng.next_gaussian();
    norm = std::sqrt(a * a + b * b + c * c + d * d);
  } while (norm == 0.0);
  a /= norm;
  b /= norm;
  c /= norm;
  d /= norm;
  using C = std::complex<double>;
  SingleQubitUnitary u;
  u << C{a, b}, C{c, d}, C{-c, d}, C{a, -b};
  return u;
}

UnitaryGroup UnitaryGroup::fixed(std::vector<LocalUnitary> sequence) {
  if (sequence.empty()) throw std::invalid_argument("a fixed unitary sequence cannot be empty");
  UnitaryGroup group{Mode::Fixed};
  group.sequence_ = std::move(sequence);
  return group;
}

const std::vector<LocalUnitary>& UnitaryGroup::fixed_sequence() const {
  if (mode_ != Mode::Fixed)
    throw std::invalid_argument("only a fixed group carries a unitary sequence");
  return sequence_;
}

std::string UnitaryGroup::name() const {
  switch (mode_) {
    case Mode::Product:
      return "product";
    case Mode::Symmetric:
      return "symmetric";
    case Mode::Fixed:
      return "fixed";
  }
  return "unknown";
}

UnitaryGroup UnitaryGroup::parse(std::string_view text) {
  if (text == "product") return product();
  if (text == "symmetric") return symmetric();
  throw std::invalid_argument("unknown unitary group \"" + std::string(text) +
                              "\" (expected product or symmetric)");
}

LocalUnitary sample_group(const UnitaryGroup& group, QubitCount n, RandomStream& rng) {
  switch (group.mode()) {
    case UnitaryGroup::Mode::Product: {
      std::vector<SingleQubitUnitary> blocks;
      blocks.reserve(static_cast<std::size_t>(n.value()));
      for (int i = 0; i < n.value(); ++i) blocks.push_back(sample_su2(rng));
      return LocalUnitary{std::move(blocks)};
    }
    case UnitaryGroup::Mode::Symmetric:
      return LocalUnitary::repeated(n, sample_su2(rng));
    case UnitaryGroup::Mode::Fixed: {
      const auto& sequence = group.fixed_sequence();
      if (rng.stream_index() >= sequence.size())
        throw CapabilityError("fixed unitary sequence exhausted at sample " +
                              std::to_string(rng.stream_index()));
      const LocalUnitary& u = sequence[rng.stream_index()];
      if (!(u.qubit_count() == n))
        throw std::invalid_argument("fixed sequence entry acts on " +
                                    std::to_string(u.qubit_count().value()) +
                                    " qubits, expected " + std::to_string(n.value()));
      return u;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace gme
