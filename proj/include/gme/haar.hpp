#pragma once

// Haar-uniform sampling of local unitary groups, with counter-based
// reproducibility: sample k of a run is a pure function of (seed, k), so
// results are independent of threading and evaluation order.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gme/local_unitary.hpp"
#include "gme/qubits.hpp"

namespace gme {

// A small deterministic generator addressed by (seed, stream index).
// splitmix64-style: the state advances by a fixed odd constant and each
// output is a strong 64-bit mix of the state, so distinct streams are
// decorrelated without any sequential dependency between samples.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_index) noexcept;

  std::uint64_t stream_index() const noexcept { return stream_index_; }

  std::uint64_t next_u64() noexcept;
  // Uniform on [0, 1) with 53 random bits.
  double next_unit() noexcept;
  // Standard normal via the Marsaglia polar method (pairs are cached).
  double next_gaussian() noexcept;

 private:
  std::uint64_t state_;
  std::uint64_t stream_index_;
  double cached_gaussian_ = 0.0;
  bool has_cached_gaussian_ = false;
};

// Haar-uniform SU(2) element.  A 4-vector of independent standard normals,
// normalized, is a uniform unit quaternion (a, b, c, d); the matrix below is
// the corresponding special unitary.  Other charts (Euler-angle style
// parametrizations with explicit density weights) realize the same measure;
// the quaternion route needs no weighting.  The measure-zero all-zero draw
// is redrawn.
SingleQubitUnitary sample_su2(RandomStream& rng);

// Which subgroup of the local unitaries to sample.
class UnitaryGroup {
 public:
  enum class Mode {
    Product,    // independent Haar SU(2) on every qubit
    Symmetric,  // one Haar SU(2), repeated on every qubit
    Fixed,      // a caller-supplied sequence, indexed by stream index
  };

  static UnitaryGroup product() { return UnitaryGroup{Mode::Product}; }
  static UnitaryGroup symmetric() { return UnitaryGroup{Mode::Symmetric}; }
  static UnitaryGroup fixed(std::vector<LocalUnitary> sequence);

  Mode mode() const noexcept { return mode_; }
  const std::vector<LocalUnitary>& fixed_sequence() const;

  std::string name() const;                        // "product", "symmetric", "fixed"
  static UnitaryGroup parse(std::string_view text);  // "product" | "symmetric"

 private:
  explicit UnitaryGroup(Mode mode) : mode_(mode) {}
  Mode mode_;
  std::vector<LocalUnitary> sequence_;
};

// Draw one local unitary for register size n.  Product mode consumes n SU(2)
// draws in qubit order; Symmetric consumes one; Fixed returns
// sequence[rng.stream_index()] and throws CapabilityError when exhausted.
LocalUnitary sample_group(const UnitaryGroup& group, QubitCount n, RandomStream& rng);

}  // namespace gme
