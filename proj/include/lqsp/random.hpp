#pragma once

#include <cstdint>
#include <random>

namespace lqsp {

/// Seedable generator whose output is identical on every platform.
///
/// The bit stream comes from std::mt19937_64, whose sequence is fixed by the
/// standard. The std:: distributions are not, so the transforms are done here:
/// uniforms take the top 53 bits, normals use the Marsaglia polar method, and
/// bounded integers use rejection sampling.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0,1).
  double uniform();
  /// Uniform on [lo,hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal.
  double gaussian();
  /// Uniform integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace lqsp
