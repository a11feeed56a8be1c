#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace relaxform {

/// Randomness seam so tests can script the draws made by sampling code.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  /// Uniform in [0, 1).
  virtual double uniform01() = 0;
  /// Uniform in [0, n); n > 0.
  virtual std::size_t index(std::size_t n) = 0;
};

/// mt19937_64 with explicit conversions, so sequences match across standard libraries.
class Mt64Source final : public RandomSource {
 public:
  explicit Mt64Source(std::uint64_t seed) : engine_(seed) {}

  double uniform01() override { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t index(std::size_t n) override;
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Stable per-name seed: independent of which other names exist.
std::uint64_t derive_seed(std::uint64_t base, std::string_view name);

}  // namespace relaxform
