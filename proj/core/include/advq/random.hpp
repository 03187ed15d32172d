#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace advq {

// Portable seeded generator. std::mt19937_64 itself is portable, but the
// standard distributions are not, so the sampling helpers below are ours.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t uniform(std::uint64_t bound);

  // Uniform real in [0, 1) with 53 bits of precision.
  double uniform_real();

  bool coin() { return (next() >> 63) != 0; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_;
};

std::uint64_t hash_string(std::string_view text);

// Derives an independent stream seed from a root seed and a name, e.g.
// derive_seed(root, "extraction") or derive_seed(stream, post_id).
std::uint64_t derive_seed(std::uint64_t root, std::string_view name);

}  // namespace advq
