#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <type_traits>

namespace bocs {

/// Seeded generator with the hand-rolled samplers used throughout the
/// library. Distribution draws depend only on the mt19937_64 stream, so a
/// given seed reproduces the same values on every platform (the standard
/// library distributions make no such guarantee).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform on [0, 1).
  double uniform();

  /// Uniform on [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Standard normal (Box-Muller, one draw cached).
  double normal();

  /// Gamma(shape, scale), density x^{shape-1} e^{-x/scale}.
  double gamma(double shape, double scale);

  /// Inverse-gamma with density proportional to x^{-shape-1} e^{-scale/x}.
  /// A zero scale collapses to a point mass at zero.
  double inv_gamma(double shape, double scale);

  double beta(double a, double b);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// splitmix64 finalizer; used for seed mixing.
std::uint64_t mix64(std::uint64_t x);

std::uint64_t hash_part(std::string_view s);

inline std::uint64_t hash_part(std::uint64_t v) { return mix64(v + 0x9e3779b97f4a7c15ull); }

/// Derives a named substream seed from a master seed. Every stochastic
/// component draws from its own substream keyed by role strings and indices,
/// so changing one component never perturbs another.
template <class... Parts>
std::uint64_t subseed(std::uint64_t master, const Parts&... parts) {
  std::uint64_t h = mix64(master);
  auto fold = [&h](auto&& part) {
    using T = std::decay_t<decltype(part)>;
    if constexpr (std::is_integral_v<T>) {
      h = mix64(h ^ hash_part(static_cast<std::uint64_t>(part)));
    } else {
      h = mix64(h ^ hash_part(std::string_view(part)));
    }
  };
  (fold(parts), ...);
  return h;
}

}  // namespace bocs
