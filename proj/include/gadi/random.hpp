// Counter-based random streams.
//
// Every draw is a pure function of (key, counter), so results do not depend
// on how work is split across threads. Keys are derived by hashing a seed
// together with the indices that identify a stream.
#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

#include "gadi/core.hpp"

namespace gadi {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t stream_key(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
  std::uint64_t key = mix64(seed);
  for (std::uint64_t id : ids) key = mix64(key ^ mix64(id + 0x632be59bd9b4e019ULL));
  return key;
}

class CounterStream {
 public:
  explicit CounterStream(std::uint64_t key) : key_(key) {}

  std::uint64_t next_bits() { return mix64(key_ ^ mix64(counter_++)); }

  // Uniform on (0, 1).
  double uniform() { return (static_cast<double>(next_bits() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  // Circular complex Gaussian with E|z|^2 = variance.
  Complex complex_normal(double variance) {
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-variance * std::log(u1));
    return std::polar(radius, 2.0 * kPi * u2);
  }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace gadi
