#pragma once

// Counter-based random numbers: every draw is a pure function of
// (seed, stream, counter, draw index), so results do not depend on the order
// or the thread in which samples are produced.

#include <cstdint>

namespace sl2lab {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream,
                                     std::uint64_t counter, std::uint64_t draw) noexcept {
  std::uint64_t x = splitmix64(seed);
  x = splitmix64(x ^ splitmix64(stream ^ 0x6a09e667f3bcc909ULL));
  x = splitmix64(x ^ counter);
  return splitmix64(x ^ (draw * 0xd1b54a32d192ed03ULL));
}

/// Maps the top 53 bits to [0, 1).
constexpr double to_unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Sequential draws for one (seed, stream, counter) cell.
class CounterStream {
 public:
  constexpr CounterStream(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t counter) noexcept
      : seed_(seed), stream_(stream), counter_(counter) {}

  constexpr std::uint64_t next_u64() noexcept {
    return counter_hash(seed_, stream_, counter_, draw_++);
  }
  constexpr double uniform() noexcept { return to_unit_interval(next_u64()); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_;
  std::uint64_t draw_ = 0;
};

}  // namespace sl2lab
