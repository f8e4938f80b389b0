#pragma once

#include <array>
#include <cstdint>

namespace heaping {

/// Philox4x32-10 counter-based block function (Salmon et al., SC'11).
/// Maps a 128-bit counter and a 64-bit key to 128 random bits.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

/// Stream purposes. Each purpose owns a disjoint slice of the counter space.
enum class StreamTag : std::uint32_t {
  turnout = 0,
  result = 1,
  jitter_turnout = 2,
  jitter_result = 3,
  synth_station = 4,
  synth_fraud = 5,
  synth_selection = 6,
};

/// Random stream addressed by (key, tag, a, b). Two streams with the same
/// address produce the same sequence; there is no shared state, so streams
/// can be created on any thread in any order.
class RandomStream {
 public:
  RandomStream(std::uint64_t key, StreamTag tag, std::uint32_t a, std::uint32_t b);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();

 private:
  void refill();

  PhiloxKey key_;
  PhiloxCounter counter_;
  PhiloxCounter block_{};
  unsigned used_ = 4;
};

}  // namespace heaping
