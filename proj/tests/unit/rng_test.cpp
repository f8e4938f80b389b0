#include <gtest/gtest.h>

#include <set>

#include "heaping/rng.hpp"

namespace heaping {
namespace {

// Known-answer vectors from the Random123 distribution.
TEST(Philox, ZeroCounterZeroKey) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}), (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
}

TEST(Philox, AllOnes) {
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
}

TEST(Philox, PiDigits) {
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RandomStream, SameAddressSameSequence) {
  RandomStream a(42, StreamTag::turnout, 3, 9);
  RandomStream b(42, StreamTag::turnout, 3, 9);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u32(), b.next_u32());
}

TEST(RandomStream, AddressComponentsSeparateStreams) {
  std::set<std::uint64_t> firsts;
  for (auto tag : {StreamTag::turnout, StreamTag::result, StreamTag::synth_station}) {
    for (std::uint32_t a : {0u, 1u}) {
      for (std::uint32_t b : {0u, 1u}) {
        for (std::uint64_t key : {1ull, 2ull}) firsts.insert(RandomStream(key, tag, a, b).next_u64());
      }
    }
  }
  EXPECT_EQ(firsts.size(), 24u);
}

TEST(RandomStream, UniformOpenInterval) {
  RandomStream s(7, StreamTag::result, 0, 0);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.003);
}

}  // namespace
}  // namespace heaping
