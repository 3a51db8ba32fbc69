#pragma once

#include <cstddef>
#include <cstdint>

namespace bandit {

// Seeded random stream with an exact cross-language specification.
//
// Generator: PCG32 (XSH-RR 64/32, O'Neill).
//   state' = state * 6364136223846793005 + inc          (mod 2^64)
//   out    = rotr32(uint32(((state >> 18) ^ state) >> 27), state >> 59)
// where `state` is the pre-advance value and inc is odd.
//
// Seeding from (masterSeed, streamId, substream):
//   key = mix(mix(mix(masterSeed) ^ streamId) ^ substream)
//   seq = mix(key)
//   state = 0; inc = (seq << 1) | 1; nextU32(); state += key; nextU32();
// with mix(v) the SplitMix64 output function:
//   z = v + 0x9E3779B97F4A7C15
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   mix = z ^ (z >> 31)
//
// Derived quantities (all fully determined by the u32 sequence):
//   nextU64    = (u32 << 32) | u32        (high word drawn first)
//   uniform01  = (nextU64 >> 11) * 2^-53  in [0, 1)
//   uniformIndex(n): rejection on r = nextU32 until r >= 2^32 mod n, return r mod n
//   gaussian   = sqrt(-2 ln(1 - u1)) * cos(2 pi u2), one value per call
//   gamma      = Marsaglia-Tsang squeeze (shape >= 1), boost by u^(1/a) below 1
//   beta(a,b)  = X / (X + Y), X ~ gamma(a), Y ~ gamma(b)
class RngStream {
 public:
  RngStream(std::uint64_t masterSeed, std::uint64_t streamId,
            std::uint64_t substream = 0);

  std::uint32_t nextU32();
  std::uint64_t nextU64();

  double uniform01();                        // [0, 1), 53-bit resolution
  double uniformIn(double lo, double hi);    // [lo, hi)
  std::size_t uniformIndex(std::size_t n);   // {0, ..., n-1}, unbiased
  bool bernoulli(double p);
  double gaussian();
  double gaussian(double mu, double sigma);
  double gamma(double shape);                // scale 1
  double beta(double a, double b);

  // Independent stream keyed by (masterSeed, streamId, k). Draw counts on
  // the parent do not affect it, so components can own their own substream.
  RngStream substream(std::uint64_t k) const;

  std::uint64_t masterSeed() const { return master_; }
  std::uint64_t streamId() const { return stream_; }

 private:
  std::uint64_t state_;
  std::uint64_t inc_;
  std::uint64_t master_;
  std::uint64_t stream_;
};

}  // namespace bandit
