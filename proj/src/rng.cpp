#include "bandit/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bandit {

namespace {

std::uint64_t mix(std::uint64_t v) {
  std::uint64_t z = v + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint32_t rotr32(std::uint32_t x, unsigned r) {
  return (x >> r) | (x << ((32u - r) & 31u));
}

}  // namespace

RngStream::RngStream(std::uint64_t masterSeed, std::uint64_t streamId,
                     std::uint64_t substream)
    : master_(masterSeed), stream_(streamId) {
  std::uint64_t key = mix(mix(mix(masterSeed) ^ streamId) ^ substream);
  std::uint64_t seq = mix(key);
  state_ = 0;
  inc_ = (seq << 1) | 1ULL;
  nextU32();
  state_ += key;
  nextU32();
}

std::uint32_t RngStream::nextU32() {
  std::uint64_t old = state_;
  state_ = old * 6364136223846793005ULL + inc_;
  auto xorshifted = static_cast<std::uint32_t>(((old >> 18) ^ old) >> 27);
  auto rot = static_cast<unsigned>(old >> 59);
  return rotr32(xorshifted, rot);
}

std::uint64_t RngStream::nextU64() {
  std::uint64_t hi = nextU32();
  std::uint64_t lo = nextU32();
  return (hi << 32) | lo;
}

double RngStream::uniform01() {
  return static_cast<double>(nextU64() >> 11) * 0x1.0p-53;
}

double RngStream::uniformIn(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

std::size_t RngStream::uniformIndex(std::size_t n) {
  if (n == 0) throw std::domain_error("uniformIndex: n must be positive");
  if (n > 0xFFFFFFFFULL) throw std::domain_error("uniformIndex: n too large");
  auto bound = static_cast<std::uint32_t>(n);
  std::uint32_t threshold = (-bound) % bound;  // 2^32 mod n
  for (;;) {
    std::uint32_t r = nextU32();
    if (r >= threshold) return r % bound;
  }
}

bool RngStream::bernoulli(double p) { return uniform01() < p; }

double RngStream::gaussian() {
  double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
  double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double RngStream::gaussian(double mu, double sigma) {
  return mu + sigma * gaussian();
}

double RngStream::gamma(double shape) {
  if (!(shape > 0.0)) throw std::domain_error("gamma: shape must be positive");
  if (shape < 1.0) {
    double u = 1.0 - uniform01();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = gaussian();
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = 1.0 - uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RngStream::beta(double a, double b) {
  double x = gamma(a);
  double y = gamma(b);
  double s = x + y;
  if (s <= 0.0) return a / (a + b);  // both draws underflowed
  return x / s;
}

RngStream RngStream::substream(std::uint64_t k) const {
  return RngStream(master_, stream_, k);
}

}  // namespace bandit
