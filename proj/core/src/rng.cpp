#include "mvrisk/rng.hpp"

#include "mvrisk/special.hpp"

namespace mvrisk {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer (Stafford mix13): bijective, strong avalanche.
std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace

RngStream RngStream::child(std::string_view label) const {
  return RngStream(mix64(key_ ^ (fnv1a(label) * kGolden + 0x632BE59BD9B4E019ULL)));
}

RngStream RngStream::child(std::uint64_t index) const {
  return RngStream(mix64(key_ ^ mix64(index + 0xD1B54A32D192ED03ULL)));
}

std::uint64_t RngStream::next_u64() {
  counter_ += 1;
  return mix64(key_ + counter_ * kGolden);
}

double RngStream::uniform() {
  // 53-bit mantissa shifted into the cell centres of (0,1): the result is
  // never 0 or 1 exactly, which keeps logit/quantile calls in-domain.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() { return std_normal_quantile(uniform()); }

}  // namespace mvrisk
