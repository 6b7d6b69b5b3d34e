#pragma once

#include <cstdint>
#include <string_view>

namespace mvrisk {

// Counter-based deterministic random stream. Each draw is a pure function of
// (key, counter), so a stream replays bit-exactly from its seed. Child streams
// re-key through a strong mixer: derived from (key, label) only, never from
// the parent's position, so the same label always yields the same substream.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : key_(seed) {}

  std::uint64_t seed() const { return key_; }

  RngStream child(std::string_view label) const;
  RngStream child(std::uint64_t index) const;

  std::uint64_t next_u64();

  // Uniform on the open interval (0, 1); never returns 0 or 1 exactly.
  double uniform();

  // Standard normal via inverse CDF (one uniform per draw).
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace mvrisk
