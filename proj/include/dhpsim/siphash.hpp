#pragma once

#include <cstddef>
#include <cstdint>

namespace dhps {

struct Key128 {
  uint64_t lo = 0;
  uint64_t hi = 0;

  bool is_zero() const { return lo == 0 && hi == 0; }
  bool operator==(const Key128&) const = default;
};

// SipHash-2-4 over an arbitrary byte message.
uint64_t siphash24(const Key128& key, const uint8_t* data, size_t len);

}  // namespace dhps
