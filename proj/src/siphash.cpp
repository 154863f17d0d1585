#include "dhpsim/siphash.hpp"

namespace dhps {

namespace {

inline uint64_t rotl(uint64_t x, int b) { return (x << b) | (x >> (64 - b)); }

inline uint64_t load_le64(const uint8_t* p) {
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

#define SIPROUND          \
  do {                    \
    v0 += v1;             \
    v1 = rotl(v1, 13);    \
    v1 ^= v0;             \
    v0 = rotl(v0, 32);    \
    v2 += v3;             \
    v3 = rotl(v3, 16);    \
    v3 ^= v2;             \
    v0 += v3;             \
    v3 = rotl(v3, 21);    \
    v3 ^= v0;             \
    v2 += v1;             \
    v1 = rotl(v1, 17);    \
    v1 ^= v2;             \
    v2 = rotl(v2, 32);    \
  } while (0)

}  // namespace

uint64_t siphash24(const Key128& key, const uint8_t* data, size_t len) {
  uint64_t v0 = 0x736f6d6570736575ULL ^ key.lo;
  uint64_t v1 = 0x646f72616e646f6dULL ^ key.hi;
  uint64_t v2 = 0x6c7967656e657261ULL ^ key.lo;
  uint64_t v3 = 0x7465646279746573ULL ^ key.hi;

  const size_t tail = len & 7;
  const uint8_t* end = data + (len - tail);
  for (const uint8_t* p = data; p != end; p += 8) {
    const uint64_t m = load_le64(p);
    v3 ^= m;
    SIPROUND;
    SIPROUND;
    v0 ^= m;
  }

  uint64_t last = (uint64_t)(len & 0xff) << 56;
  for (size_t i = 0; i < tail; ++i) last |= (uint64_t)end[i] << (8 * i);
  v3 ^= last;
  SIPROUND;
  SIPROUND;
  v0 ^= last;

  v2 ^= 0xff;
  SIPROUND;
  SIPROUND;
  SIPROUND;
  SIPROUND;
  return v0 ^ v1 ^ v2 ^ v3;
}

}  // namespace dhps
