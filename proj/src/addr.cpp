#include "dhpsim/addr.hpp"

#include <arpa/inet.h>

#include "dhpsim/errors.hpp"

namespace dhps {

Address Address::v4(uint8_t a, uint8_t b, uint8_t c, uint8_t d) {
  Address out;
  out.len = 4;
  out.bytes = {a, b, c, d};
  return out;
}

Address Address::parse(const std::string& text) {
  Address out;
  if (text.find(':') != std::string::npos) {
    out.len = 16;
    if (inet_pton(AF_INET6, text.c_str(), out.bytes.data()) != 1)
      raise(Err::config, "bad IPv6 address: " + text);
  } else {
    out.len = 4;
    if (inet_pton(AF_INET, text.c_str(), out.bytes.data()) != 1)
      raise(Err::config, "bad IPv4 address: " + text);
  }
  return out;
}

std::string Address::str() const {
  char buf[INET6_ADDRSTRLEN] = {0};
  if (len == 4)
    inet_ntop(AF_INET, bytes.data(), buf, sizeof buf);
  else
    inet_ntop(AF_INET6, bytes.data(), buf, sizeof buf);
  return buf;
}

ThreeTuple loopback_tuple(uint16_t dst_port) {
  return ThreeTuple{Address::v4(127, 0, 0, 1), Address::v4(127, 1, 2, 3), dst_port};
}

uint64_t fnv1a64(const void* data, size_t n, uint64_t seed) {
  uint64_t h = seed;
  const auto* p = static_cast<const uint8_t*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

size_t TupleHash::operator()(const ThreeTuple& t) const {
  uint64_t h = fnv1a64(&t.src_ip.len, 1);
  h = fnv1a64(t.src_ip.bytes.data(), t.src_ip.len, h);
  h = fnv1a64(t.dst_ip.bytes.data(), t.dst_ip.len, h);
  h = fnv1a64(&t.dst_port, 2, h);
  return (size_t)h;
}

size_t FourTupleHash::operator()(const FourTuple& t) const {
  uint64_t h = TupleHash{}(t.tuple);
  h = fnv1a64(&t.src_port, 2, h);
  return (size_t)h;
}

}  // namespace dhps
