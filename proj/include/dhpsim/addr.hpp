#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>

namespace dhps {

// Opaque network address, 4 or 16 bytes. No routing semantics attached.
struct Address {
  uint8_t len = 4;
  std::array<uint8_t, 16> bytes{};

  static Address v4(uint8_t a, uint8_t b, uint8_t c, uint8_t d);
  static Address parse(const std::string& text);  // dotted quad or IPv6
  std::string str() const;

  bool operator==(const Address&) const = default;
  auto operator<=>(const Address&) const = default;
};

struct ThreeTuple {
  Address src_ip;
  Address dst_ip;
  uint16_t dst_port = 0;

  bool operator==(const ThreeTuple&) const = default;
  auto operator<=>(const ThreeTuple&) const = default;
};

struct FourTuple {
  ThreeTuple tuple;
  uint16_t src_port = 0;

  bool operator==(const FourTuple&) const = default;
};

// Loopback destinations share one fixed address pair; only the port varies,
// which is what makes their hash collisions independent of the network.
ThreeTuple loopback_tuple(uint16_t dst_port);

uint64_t fnv1a64(const void* data, size_t n, uint64_t seed = 0xcbf29ce484222325ULL);

struct TupleHash {
  size_t operator()(const ThreeTuple& t) const;
};

struct FourTupleHash {
  size_t operator()(const FourTuple& t) const;
};

}  // namespace dhps
