#include "dhpsim/kernel.hpp"

#include "dhpsim/errors.hpp"

namespace dhps {

namespace {

// Serialized 3-tuple with a domain-separation tag so the offset and index
// hashes are independent functions even under related keys.
size_t pack_tuple(uint8_t tag, const ThreeTuple& t, uint8_t out[40]) {
  size_t n = 0;
  out[n++] = tag;
  out[n++] = t.src_ip.len;
  for (int i = 0; i < t.src_ip.len; ++i) out[n++] = t.src_ip.bytes[i];
  out[n++] = t.dst_ip.len;
  for (int i = 0; i < t.dst_ip.len; ++i) out[n++] = t.dst_ip.bytes[i];
  out[n++] = (uint8_t)(t.dst_port & 0xff);
  out[n++] = (uint8_t)(t.dst_port >> 8);
  return n;
}

}  // namespace

void KernelConfig::validate() const {
  if (table_size < 2) raise(Err::config, "table_size must be >= 2");
  if (min_ephemeral > max_ephemeral) raise(Err::config, "min_ephemeral > max_ephemeral");
  if (increment_step == 0) raise(Err::config, "increment_step must be positive");
}

uint32_t prf_offset(const Key128& k1, const ThreeTuple& t) {
  uint8_t buf[40];
  const size_t n = pack_tuple(0x4f, t, buf);
  return (uint32_t)siphash24(k1, buf, n);
}

uint32_t prf_index(const Key128& k2, const ThreeTuple& t, uint32_t table_size) {
  uint8_t buf[40];
  const size_t n = pack_tuple(0x49, t, buf);
  return (uint32_t)(siphash24(k2, buf, n) % table_size);
}

Kernel::Kernel(KernelConfig cfg, uint64_t seed)
    : cfg_(cfg), table_(cfg.table_size, 0), rng_(derive_seed(seed, 0x6b72)) {
  cfg_.validate();
  uint64_t sm = derive_seed(seed, 0x6b65);
  k1_ = cfg_.key_k1.is_zero() ? Key128{splitmix64(sm), splitmix64(sm)} : cfg_.key_k1;
  k2_ = cfg_.key_k2.is_zero() ? Key128{splitmix64(sm), splitmix64(sm)} : cfg_.key_k2;
}

uint64_t Kernel::draw_increment() {
  if (cfg_.noise == NoiseMode::patched_uniform_1_8) return rng_.between(1, 8);
  return cfg_.increment_step;
}

uint16_t Kernel::connect(const ThreeTuple& t) {
  const uint32_t rho = cfg_.num_ephemeral();
  const uint64_t offset = prf_offset(k1_, t);
  const uint32_t index = prf_index(k2_, t, cfg_.table_size);

  for (uint32_t tries = 0; tries < rho; ++tries) {
    const auto port = (uint16_t)(cfg_.min_ephemeral + (offset + table_[index]) % rho);
    table_[index] += draw_increment();
    if (check_suitable(t, port)) {
      if (tries == 0 && cfg_.noise == NoiseMode::linux_1_16 && rng_.chance(1.0 / 16.0))
        table_[index] += cfg_.increment_step;
      in_use_.insert(FourTuple{t, port});
      ++connect_count_;
      if (cfg_.rekey_interval > 0 && connect_count_ % cfg_.rekey_interval == 0) rekey();
      return port;
    }
  }
  raise(Err::port_exhausted, "no suitable source port for dst " + t.dst_ip.str() + ":" +
                                 std::to_string(t.dst_port));
}

bool Kernel::check_suitable(const ThreeTuple& t, uint16_t port) const {
  if (port < cfg_.min_ephemeral || port > cfg_.max_ephemeral)
    raise(Err::precondition, "port outside ephemeral range");
  return !in_use_.contains(FourTuple{t, port});
}

void Kernel::release(const ThreeTuple& t, uint16_t port) { in_use_.erase(FourTuple{t, port}); }

void Kernel::rekey() {
  k1_ = Key128{rng_.next(), rng_.next()};
  k2_ = Key128{rng_.next(), rng_.next()};
  // Counters stay: they are opaque offsets added to a fresh hash, so clearing
  // them would be unobservable. Previously used four-tuples become suitable
  // again, mirroring the connectivity trade-off of changing keys.
  in_use_.clear();
}

uint16_t alg5_next_port(uint64_t& counter, uint32_t N, Rng& rng, uint16_t min_ephemeral,
                        uint32_t num_ephemeral) {
  if (N < 1) raise(Err::config, "N must be >= 1");
  counter += rng.between(1, N);
  return (uint16_t)(min_ephemeral + counter % num_ephemeral);
}

}  // namespace dhps
