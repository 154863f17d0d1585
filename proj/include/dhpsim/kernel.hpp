#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "dhpsim/addr.hpp"
#include "dhpsim/rng.hpp"
#include "dhpsim/siphash.hpp"

namespace dhps {

enum class NoiseMode {
  none,                 // counter advances by increment_step only
  linux_1_16,           // extra increment after a first-candidate success, p = 1/16
  patched_uniform_1_8,  // every increment drawn uniformly from [1, 8]
};

struct KernelConfig {
  uint32_t table_size = 256;
  uint16_t min_ephemeral = 32768;
  uint16_t max_ephemeral = 60999;
  uint32_t increment_step = 1;  // 2 mimics the kernel exactly; immaterial to behavior
  NoiseMode noise = NoiseMode::none;
  uint64_t rekey_interval = 0;  // connect calls between key changes; 0 = never
  Key128 key_k1{};              // all-zero keys are derived from the seed
  Key128 key_k2{};

  uint32_t num_ephemeral() const { return (uint32_t)max_ephemeral - min_ephemeral + 1; }
  void validate() const;
};

// Keyed PRFs of the 3-tuple. Domain-separated members of one hash family;
// the attack does not depend on the particular choice.
uint32_t prf_offset(const Key128& k1, const ThreeTuple& t);
uint32_t prf_index(const Key128& k2, const ThreeTuple& t, uint32_t table_size);

// Source-port selection state of one simulated device. Single logical thread;
// may be moved across threads but never shared mutably.
class Kernel {
 public:
  Kernel(KernelConfig cfg, uint64_t seed);

  // Pick a source port for t: offset by hash, advance the shared counter cell,
  // retry while the candidate four-tuple is taken. Registers the result as
  // in use. Throws Err::port_exhausted when all candidates fail.
  uint16_t connect(const ThreeTuple& t);

  bool check_suitable(const ThreeTuple& t, uint16_t port) const;
  void release(const ThreeTuple& t, uint16_t port);
  void rekey();

  uint64_t connect_count() const { return connect_count_; }
  const KernelConfig& config() const { return cfg_; }

  // Instrumentation for harnesses, reports and tests. Attack logic never
  // touches these: everything it learns must come from observed ports.
  uint32_t cell_of(const ThreeTuple& t) const { return prf_index(k2_, t, cfg_.table_size); }
  uint64_t cell_value(uint32_t index) const { return table_.at(index); }
  std::vector<uint64_t> table_snapshot() const { return table_; }
  void inject_increments(uint32_t index, uint64_t amount) { table_.at(index) += amount; }
  const Key128& key_k2() const { return k2_; }

 private:
  uint64_t draw_increment();

  KernelConfig cfg_;
  Key128 k1_, k2_;
  std::vector<uint64_t> table_;
  std::unordered_set<FourTuple, FourTupleHash> in_use_;
  Rng rng_;
  uint64_t connect_count_ = 0;
};

// Random-increments selection, the counter-based alternative scheme:
// one global counter advanced by a uniform draw in [1, N] per connect.
uint16_t alg5_next_port(uint64_t& counter, uint32_t N, Rng& rng, uint16_t min_ephemeral,
                        uint32_t num_ephemeral);

}  // namespace dhps
