#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace dhps::analysis {

// Distribution of the number of empty bins after l uniform throws into T
// bins. Evaluated from the alternating-sum formula in exact integer
// arithmetic: the sum cancels catastrophically in floating point at the
// sizes used here, while the integer value (a surjection count) is exact.
std::vector<double> occupancy_pmf(uint32_t T, uint32_t l);
double occupancy_prob(uint32_t T, uint32_t l, int64_t empty_bins);

struct MuRPmf {
  // marginals[s][k] = P(exactly k bins hold exactly s balls), for every s <= r
  std::vector<std::vector<double>> marginals;
  uint64_t states = 0;
  uint64_t ops = 0;  // branch visits: exactly l * (r + 2) * states
};

// Dynamic program over occupancy classes (i_0, ..., i_r) = number of bins
// holding 0..r balls. Cross-checks the closed form and provides the r >= 1
// distributions that have no closed form. Throws Err::state_too_large when
// the class count C(T+r+1, r+1) exceeds state_cap.
MuRPmf mu_r_pmf(uint32_t T, uint32_t l, uint32_t r, uint64_t state_cap = 8000000);

// Expected number of newly covered unique cells when probing k fresh
// destinations while n of T cells are already covered.
double expected_new_unique(uint32_t T, uint32_t n, uint32_t k);

struct Phase1Dist {
  std::vector<double> stop_pmf;  // index = iteration count; [0] and [1] are 0 for T > 1
  double expected_iters = 0;
};

// Exact distribution of the number of cell-discovery iterations: iterate the
// coverage-transition matrix built from the singles distribution mu_1(T-1)
// and the batch placement probabilities.
Phase1Dist phase1_stop_distribution(uint32_t T);

// Probability that a device with a random key reproduces a given collision
// outcome: l loopback probes ending with n independent collision pairs.
double pld(uint32_t T, uint32_t l, uint32_t n);

// Acceptance threshold for a population: c_star expected ID collisions
// across binom(population, 2) device pairs.
double pstar_for_population(double population, double c_star = 1.0);

constexpr uint32_t kNstarInf = 0xffffffffu;

struct Phase2Tables {
  uint32_t T = 0;
  double p_star = 0;
  uint32_t l_min = 0;
  uint32_t l_max = 0;
  std::vector<uint32_t> nstar;  // index l; kNstarInf below l_min

  // clamped lookup: infinity below l_min, 0 at and beyond l_max
  uint32_t nstar_at(uint32_t l) const;
};

// Minimal independent-pair counts n*_l for which pld(T, l, n) <= p_star,
// for l in [l_min, l_max]. Throws Err::no_solution in the small-T regime
// (see low_T_check / low_T_special_case).
Phase2Tables nstar_table(uint32_t T, double p_star);

struct Phase2Dist {
  std::vector<double> stop_pmf;                   // index l
  std::vector<std::map<uint32_t, double>> joint;  // joint[l][n]
  double expected_l = 0;
  double c_over_cstar = 0;  // realized / allowed average collision count
};

// Distribution of the termination step of the collision-collecting phase,
// split by final pair count, plus the realized population collision rate.
Phase2Dist phase2_stop_distribution(uint32_t T, const Phase2Tables& tables);

struct LowTCheck {
  bool adequate = false;
  uint32_t minimal_T = 0;
};

// Checks T - (1 + ln(T)/2) sqrt(T) - ln(T)/4 >= -ln(p_star), the validity
// condition of the termination analysis, and reports the minimal adequate T.
LowTCheck low_T_check(uint32_t T, double p_star);

// Loopback count that meets p_star in the two-cell regime (T = 2), where
// every probe after the first contributes one bit.
uint32_t low_T_special_case(double p_star);

struct Alg5Bound {
  int64_t max_N = 0;          // largest valid random-increment bound
  double range_bits = 0;      // log2 of the port range
  double effective_bits = 0;  // log2 of max_N
};

// Largest N such that a counter advancing by avg (N+1)/2 per connect at
// `connects_per_second` does not wrap the port range within 2*MSL seconds.
Alg5Bound alg5_bound(double msl_seconds, double connects_per_second, uint32_t port_range);

}  // namespace dhps::analysis
