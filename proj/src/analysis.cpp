#include "dhpsim/analysis.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "dhpsim/errors.hpp"

namespace dhps::analysis {

namespace {

mpz_class binom(uint32_t n, uint32_t k) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

// exact count of surjections of l balls onto m labeled bins
mpz_class surjections(uint32_t m, uint32_t l, const std::vector<mpz_class>& pw) {
  mpz_class s = 0;
  for (uint32_t i = 0; i <= m; ++i) {
    mpz_class term = binom(m, i) * pw[m - i];
    if (i & 1)
      s -= term;
    else
      s += term;
  }
  return s;
}

std::vector<mpz_class> power_table(uint32_t T, uint32_t l) {
  std::vector<mpz_class> pw(T + 1);
  for (uint32_t j = 0; j <= T; ++j) mpz_ui_pow_ui(pw[j].get_mpz_t(), j, l);
  return pw;
}

// occupancy rows are shared across table computations; keyed by (T, l)
std::mutex occ_mu;
std::map<std::pair<uint32_t, uint32_t>, std::vector<double>> occ_cache;

}  // namespace

std::vector<double> occupancy_pmf(uint32_t T, uint32_t l) {
  if (T < 1) raise(Err::config, "T must be >= 1");
  {
    std::lock_guard lk(occ_mu);
    auto it = occ_cache.find({T, l});
    if (it != occ_cache.end()) return it->second;
  }
  const auto pw = power_table(T, l);
  const mpz_class denom = pw[T];
  std::vector<double> out(T + 1, 0.0);
  for (uint32_t k = 0; k <= T; ++k) {
    const mpz_class num = binom(T, k) * surjections(T - k, l, pw);
    if (num != 0) out[k] = mpq_class(num, denom).get_d();
  }
  std::lock_guard lk(occ_mu);
  occ_cache.insert({{T, l}, out});
  return out;
}

double occupancy_prob(uint32_t T, uint32_t l, int64_t empty_bins) {
  if (empty_bins < 0 || empty_bins > T) return 0.0;
  return occupancy_pmf(T, l)[(size_t)empty_bins];
}

namespace {

// lexicographic rank of an occupancy class among tuples of the same length
// with sum <= budget; counts(len, budget) = C(budget + len, len)
struct ClassIndex {
  uint32_t T, r;
  std::vector<std::vector<uint64_t>> counts;  // counts[len][budget]

  ClassIndex(uint32_t T_, uint32_t r_) : T(T_), r(r_) {
    // counts[len][b] = C(b + len, len), built by Pascal recurrence with
    // saturation so an oversized request fails the cap check instead of
    // wrapping around
    constexpr uint64_t kSat = 1ULL << 62;
    counts.assign(r + 2, std::vector<uint64_t>(T + 1, 1));
    for (uint32_t len = 1; len <= r + 1; ++len) {
      counts[len][0] = 1;
      for (uint32_t b = 1; b <= T; ++b) {
        const uint64_t a = counts[len][b - 1], c = counts[len - 1][b];
        counts[len][b] = (a > kSat - c) ? kSat : a + c;
      }
    }
  }

  uint64_t total() const { return counts[r + 1][T]; }

  uint64_t rank(const uint16_t* v) const {
    uint64_t idx = 0;
    uint32_t budget = T;
    for (uint32_t p = 0; p <= r; ++p) {
      const uint32_t rest = r - p;
      for (uint32_t x = 0; x < v[p]; ++x) idx += counts[rest][budget - x];
      budget -= v[p];
    }
    return idx;
  }
};

}  // namespace

MuRPmf mu_r_pmf(uint32_t T, uint32_t l, uint32_t r, uint64_t state_cap) {
  if (T < 1) raise(Err::config, "T must be >= 1");
  const ClassIndex ci(T, r);
  const uint64_t S = ci.total();
  if (S > state_cap)
    raise(Err::state_too_large, "occupancy classes " + std::to_string(S) + " exceed cap " +
                                    std::to_string(state_cap));

  // enumerate classes in the rank order
  const uint32_t width = r + 1;
  std::vector<uint16_t> vals((size_t)S * width, 0);
  std::vector<uint16_t> sums(S, 0);
  {
    std::vector<uint16_t> cur(width, 0);
    uint64_t at = 0;
    while (true) {
      uint16_t sum = 0;
      for (uint32_t p = 0; p < width; ++p) sum += cur[p];
      std::copy(cur.begin(), cur.end(), vals.begin() + (size_t)at * width);
      sums[at] = sum;
      ++at;
      // odometer: advance the last position that still has budget
      int p = (int)width - 1;
      while (p >= 0) {
        ++cur[p];
        uint16_t s2 = 0;
        for (uint32_t q = 0; q < width; ++q) s2 += cur[q];
        if (s2 <= T) break;
        cur[p] = 0;
        --p;
      }
      if (p < 0) break;
    }
    if (at != S) raise(Err::state_too_large, "class enumeration mismatch");
  }

  // transition targets: ball lands in a bin currently holding j balls
  std::vector<uint32_t> tgt((size_t)S * width);
  {
    std::vector<uint16_t> tmp(width);
    for (uint64_t s = 0; s < S; ++s) {
      const uint16_t* v = &vals[(size_t)s * width];
      for (uint32_t j = 0; j < width; ++j) {
        if (v[j] == 0) {
          tgt[(size_t)s * width + j] = (uint32_t)s;  // unused when v[j] == 0
          continue;
        }
        std::copy(v, v + width, tmp.begin());
        tmp[j] -= 1;
        if (j + 1 < width) tmp[j + 1] += 1;  // else the bin leaves tracking
        tgt[(size_t)s * width + j] = (uint32_t)ci.rank(tmp.data());
      }
    }
  }

  std::vector<long double> cur(S, 0.0L), nxt(S, 0.0L);
  {
    std::vector<uint16_t> start(width, 0);
    start[0] = (uint16_t)T;
    cur[ci.rank(start.data())] = 1.0L;
  }

  MuRPmf out;
  out.states = S;
  const long double invT = 1.0L / T;
  for (uint32_t step = 0; step < l; ++step) {
    std::fill(nxt.begin(), nxt.end(), 0.0L);
    for (uint64_t s = 0; s < S; ++s) {
      out.ops += width + 1;
      const long double p = cur[s];
      if (p == 0.0L) continue;
      const uint16_t* v = &vals[(size_t)s * width];
      nxt[s] += p * (long double)(T - sums[s]) * invT;
      for (uint32_t j = 0; j < width; ++j)
        if (v[j] != 0) nxt[tgt[(size_t)s * width + j]] += p * (long double)v[j] * invT;
    }
    cur.swap(nxt);
  }

  out.marginals.assign(width, std::vector<double>(T + 1, 0.0));
  for (uint64_t s = 0; s < S; ++s) {
    if (cur[s] == 0.0L) continue;
    const uint16_t* v = &vals[(size_t)s * width];
    for (uint32_t j = 0; j < width; ++j) out.marginals[j][v[j]] += (double)cur[s];
  }
  return out;
}

double expected_new_unique(uint32_t T, uint32_t n, uint32_t k) {
  if (n > T) raise(Err::config, "covered cells exceed T");
  if (k == 0) return 0.0;
  const long double frac = (long double)(T - n) / T;
  return (double)(frac * k * powl(1.0L - 1.0L / T, (long double)k - 1));
}

Phase1Dist phase1_stop_distribution(uint32_t T) {
  if (T < 2) raise(Err::config, "T must be >= 2");
  const auto mu = mu_r_pmf(T, T - 1, 1);
  const auto& P = mu.marginals[1];  // singles count of one fresh batch

  std::vector<long double> lf(T + 1);  // lf[n] = ln(n!)
  lf[0] = 0.0L;
  for (uint32_t n = 1; n <= T; ++n) lf[n] = lf[n - 1] + logl((long double)n);

  // A[i][j]: probability that coverage grows from j to i cells in one batch.
  // Batch placement factor, evaluated in log space to dodge underflow:
  //   p_ijk = C(k, i-j) * (T-j)!/(T-i)! * j!/(i-k)! * (T-k)!/T!
  const uint32_t W = T + 1;
  std::vector<long double> A((size_t)W * W, 0.0L);
  for (uint32_t j = 0; j < T; ++j) {
    for (uint32_t i = j; i <= T; ++i) {
      long double acc = 0.0L;
      const uint32_t klo = i - j;
      const uint32_t khi = std::min(i, T - 1);
      for (uint32_t k = klo; k <= khi; ++k) {
        const auto pk = (long double)P[k];
        if (pk == 0.0L) continue;
        const long double lnc = lf[k] - lf[i - j] - lf[k - (i - j)];
        const long double lnp = lnc + (lf[T - j] - lf[T - i]) + (lf[j] - lf[i - k]) +
                                (lf[T - k] - lf[T]);
        acc += pk * expl(lnp);
      }
      A[(size_t)i * W + j] = acc;
    }
  }

  Phase1Dist out;
  out.stop_pmf.assign(2, 0.0);
  std::vector<long double> p(W, 0.0L), pn(W, 0.0L);
  for (uint32_t i = 0; i <= T; ++i) p[i] = (long double)P[i];
  long double expected = (long double)p[T];  // l = 1 mass (zero for any T >= 2)
  out.stop_pmf[1] = (double)p[T];
  p[T] = 0.0L;  // absorbed mass leaves the system

  long double survival = 1.0L - (long double)out.stop_pmf[1];
  uint32_t l = 1;
  while (survival > 1e-16L && l < 100000) {
    ++l;
    std::fill(pn.begin(), pn.end(), 0.0L);
    for (uint32_t i = 0; i <= T; ++i) {
      long double acc = 0.0L;
      const uint32_t jhi = std::min(i, T - 1);
      const long double* row = &A[(size_t)i * W];
      for (uint32_t j = 0; j <= jhi; ++j) acc += row[j] * p[j];
      pn[i] = acc;
    }
    out.stop_pmf.push_back((double)pn[T]);
    expected += (long double)l * pn[T];
    pn[T] = 0.0L;
    survival = 0.0L;
    for (uint32_t i = 0; i < T; ++i) survival += pn[i];
    p.swap(pn);
  }
  out.expected_iters = (double)expected;
  return out;
}

double pld(uint32_t T, uint32_t l, uint32_t n) {
  if (l < 1) return 0.0;
  if (n > l - 1) return 0.0;
  if (l - n > T) return 0.0;
  long double v = 1.0L;
  for (uint32_t i = 0; i + n + 1 <= l; ++i) v *= 1.0L - (long double)i / T;
  for (uint32_t i = 0; i < n; ++i) v /= (long double)T;
  return (double)v;
}

double pstar_for_population(double population, double c_star) {
  if (population < 2) raise(Err::config, "population must be >= 2");
  const long double pairs = (long double)population * (population - 1) / 2.0L;
  return (double)((long double)c_star / pairs);
}

uint32_t Phase2Tables::nstar_at(uint32_t l) const {
  if (l < l_min) return kNstarInf;
  if (l >= l_max) return 0;
  return nstar[l];
}

Phase2Tables nstar_table(uint32_t T, double p_star) {
  if (p_star <= 0.0 || p_star > 1.0) raise(Err::config, "p_star must be in (0, 1]");
  const auto lstar = (uint32_t)(T - std::sqrt((double)T)) + 1;
  if (pld(T, lstar, 0) > p_star)
    raise(Err::no_solution,
          "termination analysis needs a larger table for this p_star (see low_T_check)");

  Phase2Tables out;
  out.T = T;
  out.p_star = p_star;

  uint32_t l_min = 1;
  while (pld(T, l_min, l_min - 1) > p_star) ++l_min;
  out.l_min = l_min;

  // smallest l with pld(T, l, 0) <= p_star
  uint32_t lo = l_min, hi = lstar;
  while (lo < hi) {
    const uint32_t mid = (lo + hi) / 2;
    if (pld(T, mid, 0) <= p_star)
      hi = mid;
    else
      lo = mid + 1;
  }
  out.l_max = lo;

  const auto n_ub = (uint32_t)std::ceil(-std::log(p_star) / std::log((double)T));
  out.nstar.assign(out.l_max + 1, kNstarInf);
  for (uint32_t l = out.l_min; l <= out.l_max; ++l) {
    uint32_t a = 0, b = std::min(n_ub, l - 1);
    while (a < b) {
      const uint32_t mid = (a + b) / 2;
      if (pld(T, l, mid) <= p_star)
        b = mid;
      else
        a = mid + 1;
    }
    out.nstar[l] = a;
  }

  // theorem checks: monotone non-increasing in unit steps, pinned endpoints
  if (out.nstar[out.l_min] != out.l_min - 1) throw std::logic_error("nstar: bad l_min entry");
  if (out.nstar[out.l_max] != 0) throw std::logic_error("nstar: bad l_max entry");
  for (uint32_t l = out.l_min + 1; l <= out.l_max; ++l) {
    const uint32_t d = out.nstar[l - 1] - out.nstar[l];
    if (out.nstar[l - 1] < out.nstar[l] || d > 1) throw std::logic_error("nstar: not stepwise");
  }
  return out;
}

Phase2Dist phase2_stop_distribution(uint32_t T, const Phase2Tables& tables) {
  Phase2Dist out;
  out.stop_pmf.assign(tables.l_max + 1, 0.0);
  out.joint.assign(tables.l_max + 1, {});

  // p_l(n) = P(exactly n independent collisions after l throws)
  //        = P(T + n - l bins empty)
  const auto pl = [&](uint32_t l, int64_t n) -> long double {
    if (n < 0) return 0.0L;
    return (long double)occupancy_prob(T, l, (int64_t)T + n - l);
  };

  long double expected = 0.0L, cbar = 0.0L;
  for (uint32_t l = tables.l_min; l <= tables.l_max; ++l) {
    const uint32_t ns = tables.nstar_at(l);
    long double mass = 0.0L;
    if (l == tables.l_min) {
      // previous round must already hold l-2 pairs and the probe must collide
      mass = pl(l - 1, (int64_t)l - 2) / T;
      out.joint[l][ns] = (double)mass;
    } else {
      const uint32_t prev = tables.nstar_at(l - 1);
      if (prev == ns) {
        const long double hit = (long double)((l - 1) - (prev - 1)) / T;
        mass = pl(l - 1, (int64_t)prev - 1) * hit;
        out.joint[l][ns] = (double)mass;
      } else {
        // prev == ns + 1: the bar drops by one between rounds
        const long double at_prev1 = pl(l - 1, (int64_t)prev - 1);
        const long double hit1 = (long double)((l - 1) - (prev - 1)) / T;
        const long double at_prev2 = pl(l - 1, (int64_t)prev - 2);
        const long double hit2 = (long double)((l - 1) - (prev - 2)) / T;
        mass = at_prev1 + at_prev2 * hit2;
        out.joint[l][ns + 1] = (double)(at_prev1 * hit1);
        out.joint[l][ns] = (double)(at_prev1 * (1.0L - hit1) + at_prev2 * hit2);
      }
    }
    out.stop_pmf[l] = (double)mass;
    expected += (long double)l * mass;
    for (const auto& [n, q] : out.joint[l]) cbar += (long double)q * pld(T, l, n);
  }
  out.expected_l = (double)expected;
  out.c_over_cstar = (double)(cbar / (long double)tables.p_star);
  return out;
}

LowTCheck low_T_check(uint32_t T, double p_star) {
  const auto margin = [](double t) {
    return t - (1.0 + 0.5 * std::log(t)) * std::sqrt(t) - 0.25 * std::log(t);
  };
  const double need = -std::log(p_star);
  LowTCheck out;
  out.adequate = margin((double)T) >= need;
  uint32_t t = 2;
  while (margin((double)t) < need && t < (1u << 24)) ++t;
  out.minimal_T = t;
  return out;
}

uint32_t low_T_special_case(double p_star) {
  if (p_star <= 0.0 || p_star >= 1.0) raise(Err::config, "p_star must be in (0, 1)");
  return (uint32_t)std::ceil(-std::log2(p_star)) + 1;
}

Alg5Bound alg5_bound(double msl_seconds, double connects_per_second, uint32_t port_range) {
  if (msl_seconds <= 0 || connects_per_second <= 0 || port_range == 0)
    raise(Err::config, "alg5_bound arguments must be positive");
  // wrap safety: MSL * (N + 1) * rate < range
  const long double x = (long double)port_range / ((long double)msl_seconds * connects_per_second);
  auto m = (int64_t)floorl(x);
  if ((long double)m >= x) m -= 1;  // need strictly below
  Alg5Bound out;
  out.max_N = std::max<int64_t>(m - 1, 0);
  out.range_bits = std::log2((double)port_range);
  out.effective_bits = out.max_N > 0 ? std::log2((double)out.max_N) : 0.0;
  return out;
}

}  // namespace dhps::analysis
