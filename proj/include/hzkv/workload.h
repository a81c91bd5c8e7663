#pragma once

// YCSB-style workload generation: seeded RNG, zipfian rank generator with an
// incrementally maintained zeta (so the key space can grow), key/value
// encoding, and the six core workload mixes.

#include <cstdint>
#include <random>
#include <string>

#include "hzkv/status.h"

namespace hzkv {

class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}
  uint64_t NextU64() { return eng_(); }
  uint64_t NextU64(uint64_t bound) { return bound ? eng_() % bound : 0; }
  double NextDouble() { return (eng_() >> 11) * 0x1.0p-53; }  // [0,1)

 private:
  std::mt19937_64 eng_;
};

// P(rank k) ~ 1/(k+1)^alpha over ranks 0..n-1, using the closed-form inverse
// with zeta kept incrementally. alpha = 0 degenerates to uniform.
class ZipfGenerator {
 public:
  ZipfGenerator(double alpha, uint64_t n);

  uint64_t Next(Rng& rng);
  void Grow(uint64_t new_n);

  uint64_t n() const { return n_; }
  double alpha() const { return alpha_; }

 private:
  void RecomputeDerived();

  double alpha_ = 0;
  double theta_ = 0;
  uint64_t n_ = 1;
  double zetan_ = 0;
  double zeta2_ = 0;
  double pow_half_theta_ = 0;
  double eta_ = 0;
  double alpha_inv_ = 0;
};

// 24-byte keys; the index is scrambled so adjacent indices land in distant
// key ranges, as with YCSB's hashed insertion order.
std::string KeyForIndex(uint64_t index);
std::string ValueForIndex(uint64_t index, uint64_t salt, size_t value_size);

struct WorkloadSpec {
  uint64_t op_count = 0;
  int read_pct = 0;
  int update_pct = 0;
  int insert_pct = 0;
  int rmw_pct = 0;
  int scan_pct = 0;

  enum class KeyDist { kZipf, kLatest, kUniform };
  KeyDist dist = KeyDist::kZipf;
  double zipf_alpha = 0.9;

  int scan_len_min = 1;
  int scan_len_max = 100;
  double target_rate = 0;  // ops per simulated second; 0 = unthrottled

  Status Validate() const;

  // YCSB core mixes a-f.
  static Status Ycsb(char which, WorkloadSpec* out);
};

}  // namespace hzkv
