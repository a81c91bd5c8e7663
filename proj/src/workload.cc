#include "hzkv/workload.h"

#include <cmath>
#include <cstdio>

namespace hzkv {

namespace {
uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}
}  // namespace

ZipfGenerator::ZipfGenerator(double alpha, uint64_t n) : alpha_(alpha) {
  if (n < 1) n = 1;
  theta_ = alpha;
  if (std::fabs(theta_ - 1.0) < 1e-9) theta_ = 1.0 - 1e-6;  // formula pole
  n_ = n;
  zetan_ = 0;
  for (uint64_t i = 1; i <= n_; i++) zetan_ += 1.0 / std::pow(double(i), theta_);
  RecomputeDerived();
}

void ZipfGenerator::RecomputeDerived() {
  pow_half_theta_ = std::pow(0.5, theta_);
  zeta2_ = 1.0 + pow_half_theta_;
  alpha_inv_ = 1.0 / (1.0 - theta_);
  eta_ = (1.0 - std::pow(2.0 / double(n_), 1.0 - theta_)) /
         (1.0 - zeta2_ / zetan_);
}

void ZipfGenerator::Grow(uint64_t new_n) {
  if (new_n <= n_) return;
  for (uint64_t i = n_ + 1; i <= new_n; i++) {
    zetan_ += 1.0 / std::pow(double(i), theta_);
  }
  n_ = new_n;
  RecomputeDerived();
}

uint64_t ZipfGenerator::Next(Rng& rng) {
  if (n_ == 1) return 0;
  double u = rng.NextDouble();
  double uz = u * zetan_;
  if (uz < 1.0) return 0;
  if (uz < 1.0 + pow_half_theta_) return 1;
  uint64_t rank = static_cast<uint64_t>(
      double(n_) * std::pow(eta_ * u - eta_ + 1.0, alpha_inv_));
  if (rank >= n_) rank = n_ - 1;
  return rank;
}

std::string KeyForIndex(uint64_t index) {
  char buf[25];
  std::snprintf(buf, sizeof(buf), "user%020llu",
                static_cast<unsigned long long>(SplitMix64(index)));
  return std::string(buf, 24);
}

std::string ValueForIndex(uint64_t index, uint64_t salt, size_t value_size) {
  std::string value(value_size, '\0');
  uint64_t state = SplitMix64(index ^ (salt * 0x9e3779b97f4a7c15ull));
  for (size_t i = 0; i < value_size; i += 8) {
    state = SplitMix64(state);
    for (size_t j = 0; j < 8 && i + j < value_size; j++) {
      value[i + j] = static_cast<char>('a' + ((state >> (8 * j)) % 26));
    }
  }
  return value;
}

Status WorkloadSpec::Validate() const {
  int total = read_pct + update_pct + insert_pct + rmw_pct + scan_pct;
  if (total != 100) {
    return Status::ConfigError("operation percentages must sum to 100, got " +
                               std::to_string(total));
  }
  if (dist == KeyDist::kZipf && zipf_alpha < 0) {
    return Status::ConfigError("zipf alpha must be >= 0");
  }
  if (scan_len_min < 1 || scan_len_max < scan_len_min) {
    return Status::ConfigError("bad scan length range");
  }
  if (target_rate < 0) return Status::ConfigError("target rate must be >= 0");
  return Status::OK();
}

Status WorkloadSpec::Ycsb(char which, WorkloadSpec* out) {
  WorkloadSpec w;
  switch (which) {
    case 'a':
      w.read_pct = 50;
      w.update_pct = 50;
      break;
    case 'b':
      w.read_pct = 95;
      w.update_pct = 5;
      break;
    case 'c':
      w.read_pct = 100;
      break;
    case 'd':
      w.read_pct = 95;
      w.insert_pct = 5;
      w.dist = KeyDist::kLatest;
      break;
    case 'e':
      w.scan_pct = 95;
      w.insert_pct = 5;
      break;
    case 'f':
      w.read_pct = 50;
      w.rmw_pct = 50;
      break;
    default:
      return Status::ConfigError(std::string("unknown YCSB workload '") +
                                 which + "'");
  }
  *out = w;
  return Status::OK();
}

}  // namespace hzkv
