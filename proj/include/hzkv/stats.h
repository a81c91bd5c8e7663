#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hzkv/device.h"
#include "hzkv/event_loop.h"

namespace hzkv {

inline size_t DevIdx(DeviceKind k) { return static_cast<size_t>(k); }

// Byte counters by traffic category, split per device. The per-category sums
// must equal the raw device counters (checked by the harness).
struct TrafficStats {
  std::array<uint64_t, 2> wal_write{0, 0};
  std::map<int, std::array<uint64_t, 2>> sst_write;  // by level
  std::array<uint64_t, 2> migration_write{0, 0};
  uint64_t cache_admit_write = 0;  // cache zones live on the SSD

  std::array<uint64_t, 2> data_block_read{0, 0};  // get/scan path
  std::array<uint64_t, 2> compaction_read{0, 0};
  std::array<uint64_t, 2> migration_read{0, 0};

  void AddSstWrite(int level, DeviceKind dev, uint64_t bytes) {
    auto it = sst_write.find(level);
    if (it == sst_write.end()) {
      it = sst_write.emplace(level, std::array<uint64_t, 2>{0, 0}).first;
    }
    it->second[DevIdx(dev)] += bytes;
  }

  uint64_t TotalWrites(DeviceKind dev) const {
    uint64_t t = wal_write[DevIdx(dev)] + migration_write[DevIdx(dev)];
    if (dev == DeviceKind::kSsd) t += cache_admit_write;
    for (const auto& [level, arr] : sst_write) t += arr[DevIdx(dev)];
    return t;
  }
};

struct CacheStats {
  uint64_t hits = 0;
  uint64_t misses = 0;
  uint64_t admissions = 0;
  uint64_t discards = 0;
  uint64_t zone_evictions = 0;
  uint64_t invalidations = 0;
};

struct MigrationRecord {
  uint64_t job_id = 0;
  uint64_t sst_id = 0;
  DeviceKind from = DeviceKind::kSsd;
  DeviceKind to = DeviceKind::kHdd;
  SimTime start = 0;
  SimTime end = 0;
  uint64_t bytes = 0;
  bool aborted = false;
};

// One per-interval sample of tree and ledger state.
struct LevelSample {
  SimTime at = 0;
  std::vector<uint64_t> level_bytes;
  uint64_t wal_bytes = 0;
  int wal_zones = 0;
  // hinted-policy ledger snapshot (empty for baselines)
  std::vector<int32_t> allocated;
  std::vector<int32_t> demand;
  int tiering_level = -1;
  int reserved_slots = 0;
};

struct PhaseResult {
  std::string name;
  uint64_t ops = 0;
  SimTime duration = 0;
  double throughput_ops_s = 0;
  // completion - issue, on the simulated clock
  double p99 = 0, p999 = 0, p9999 = 0;
  double read_p99 = 0, read_p999 = 0, read_p9999 = 0;
};

struct SstReadCount {
  uint64_t sst_id = 0;
  int level = 0;
  DeviceKind device = DeviceKind::kSsd;
  uint64_t read_count = 0;
};

struct BlockCacheStats {
  uint64_t hits = 0;
  uint64_t misses = 0;
  uint64_t inserts = 0;
  uint64_t evictions = 0;
};

struct MetricsReport {
  std::string config_echo;
  std::vector<PhaseResult> phases;
  std::vector<LevelSample> samples;
  TrafficStats traffic;
  BlockCacheStats block_cache;
  CacheStats ssd_cache;
  std::vector<MigrationRecord> migrations;
  std::vector<SstReadCount> sst_reads;
  // final residency: bytes per level on each device
  std::map<int, std::array<uint64_t, 2>> final_level_residency;
  uint64_t device_bytes_written[2] = {0, 0};
  uint64_t category_bytes_written[2] = {0, 0};
  uint64_t live_sst_count = 0;
  uint64_t priority_table_bytes = 0;
  uint64_t cache_mapping_bytes = 0;
};

// Percentile over completion latencies; q in (0,1). Empty input yields 0.
double Percentile(std::vector<double> values, double q);

}  // namespace hzkv
