#pragma once

// Workload-aware background migration: priority-ordered capacity migration
// (SSD -> HDD) and popularity migration (HDD -> SSD, or a swap when the SSD
// is full), paced by a global byte-rate limiter. One copy is in flight at a
// time; queued jobs serialize behind it.

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "hzkv/device.h"
#include "hzkv/event_loop.h"
#include "hzkv/placement.h"
#include "hzkv/sst_meta.h"
#include "hzkv/stats.h"
#include "hzkv/store.h"

namespace hzkv {

constexpr SimTime kAgeFloorSeconds = 1.0;

// read_count / age, with a floor of one simulated second on the age.
double SstReadRate(const SstMeta& meta, SimTime now);

// Lexicographic priority: lower level wins, then higher read rate, then
// smaller id for determinism.
bool HigherPriority(const SstMeta& x, const SstMeta& y, SimTime now);

class RateLimiter {
 public:
  explicit RateLimiter(double bytes_per_sec) : rate_(bytes_per_sec) {}

  // Issue time for a chunk of `bytes`; consecutive grants are spaced at least
  // bytes/rate apart, so any window [t, t+D) carries at most rate*D plus one
  // in-flight chunk.
  SimTime Grant(uint64_t bytes, SimTime now) {
    SimTime issue = now > next_free_ ? now : next_free_;
    next_free_ = issue + static_cast<double>(bytes) / rate_;
    return issue;
  }

  double rate() const { return rate_; }

 private:
  double rate_;
  SimTime next_free_ = 0;
};

class MigrationEngine {
 public:
  MigrationEngine(EventLoop* loop, LsmStore* store, HintedPlacement* placement,
                  ZonedDevice* ssd, ZonedDevice* hdd, double rate_bytes_per_sec,
                  TrafficStats* traffic);

  // Begins the periodic 1s check; Poke() runs the checks immediately (wired
  // to flush/compaction completions).
  void Start();
  void Stop() { running_ticks_ = false; }
  void Poke();

  // Compaction consumed this SST: abort any in-flight or queued copy of it.
  void OnSstDeleted(uint64_t sst_id);
  // Compaction selected this SST: it may no longer be a migration source.
  void OnSstSelected(uint64_t sst_id);

  const std::vector<MigrationRecord>& log() const { return log_; }
  // (issue time, bytes) per granted chunk, for rate-bound checks.
  const std::vector<std::pair<SimTime, uint64_t>>& chunk_log() const {
    return chunk_log_;
  }
  bool idle() const { return !active_ && queue_.empty(); }

  static constexpr uint64_t kChunkBytes = 256 * KiB;

 private:
  struct Job {
    uint64_t job_id = 0;
    uint64_t sst_id = 0;
    DeviceKind to = DeviceKind::kHdd;
  };

  struct ActiveCopy {
    Job job;
    SstMeta* meta = nullptr;
    int level = 0;
    PlacementDecision dest;
    uint64_t file_pos = 0;
    uint64_t total = 0;
    SimTime start = 0;
    bool granted_ssd = false;
    bool aborted = false;
  };

  void Tick();
  void StepChecks();
  bool QueueCapacityMove();
  bool QueuePopularityMove();
  void StartNext();
  void ChunkStep();
  void FinishActive(bool aborted);
  int64_t DemandBelowTiering(const TieringDecision& t) const;

  EventLoop* loop_;
  LsmStore* store_;
  HintedPlacement* placement_;
  ZonedDevice* ssd_;
  ZonedDevice* hdd_;
  RateLimiter limiter_;
  TrafficStats* traffic_;

  std::deque<Job> queue_;
  std::optional<ActiveCopy> active_;
  uint64_t next_job_id_ = 1;
  bool running_ticks_ = false;
  bool tick_scheduled_ = false;

  std::vector<MigrationRecord> log_;
  std::vector<std::pair<SimTime, uint64_t>> chunk_log_;
};

}  // namespace hzkv
