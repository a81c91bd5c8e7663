#pragma once

// Comparison policies: the static basic schemes B_h and the re-implemented
// AUTO tuner that moves a maximum-SSD level up or down from windowed SSD
// write throughput and remaining space.

#include <cstdint>
#include <functional>

#include "hzkv/placement.h"

namespace hzkv {

// B_h: WAL and SSTs at levels < h go to the SSD while it has an empty zone;
// everything else (and all overflow) goes to the HDD. Never migrates.
class BasicPolicy : public PlacementPolicy {
 public:
  BasicPolicy(ZonedDevice* ssd, ZonedDevice* hdd, int h)
      : ssd_(ssd), hdd_(hdd), h_(h) {}

  Status SelectSstTarget(const SstMeta& meta, const WriteCause& cause,
                         PlacementDecision* out) override;

  int h() const { return h_; }

 private:
  ZonedDevice* ssd_;
  ZonedDevice* hdd_;
  int h_;
};

// One AUTO tuning step. throughput_frac is the windowed SSD write throughput
// as a fraction of the device's sequential write rate; space_frac is the
// remaining fraction of total SSD space. Returns the new max level:
//   space < 8%    -> -1 (no SST writes to the SSD)
//   space < 13.3% -> 1
//   thr < 40%     -> +1 (capped at level_cap)
//   thr > 65%     -> -1 step (floored at 0)
int AutoTuneStep(int current_max_level, double throughput_frac,
                 double space_frac, int level_cap);

struct AutoThresholds {
  double low_util = 0.40;
  double high_util = 0.65;
  double space_floor_fix_l1 = 0.133;
  double space_floor_no_sst = 0.08;
};

class AutoPolicy : public PlacementPolicy {
 public:
  // reserved_wal_zones stays available for the WAL, as in the hinted policy.
  AutoPolicy(ZonedDevice* ssd, ZonedDevice* hdd, int level_count,
             int reserved_wal_zones, std::function<int()> wal_zones_in_use);

  Status SelectSstTarget(const SstMeta& meta, const WriteCause& cause,
                         PlacementDecision* out) override;

  // 1s measurement window; at most one level change per window.
  void OnSampleTick() override;

  int max_level() const { return max_level_; }

 private:
  bool CanGrantSsd() const;

  ZonedDevice* ssd_;
  ZonedDevice* hdd_;
  int level_count_;
  int reserved_wal_zones_;
  std::function<int()> wal_zones_in_use_;
  int max_level_ = 0;
  uint64_t last_window_written_ = 0;
  SimTime last_tick_ = 0;
  bool first_tick_ = true;
};

}  // namespace hzkv
