#include "hzkv/baselines.h"

namespace hzkv {

Status BasicPolicy::SelectSstTarget(const SstMeta& meta, const WriteCause& cause,
                                    PlacementDecision* out) {
  int level = cause.flush ? 0 : cause.compaction_level;
  if (level < h_ && ssd_->EmptyUnclaimedCount() > 0) {
    std::optional<uint32_t> z = ssd_->ClaimEmptyZone();
    if (z) {
      out->device = ssd_;
      out->zones = {*z};
      return Status::OK();
    }
  }
  // No migration, no waiting: overflow goes straight to the HDD. Levels >= h
  // never land on the SSD.
  return ClaimZonesFor(hdd_, meta.data_size, out);
}

int AutoTuneStep(int current_max_level, double throughput_frac,
                 double space_frac, int level_cap) {
  AutoThresholds th;
  if (space_frac < th.space_floor_no_sst) return -1;
  if (space_frac < th.space_floor_fix_l1) return 1;
  if (throughput_frac < th.low_util) {
    int next = current_max_level + 1;
    return next > level_cap ? level_cap : next;
  }
  if (throughput_frac > th.high_util) {
    int next = current_max_level - 1;
    return next < 0 ? 0 : next;
  }
  return current_max_level;
}

AutoPolicy::AutoPolicy(ZonedDevice* ssd, ZonedDevice* hdd, int level_count,
                       int reserved_wal_zones,
                       std::function<int()> wal_zones_in_use)
    : ssd_(ssd),
      hdd_(hdd),
      level_count_(level_count),
      reserved_wal_zones_(reserved_wal_zones),
      wal_zones_in_use_(std::move(wal_zones_in_use)) {}

bool AutoPolicy::CanGrantSsd() const {
  int wal_used = wal_zones_in_use_ ? wal_zones_in_use_() : 0;
  int headroom = reserved_wal_zones_ - wal_used;
  if (headroom < 0) headroom = 0;
  // Keep the WAL reserve untouched by SST grants.
  return static_cast<int>(ssd_->EmptyUnclaimedCount()) > headroom;
}

Status AutoPolicy::SelectSstTarget(const SstMeta& meta, const WriteCause& cause,
                                   PlacementDecision* out) {
  int level = cause.flush ? 0 : cause.compaction_level;
  if (level <= max_level_ && CanGrantSsd()) {
    std::optional<uint32_t> z = ssd_->ClaimEmptyZone();
    if (z) {
      out->device = ssd_;
      out->zones = {*z};
      return Status::OK();
    }
  }
  return ClaimZonesFor(hdd_, meta.data_size, out);
}

void AutoPolicy::OnSampleTick() {
  uint64_t written = ssd_->bytes_written();
  if (first_tick_) {
    first_tick_ = false;
    last_window_written_ = written;
    return;
  }
  double window_bytes = static_cast<double>(written - last_window_written_);
  last_window_written_ = written;
  double thr_frac = window_bytes / ssd_->profile().seq_write_bps;
  uint64_t total = static_cast<uint64_t>(ssd_->zone_count()) * ssd_->zone_capacity();
  double space_frac =
      1.0 - static_cast<double>(ssd_->OccupiedBytes()) / static_cast<double>(total);
  max_level_ = AutoTuneStep(max_level_, thr_frac, space_frac, level_count_ - 1);
}

}  // namespace hzkv
