#include "hzkv/placement.h"

#include <cassert>

namespace hzkv {

TieringDecision ComputeTiering(const LevelLedger& ledger) {
  TieringDecision d;
  int n = ledger.level_count();
  int64_t prefix = 0;
  for (int i = 0; i < n; i++) {
    int64_t demand = (i == 0) ? ledger.wal_zones_in_use : ledger.demand[i];
    prefix += ledger.allocated[i] + demand;
    if (prefix >= ledger.ssd_budget) {
      d.level = i;
      int64_t below = prefix - (ledger.allocated[i] + demand);
      int64_t reserved = ledger.ssd_budget - below;
      d.reserved_slots = reserved < 0 ? 0 : static_cast<int>(reserved);
      d.all_ssd = false;
      return d;
    }
  }
  d.level = n;  // sentinel: every level fits in the SSD
  d.reserved_slots = 0;
  d.all_ssd = true;
  return d;
}

Status ClaimZonesFor(ZonedDevice* dev, uint64_t size, PlacementDecision* out) {
  uint64_t cap = dev->zone_capacity();
  uint32_t need = static_cast<uint32_t>((size + cap - 1) / cap);
  if (need == 0) need = 1;
  PlacementDecision d;
  d.device = dev;
  for (uint32_t i = 0; i < need; i++) {
    std::optional<uint32_t> z = dev->ClaimEmptyZone();
    if (!z) {
      for (uint32_t zz : d.zones) dev->ReleaseClaim(zz);
      return Status::StoreFull("no empty zone on " + dev->name());
    }
    d.zones.push_back(*z);
  }
  *out = std::move(d);
  return Status::OK();
}

HintedPlacement::HintedPlacement(ZonedDevice* ssd, ZonedDevice* hdd,
                                 int level_count, int reserved_wal_cache_zones,
                                 std::function<int()> wal_zones_in_use)
    : ssd_(ssd), hdd_(hdd), wal_zones_in_use_(std::move(wal_zones_in_use)) {
  ledger_.allocated.assign(level_count, 0);
  ledger_.demand.assign(level_count, 0);
  int budget = static_cast<int>(ssd->zone_count()) - reserved_wal_cache_zones;
  ledger_.ssd_budget = budget < 0 ? 0 : budget;
}

void HintedPlacement::OnHint(const Hint& hint) {
  if (const auto* f = std::get_if<FlushHint>(&hint)) {
    pending_flush_.insert(f->sst_id);
    return;
  }
  if (const auto* b = std::get_if<CompactionBeginHint>(&hint)) {
    int level = b->output_level;
    if (level >= 0 && level < ledger_.level_count()) {
      ledger_.demand[level] += static_cast<int32_t>(b->selected_sst_ids.size());
    }
    compaction_remaining_[b->compaction_id] =
        static_cast<int>(b->selected_sst_ids.size());
    compaction_level_[b->compaction_id] = level;
    return;
  }
  if (const auto* o = std::get_if<CompactionOutputHint>(&hint)) {
    auto it = compaction_remaining_.find(o->compaction_id);
    if (it == compaction_remaining_.end()) return;
    if (it->second > 0 && o->level >= 0 && o->level < ledger_.level_count()) {
      ledger_.demand[o->level] -= 1;
      it->second -= 1;
    }
    return;
  }
  if (const auto* e = std::get_if<CompactionEndHint>(&hint)) {
    auto it = compaction_remaining_.find(e->compaction_id);
    if (it == compaction_remaining_.end()) return;
    int level = compaction_level_[e->compaction_id];
    // selected minus produced: whatever this compaction still holds in D
    if (it->second > 0 && level >= 0 && level < ledger_.level_count()) {
      ledger_.demand[level] -= it->second;
    }
    compaction_remaining_.erase(it);
    compaction_level_.erase(e->compaction_id);
    return;
  }
}

TieringDecision HintedPlacement::CurrentTiering() {
  ledger_.wal_zones_in_use = wal_zones_in_use_ ? wal_zones_in_use_() : 0;
  return ComputeTiering(ledger_);
}

int32_t HintedPlacement::allocated_total() const {
  int32_t total = 0;
  for (int32_t a : ledger_.allocated) total += a;
  return total;
}

bool HintedPlacement::CanGrantSsdZone() const {
  return allocated_total() < ledger_.ssd_budget &&
         ssd_->EmptyUnclaimedCount() > 0;
}

std::optional<uint32_t> HintedPlacement::TryGrantSsdZone(int level) {
  if (!CanGrantSsdZone()) return std::nullopt;
  std::optional<uint32_t> z = ssd_->ClaimEmptyZone();
  if (!z) return std::nullopt;
  if (level >= 0 && level < ledger_.level_count()) ledger_.allocated[level]++;
  return z;
}

void HintedPlacement::WithdrawSsdGrant(int level) {
  if (level >= 0 && level < ledger_.level_count()) {
    ledger_.allocated[level]--;
    assert(ledger_.allocated[level] >= 0);
  }
}

Status HintedPlacement::GrantSsd(const SstMeta& meta, int level,
                                 PlacementDecision* out) {
  (void)meta;
  std::optional<uint32_t> z = ssd_->ClaimEmptyZone();
  if (!z) return Status::StoreFull("no empty SSD zone");
  if (level >= 0 && level < ledger_.level_count()) ledger_.allocated[level]++;
  out->device = ssd_;
  out->zones = {*z};
  return Status::OK();
}

Status HintedPlacement::GrantHdd(const SstMeta& meta, PlacementDecision* out) {
  return ClaimZonesFor(hdd_, meta.data_size, out);
}

Status HintedPlacement::SelectSstTarget(const SstMeta& meta,
                                        const WriteCause& cause,
                                        PlacementDecision* out) {
  pending_flush_.erase(meta.sst_id);
  TieringDecision t = CurrentTiering();
  int level = cause.flush ? 0 : cause.compaction_level;
  bool want_ssd = false;
  if (cause.flush) {
    want_ssd = true;
  } else if (t.all_ssd || level < t.level) {
    want_ssd = true;
  } else if (level == t.level && level < ledger_.level_count() &&
             ledger_.allocated[level] < t.reserved_slots) {
    // The reservation covers level-t SSTs resident in the SSD, so each grant
    // consumes a slot via A_t at the next recomputation.
    want_ssd = true;
  }
  if (want_ssd) {
    if (allocated_total() < ledger_.ssd_budget &&
        ssd_->EmptyUnclaimedCount() > 0) {
      return GrantSsd(meta, level, out);
    }
    return GrantHdd(meta, out);
  }
  // Levels above the tiering level never take fresh SSD zones, even when the
  // HDD is exhausted.
  return GrantHdd(meta, out);
}

void HintedPlacement::OnSstDeleted(const SstMeta& meta) {
  if (meta.location.device == DeviceKind::kSsd && meta.level >= 0 &&
      meta.level < ledger_.level_count()) {
    ledger_.allocated[meta.level]--;
    assert(ledger_.allocated[meta.level] >= 0);
  }
}

void HintedPlacement::OnSstMigrated(const SstMeta& meta, DeviceKind from,
                                    DeviceKind to) {
  if (meta.level < 0 || meta.level >= ledger_.level_count()) return;
  if (from == DeviceKind::kSsd && to == DeviceKind::kHdd) {
    ledger_.allocated[meta.level]--;
    assert(ledger_.allocated[meta.level] >= 0);
  }
  // HDD -> SSD grants are accounted at TryGrantSsdZone() time.
}

void HintedPlacement::OnTargetAbandoned(const SstMeta& meta,
                                        const PlacementDecision& d) {
  for (uint32_t z : d.zones) d.device->ReleaseClaim(z);
  if (d.device == ssd_ && meta.level >= 0 && meta.level < ledger_.level_count()) {
    ledger_.allocated[meta.level]--;
  }
}

}  // namespace hzkv
