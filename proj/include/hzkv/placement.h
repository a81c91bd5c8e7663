#pragma once

// Write-guided data placement: tracks per-level SSD zone allocations and
// storage demands from flush/compaction hints, computes the tiering level,
// reserves SSD slots for it, and picks target zones for every written SST.

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "hzkv/device.h"
#include "hzkv/hints.h"
#include "hzkv/sst_meta.h"
#include "hzkv/status.h"

namespace hzkv {

struct LevelLedger {
  std::vector<int32_t> allocated;  // A_i: SSD zones held by level i SSTs
  std::vector<int32_t> demand;     // D_i: SSTs still to be written into level i
  int32_t ssd_budget = 0;          // C_ssd: SSD zones available for SSTs
  int32_t wal_zones_in_use = 0;    // read as D_0

  int level_count() const { return static_cast<int>(allocated.size()); }
};

struct TieringDecision {
  int level = 0;           // t; == level_count() when the whole tree fits
  int reserved_slots = 0;  // SSD slots left for level t, clamped at 0
  bool all_ssd = false;    // sentinel case
};

// t = smallest i with sum_{j<=i}(A_j + D_j) >= C_ssd, with D_0 taken from
// wal_zones_in_use. Sentinel when no such i exists.
TieringDecision ComputeTiering(const LevelLedger& ledger);

// Interface shared by the hinted policy and the baselines.
class PlacementPolicy : public HintSubscriber {
 public:
  virtual ~PlacementPolicy() = default;

  virtual Status SelectSstTarget(const SstMeta& meta, const WriteCause& cause,
                                 PlacementDecision* out) = 0;

  // Zones released back by the store / migration engine.
  virtual void OnSstDeleted(const SstMeta& meta) { (void)meta; }
  virtual void OnSstMigrated(const SstMeta& meta, DeviceKind from, DeviceKind to) {
    (void)meta; (void)from; (void)to;
  }
  // Called when a granted target is discarded before any byte was written.
  virtual void OnTargetAbandoned(const SstMeta& meta, const PlacementDecision& d) {
    (void)meta; (void)d;
  }

  // Periodic 1s tick for policies that self-tune.
  virtual void OnSampleTick() {}

  void OnHint(const Hint& hint) override { (void)hint; }

  virtual const LevelLedger* ledger() const { return nullptr; }
};

// Claims ceil(size / zone_capacity) EMPTY zones on dev. Releases all claims
// and fails if the device runs out part-way.
Status ClaimZonesFor(ZonedDevice* dev, uint64_t size, PlacementDecision* out);

class HintedPlacement : public PlacementPolicy {
 public:
  HintedPlacement(ZonedDevice* ssd, ZonedDevice* hdd, int level_count,
                  int reserved_wal_cache_zones,
                  std::function<int()> wal_zones_in_use);

  void OnHint(const Hint& hint) override;

  Status SelectSstTarget(const SstMeta& meta, const WriteCause& cause,
                         PlacementDecision* out) override;

  void OnSstDeleted(const SstMeta& meta) override;
  void OnSstMigrated(const SstMeta& meta, DeviceKind from, DeviceKind to) override;
  void OnTargetAbandoned(const SstMeta& meta, const PlacementDecision& d) override;

  // Recomputes with live D_0.
  TieringDecision CurrentTiering();

  // Migration support: grant/release an SSD zone for a level while keeping
  // sum(A_i) <= C_ssd.
  std::optional<uint32_t> TryGrantSsdZone(int level);
  bool CanGrantSsdZone() const;
  void WithdrawSsdGrant(int level);

  const LevelLedger* ledger() const override { return &ledger_; }
  int32_t allocated_total() const;

 private:
  Status GrantSsd(const SstMeta& meta, int level, PlacementDecision* out);
  Status GrantHdd(const SstMeta& meta, PlacementDecision* out);

  ZonedDevice* ssd_;
  ZonedDevice* hdd_;
  LevelLedger ledger_;
  std::function<int()> wal_zones_in_use_;
  std::set<uint64_t> pending_flush_;  // SSTs announced by flush hints
  std::map<uint64_t, int> compaction_remaining_;  // cid -> undelivered outputs
  std::map<uint64_t, int> compaction_level_;
};

}  // namespace hzkv
