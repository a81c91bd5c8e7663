#pragma once

// Application-hinted SSD cache. A fixed budget of SSD zones (max WAL size /
// zone capacity) is shared between WAL zones and cache zones; the split moves
// with demand. Data blocks evicted from the in-memory block cache are
// admitted into an append-only active cache zone when their SST lives on the
// HDD; eviction reclaims whole zones FIFO. The same object hands WAL zones
// out of the reserved budget, reclaiming cache zones ahead of WAL need.

#include <cstdint>
#include <deque>
#include <functional>
#include <list>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hzkv/device.h"
#include "hzkv/hints.h"
#include "hzkv/sst_meta.h"
#include "hzkv/stats.h"
#include "hzkv/wal.h"

namespace hzkv {

class SsdCache : public HintSubscriber, public WalZoneProvider {
 public:
  using LiveSstFn = std::function<const SstMeta*(uint64_t sst_id)>;

  SsdCache(EventLoop* loop, ZonedDevice* ssd, int reserved_zones,
           bool admissions_enabled, TrafficStats* traffic)
      : loop_(loop),
        ssd_(ssd),
        total_reserved_(reserved_zones),
        enabled_(admissions_enabled),
        traffic_(traffic) {}

  void SetLiveLookup(LiveSstFn fn) { live_ = std::move(fn); }

  // --- WalZoneProvider ---
  std::optional<WalTarget> AcquireWalZone() override;
  bool CanAcquireWalZone() const override;
  void ReleaseWalZone(ZonedDevice* dev, uint32_t zone) override;

  // --- hints ---
  void OnHint(const Hint& hint) override;

  enum class AdmitResult { kAdmitted, kDiscarded };
  AdmitResult Admit(uint64_t sst_id, uint64_t block_offset,
                    std::span<const uint8_t> block);

  // Hit returns the cached bytes and charges an SSD random read ending at
  // *done. Entries whose SST died or left the HDD are dropped lazily here.
  std::optional<std::vector<uint8_t>> Lookup(uint64_t sst_id,
                                             uint64_t block_offset,
                                             SimTime not_before, SimTime* done);

  Status EvictOldestZone(uint32_t* reclaimed);

  int wal_zones() const { return wal_zones_; }
  int cache_zones() const { return static_cast<int>(zone_order_.size()); }
  int total_reserved() const { return total_reserved_; }
  size_t entry_count() const { return map_.size(); }

  // 48 bytes per cached block (mapping table + FIFO queue entry).
  uint64_t MappingMemoryBytes() const { return MappingBytesFor(map_.size()); }
  static uint64_t MappingBytesFor(uint64_t entries) { return entries * 48; }
  // 32 bytes per live SST priority record.
  static uint64_t PriorityBytesFor(uint64_t sst_count) { return sst_count * 32; }

  const CacheStats& stats() const { return stats_; }

  // Mapping table and FIFO queue must stay a bijection.
  bool CheckBijection() const;

 private:
  using Key = std::pair<uint64_t, uint64_t>;  // (sst_id, block_offset)
  struct Slot {
    uint32_t zone = 0;
    uint64_t zone_offset = 0;
    uint32_t length = 0;
    std::list<Key>::iterator queue_it;
  };

  bool EnsureActiveZone(uint64_t need_bytes);
  void DropEntry(std::map<Key, Slot>::iterator it);

  EventLoop* loop_;
  ZonedDevice* ssd_;
  int total_reserved_;
  bool enabled_;
  TrafficStats* traffic_;
  LiveSstFn live_;

  int wal_zones_ = 0;
  std::deque<uint32_t> zone_order_;  // cache zones in fill order, front oldest
  std::optional<uint32_t> active_zone_;
  std::map<Key, Slot> map_;
  std::list<Key> fifo_;  // admission order, front oldest
  CacheStats stats_;
};

}  // namespace hzkv
