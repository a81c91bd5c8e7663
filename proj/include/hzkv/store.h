#pragma once

// Minimal leveled LSM-tree KV store over two emulated zoned devices.
// Foreground ops run synchronously against current state while charging
// device time; flushes and compactions are background jobs stepped by the
// event loop, logically concurrent with the foreground and with each other.

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hzkv/block_cache.h"
#include "hzkv/device.h"
#include "hzkv/event_loop.h"
#include "hzkv/hints.h"
#include "hzkv/memtable.h"
#include "hzkv/placement.h"
#include "hzkv/sst.h"
#include "hzkv/sst_meta.h"
#include "hzkv/ssd_cache.h"
#include "hzkv/stats.h"
#include "hzkv/status.h"
#include "hzkv/wal.h"

namespace hzkv {

struct StoreConfig {
  uint64_t memtable_bytes = 512 * KiB;
  int flush_trigger_memtables = 2;  // immutables needed to start flushing
  int max_memtables = 4;            // active + immutables, writes stall beyond
  int max_background_jobs = 12;
  uint64_t sst_target_bytes = 1035468;  // 1,011.2 KiB, rounded down to bytes
  int level_count = 5;
  uint64_t l0_target_bytes = 1 * MiB;
  uint64_t l1_target_bytes = 1 * MiB;
  uint64_t level_size_multiplier = 10;  // from L1 upward
  uint64_t block_cache_bytes = 8 * KiB;
  int bloom_bits_per_key = 10;

  uint64_t TargetBytes(int level) const {
    if (level <= 0) return l0_target_bytes;
    uint64_t t = l1_target_bytes;
    for (int i = 1; i < level; i++) t *= level_size_multiplier;
    return t;
  }

  static StoreConfig Desk() { return StoreConfig{}; }
};

class LsmStore {
 public:
  LsmStore(EventLoop* loop, ZonedDevice* ssd, ZonedDevice* hdd,
           StoreConfig config, HintBus* bus, PlacementPolicy* policy,
           WalZoneProvider* wal_provider, TrafficStats* traffic);

  void SetSsdCache(SsdCache* cache) { ssd_cache_ = cache; }

  // --- foreground ---
  Status Put(const std::string& key, const std::string& value);
  Status Delete(const std::string& key);
  std::optional<std::string> Get(std::string_view key);
  std::vector<std::pair<std::string, std::string>> Scan(std::string_view start,
                                                        size_t count);
  SimTime last_op_duration() const { return last_op_duration_; }
  Status Health() const { return failed_; }

  // --- background ---
  void MaybeScheduleBackground();
  bool BackgroundIdle() const;
  // Runs the loop until flushes and compactions settle. False on a stall.
  bool DrainBackground();

  // --- introspection ---
  uint64_t LevelBytes(int level) const;
  const std::vector<SstMeta*>& LevelSsts(int level) const { return levels_[level]; }
  const std::map<uint64_t, std::unique_ptr<SstMeta>>& ssts() const { return ssts_; }
  SstMeta* FindSst(uint64_t sst_id);
  int wal_zones_in_use() const { return wal_.ZonesInUse(); }
  uint64_t wal_bytes() const { return wal_.TotalBytes(); }
  uint64_t live_sst_count() const { return ssts_.size(); }
  BlockCache& block_cache() { return block_cache_; }
  const StoreConfig& config() const { return config_; }
  WriteAheadLog& wal() { return wal_; }
  uint64_t memtable_count() const { return immutables_.size() + 1; }
  int active_background_jobs() const { return active_jobs_; }

  // Shared block-read path: block cache, then SSD cache (HDD SSTs), then the
  // owning device. Charges RAND_READ on device hits, bumps read_count.
  Status ReadDataBlock(SstMeta* meta, uint64_t block_offset, SimTime not_before,
                       SimTime* done, std::vector<uint8_t>* out);

  // --- migration engine interface ---
  // Atomically switches the mapping, resets source zones, keeps counters.
  void CommitMigration(SstMeta* meta, DeviceKind to_device,
                       std::vector<uint32_t> dest_zones);
  // Fired after every flush/compaction completion (migration step cadence).
  std::function<void()> on_background_event;
  // Fired when an SST is deleted (compaction consumed it).
  std::function<void(uint64_t)> on_sst_deleted;
  // Fired when an SST gets selected for compaction (in-flight copies abort).
  std::function<void(uint64_t)> on_sst_selected;

  // Structural invariants: level>=1 disjointness/order, residency shapes,
  // zone bookkeeping. For tests.
  Status CheckInvariants() const;

 private:
  struct Immutable {
    uint64_t gen = 0;
    std::shared_ptr<MemTable> table;
    bool flush_scheduled = false;
  };

  struct FlushJob {
    uint64_t gen = 0;
    std::shared_ptr<MemTable> table;
    std::unique_ptr<SstMeta> meta;
    std::vector<uint8_t> file;
    PlacementDecision target;
    std::vector<SstLocation::Extent> extents;
    size_t next_extent = 0;
    uint64_t file_pos = 0;
  };

  struct CompactionJob {
    uint64_t cid = 0;
    int input_level = 0;
    std::vector<SstMeta*> inputs;
    std::vector<std::pair<SstMeta*, SstLocation::Extent>> reads;
    size_t next_read = 0;
    std::map<uint64_t, std::vector<uint8_t>> input_bytes;
    struct Output {
      std::unique_ptr<SstMeta> meta;
      std::vector<uint8_t> file;
      PlacementDecision target;
      std::vector<SstLocation::Extent> extents;
      size_t next_extent = 0;
      uint64_t file_pos = 0;
      bool announced = false;
    };
    std::vector<Output> outputs;
    size_t next_output = 0;
    std::vector<uint64_t> produced_ids;
  };

  void PublishOrDie(const Hint& hint);
  void SealActiveMemTable();
  void ScheduleFlushes(bool force_one);
  void MaybeScheduleCompaction();
  void DispatchPending();
  void StepFlush(std::shared_ptr<FlushJob> job);
  void FinishFlush(std::shared_ptr<FlushJob> job);
  void StepCompactionRead(std::shared_ptr<CompactionJob> job);
  void MergeAndPlanOutputs(CompactionJob* job);
  void StepCompactionWrite(std::shared_ptr<CompactionJob> job);
  void FinishCompaction(std::shared_ptr<CompactionJob> job);
  void FailStore(const Status& st);
  void DeleteSst(SstMeta* meta);
  void InstallSstL0(std::unique_ptr<SstMeta> meta);
  ZonedDevice* DeviceFor(DeviceKind kind) const {
    return kind == DeviceKind::kSsd ? ssd_ : hdd_;
  }
  SstLocation MakeLocation(const PlacementDecision& d, uint64_t bytes) const;
  Status PutEntry(sst::Entry e);
  // Decoded entries of every input, newest-first precedence via seqno.
  std::vector<sst::Entry> DecodeSstData(const SstMeta& meta,
                                        const std::vector<uint8_t>& file) const;

  EventLoop* loop_;
  ZonedDevice* ssd_;
  ZonedDevice* hdd_;
  StoreConfig config_;
  HintBus* bus_;
  PlacementPolicy* policy_;
  TrafficStats* traffic_;
  SsdCache* ssd_cache_ = nullptr;

  WriteAheadLog wal_;
  BlockCache block_cache_;

  std::unique_ptr<MemTable> active_;
  uint64_t active_gen_ = 0;
  uint64_t next_gen_ = 1;
  std::deque<Immutable> immutables_;  // oldest first

  std::vector<std::vector<SstMeta*>> levels_;  // L0 by max_seqno desc; L>=1 by min_key
  std::map<uint64_t, std::unique_ptr<SstMeta>> ssts_;
  uint64_t next_sst_id_ = 1;
  uint64_t next_seqno_ = 1;
  uint64_t next_compaction_id_ = 1;

  std::vector<bool> level_locked_;
  std::deque<std::shared_ptr<FlushJob>> pending_flushes_;
  std::deque<std::shared_ptr<CompactionJob>> pending_compactions_;
  int active_jobs_ = 0;

  Status failed_;
  SimTime last_op_duration_ = 0;
};

}  // namespace hzkv
