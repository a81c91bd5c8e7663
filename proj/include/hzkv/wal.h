#pragma once

// Write-ahead log: a single append log spanning WAL zones. Records use the
// SST entry encoding. A zone is reset and returned to its provider once every
// record in it has been flushed and it is no longer the active tail.

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "hzkv/device.h"
#include "hzkv/sst.h"
#include "hzkv/stats.h"

namespace hzkv {

struct WalTarget {
  ZonedDevice* device = nullptr;
  uint32_t zone = 0;
};

// Hands out zones for WAL appends. The reserved-budget implementation lives
// in the SSD cache module; the basic schemes use BasicWalProvider.
class WalZoneProvider {
 public:
  virtual ~WalZoneProvider() = default;
  virtual std::optional<WalTarget> AcquireWalZone() = 0;
  virtual bool CanAcquireWalZone() const = 0;
  // The zone has already been reset by the WAL.
  virtual void ReleaseWalZone(ZonedDevice* dev, uint32_t zone) = 0;
};

// Unreserved allocation: any empty SSD zone, falling back to the HDD.
class BasicWalProvider : public WalZoneProvider {
 public:
  BasicWalProvider(ZonedDevice* ssd, ZonedDevice* hdd) : ssd_(ssd), hdd_(hdd) {}

  std::optional<WalTarget> AcquireWalZone() override {
    if (std::optional<uint32_t> z = ssd_->ClaimEmptyZone()) {
      return WalTarget{ssd_, *z};
    }
    if (std::optional<uint32_t> z = hdd_->ClaimEmptyZone()) {
      return WalTarget{hdd_, *z};
    }
    return std::nullopt;
  }

  bool CanAcquireWalZone() const override {
    return ssd_->EmptyUnclaimedCount() > 0 || hdd_->EmptyUnclaimedCount() > 0;
  }

  void ReleaseWalZone(ZonedDevice*, uint32_t) override {}

 private:
  ZonedDevice* ssd_;
  ZonedDevice* hdd_;
};

class WriteAheadLog {
 public:
  WriteAheadLog(WalZoneProvider* provider, TrafficStats* stats)
      : provider_(provider), stats_(stats) {}

  // True if the next append of record_bytes can proceed without stalling.
  bool CanAppend(uint64_t record_bytes) const;

  // Appends one durable record charged as a sequential write; associates it
  // with the MemTable generation so the zone can be reclaimed after flush.
  Status Append(const sst::Entry& e, uint64_t memtable_gen, SimTime not_before,
                SimTime* done);

  // All records of this generation are flushed; reclaim fully-flushed zones.
  void ReleaseGeneration(uint64_t gen);

  int ZonesInUse() const { return static_cast<int>(zones_.size()); }
  uint64_t TotalBytes() const;

  // Decodes every record still readable, oldest zone first.
  std::vector<sst::Entry> ReplayRecords() const;

 private:
  struct LogZone {
    ZonedDevice* dev = nullptr;
    uint32_t zone = 0;
    std::map<uint64_t, uint64_t> outstanding;  // gen -> record count
  };

  void ReclaimFront();

  WalZoneProvider* provider_;
  TrafficStats* stats_;
  std::deque<LogZone> zones_;  // front oldest, back = active tail
};

}  // namespace hzkv
