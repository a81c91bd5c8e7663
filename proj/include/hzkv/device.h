#pragma once

// Emulated zoned storage device: append-only zones with write pointers and
// whole-zone reset, plus a service-time model with one channel per device.
// Data lands in in-memory buffers immediately; time is charged separately
// through Occupy() so requests on the same device serialize while requests
// on different devices overlap in simulated time.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hzkv/config.h"
#include "hzkv/event_loop.h"
#include "hzkv/status.h"

namespace hzkv {

enum class DeviceKind { kSsd = 0, kHdd = 1 };

enum class IoKind { kSeqRead, kSeqWrite, kRandRead };

enum class ZoneCond { kEmpty, kOpen, kFull };

constexpr uint64_t KiB = 1024;
constexpr uint64_t MiB = 1024 * KiB;
constexpr uint64_t GiB = 1024 * MiB;

struct DeviceProfile {
  DeviceKind kind = DeviceKind::kSsd;
  uint64_t zone_capacity = 0;  // bytes
  uint32_t zone_count = 0;
  double seq_read_bps = 0;    // bytes/second
  double seq_write_bps = 0;   // bytes/second
  double rand_read_iops = 0;  // operations/second
  uint64_t block_size = 4 * KiB;

  // Desk profiles: zone capacities scaled MiB -> KiB, rates kept at the
  // measured device values.
  static DeviceProfile DeskSsd(uint32_t zones = 20);
  static DeviceProfile DeskHdd(uint32_t zones = 8192);

  Status Validate() const;

  // Schema keys: kind, zone_capacity_bytes, zone_count, seq_read_Bps,
  // seq_write_Bps, rand_read_iops, block_size (optional).
  static Status FromConfig(const ConfigMap& cfg, DeviceProfile* out);
};

struct ZoneInfo {
  uint32_t zone_id = 0;
  uint64_t capacity = 0;
  uint64_t write_pointer = 0;

  ZoneCond cond() const {
    if (write_pointer == 0) return ZoneCond::kEmpty;
    if (write_pointer == capacity) return ZoneCond::kFull;
    return ZoneCond::kOpen;
  }
};

class ZonedDevice {
 public:
  ZonedDevice(std::string name, DeviceProfile profile, EventLoop* loop);

  // --- data plane (instantaneous state changes) ---
  Status Append(uint32_t zone_id, std::span<const uint8_t> data, uint64_t* offset);
  Status Read(uint32_t zone_id, uint64_t offset, uint64_t len,
              std::vector<uint8_t>* out) const;
  Status ResetZone(uint32_t zone_id);

  const ZoneInfo& zone(uint32_t zone_id) const { return zones_[zone_id]; }
  uint32_t zone_count() const { return profile_.zone_count; }
  uint64_t zone_capacity() const { return profile_.zone_capacity; }

  // --- timing plane ---
  SimTime ServiceTime(IoKind kind, uint64_t size) const;
  // Reserves the device channel for one request starting no earlier than
  // not_before; returns the completion time.
  SimTime Occupy(IoKind kind, uint64_t size, SimTime not_before);
  SimTime Occupy(IoKind kind, uint64_t size) { return Occupy(kind, size, loop_->Now()); }
  SimTime busy_until() const { return busy_until_; }

  // --- allocation overlay ---
  // Claims the lowest-numbered EMPTY unclaimed zone so concurrent jobs never
  // pick the same target. The claim clears on first append or reset.
  std::optional<uint32_t> ClaimEmptyZone();
  void ReleaseClaim(uint32_t zone_id);
  bool claimed(uint32_t zone_id) const { return claimed_[zone_id]; }
  uint32_t EmptyUnclaimedCount() const;

  const DeviceProfile& profile() const { return profile_; }
  const std::string& name() const { return name_; }

  uint64_t bytes_written() const { return bytes_written_; }
  uint64_t bytes_read() const { return bytes_read_; }
  uint64_t OccupiedBytes() const;

 private:
  std::string name_;
  DeviceProfile profile_;
  EventLoop* loop_;
  std::vector<ZoneInfo> zones_;
  std::vector<std::vector<uint8_t>> data_;
  std::vector<bool> claimed_;
  SimTime busy_until_ = 0;
  uint64_t bytes_written_ = 0;
  uint64_t bytes_read_ = 0;
};

}  // namespace hzkv
