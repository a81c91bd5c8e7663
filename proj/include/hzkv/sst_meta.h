#pragma once

#include <cassert>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hzkv/device.h"
#include "hzkv/event_loop.h"
#include "hzkv/sst.h"

namespace hzkv {

// Where an SST's bytes live: one SSD zone, or an ordered list of HDD zones
// filled to capacity except the last. Extent k starts at file offset
// k * zone_capacity of the owning device.
struct SstLocation {
  DeviceKind device = DeviceKind::kSsd;
  std::vector<uint32_t> zones;
  uint64_t total_bytes = 0;
  uint64_t zone_capacity = 0;  // of the owning device

  struct Extent {
    uint32_t zone;
    uint64_t zone_offset;
    uint64_t length;
  };

  // Maps [offset, offset+len) within the file to one extent. The caller
  // guarantees the range does not span zones (blocks are zone-aligned).
  Extent Resolve(uint64_t offset, uint64_t len) const {
    size_t idx = static_cast<size_t>(offset / zone_capacity);
    uint64_t in_zone = offset % zone_capacity;
    assert(idx < zones.size());
    assert(in_zone + len <= zone_capacity);
    return Extent{zones[idx], in_zone, len};
  }

  // Per-zone extents of the whole file, in order.
  std::vector<Extent> Extents() const {
    std::vector<Extent> out;
    uint64_t left = total_bytes;
    for (uint32_t z : zones) {
      uint64_t take = left < zone_capacity ? left : zone_capacity;
      out.push_back(Extent{z, 0, take});
      left -= take;
      if (left == 0) break;
    }
    return out;
  }
};

struct SstMeta {
  uint64_t sst_id = 0;
  int level = 0;
  std::string min_key, max_key;
  uint64_t data_size = 0;  // serialized file bytes
  SstLocation location;
  SimTime created_at = 0;
  uint64_t read_count = 0;
  bool selected_for_compaction = false;
  bool migrating = false;  // source of an in-flight migration
  uint64_t max_seqno = 0;
  std::shared_ptr<sst::View> view;  // pinned index + filter
};

struct WriteCause {
  bool flush = false;
  int compaction_level = 0;  // output level, when !flush

  static WriteCause Flush() { return WriteCause{true, 0}; }
  static WriteCause Compaction(int level) { return WriteCause{false, level}; }
};

struct PlacementDecision {
  ZonedDevice* device = nullptr;
  std::vector<uint32_t> zones;  // claimed EMPTY zones, in fill order
};

}  // namespace hzkv
