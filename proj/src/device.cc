#include "hzkv/device.h"

#include <cassert>
#include <cstring>

namespace hzkv {

DeviceProfile DeviceProfile::DeskSsd(uint32_t zones) {
  DeviceProfile p;
  p.kind = DeviceKind::kSsd;
  p.zone_capacity = 1077 * KiB;
  p.zone_count = zones;
  p.seq_read_bps = 1039.6 * MiB;
  p.seq_write_bps = 1002.8 * MiB;
  p.rand_read_iops = 16928.3;
  return p;
}

DeviceProfile DeviceProfile::DeskHdd(uint32_t zones) {
  DeviceProfile p;
  p.kind = DeviceKind::kHdd;
  p.zone_capacity = 256 * KiB;
  p.zone_count = zones;
  p.seq_read_bps = 210.0 * MiB;
  p.seq_write_bps = 210.0 * MiB;
  p.rand_read_iops = 115.0;
  return p;
}

Status DeviceProfile::Validate() const {
  if (zone_capacity == 0) return Status::ConfigError("zone_capacity must be > 0");
  if (zone_count == 0) return Status::ConfigError("zone_count must be > 0");
  if (seq_read_bps <= 0 || seq_write_bps <= 0 || rand_read_iops <= 0) {
    return Status::ConfigError("device rates must be strictly positive");
  }
  if (block_size == 0) return Status::ConfigError("block_size must be > 0");
  return Status::OK();
}

Status DeviceProfile::FromConfig(const ConfigMap& cfg, DeviceProfile* out) {
  DeviceProfile p;
  std::string kind;
  Status st = cfg.GetString("kind", &kind);
  if (!st.ok()) return st;
  if (kind == "SSD" || kind == "ssd") {
    p.kind = DeviceKind::kSsd;
  } else if (kind == "HDD" || kind == "hdd") {
    p.kind = DeviceKind::kHdd;
  } else {
    return Status::ConfigError("kind must be SSD or HDD, got '" + kind + "'");
  }
  uint64_t u = 0;
  if (!(st = cfg.GetU64("zone_capacity_bytes", &u)).ok()) return st;
  p.zone_capacity = u;
  if (!(st = cfg.GetU64("zone_count", &u)).ok()) return st;
  p.zone_count = static_cast<uint32_t>(u);
  if (!(st = cfg.GetDouble("seq_read_Bps", &p.seq_read_bps)).ok()) return st;
  if (!(st = cfg.GetDouble("seq_write_Bps", &p.seq_write_bps)).ok()) return st;
  if (!(st = cfg.GetDouble("rand_read_iops", &p.rand_read_iops)).ok()) return st;
  p.block_size = cfg.GetOr("block_size", uint64_t{4 * KiB}, &st);
  if (!st.ok()) return st;
  if (!(st = p.Validate()).ok()) return st;
  *out = p;
  return Status::OK();
}

ZonedDevice::ZonedDevice(std::string name, DeviceProfile profile, EventLoop* loop)
    : name_(std::move(name)), profile_(profile), loop_(loop) {
  assert(profile_.Validate().ok());
  zones_.resize(profile_.zone_count);
  data_.resize(profile_.zone_count);
  claimed_.assign(profile_.zone_count, false);
  for (uint32_t i = 0; i < profile_.zone_count; i++) {
    zones_[i].zone_id = i;
    zones_[i].capacity = profile_.zone_capacity;
  }
}

Status ZonedDevice::Append(uint32_t zone_id, std::span<const uint8_t> data,
                           uint64_t* offset) {
  if (zone_id >= zones_.size()) return Status::InvalidArgument("bad zone id");
  ZoneInfo& z = zones_[zone_id];
  if (z.cond() == ZoneCond::kFull) {
    return Status::ZoneNotWritable(name_ + " zone " + std::to_string(zone_id) +
                                   " is FULL");
  }
  if (z.write_pointer + data.size() > z.capacity) {
    return Status::ZoneFull(name_ + " zone " + std::to_string(zone_id) +
                            ": append of " + std::to_string(data.size()) +
                            " exceeds capacity");
  }
  if (offset) *offset = z.write_pointer;
  if (data.empty()) return Status::OK();
  std::vector<uint8_t>& buf = data_[zone_id];
  if (buf.size() < z.write_pointer + data.size()) {
    buf.resize(z.write_pointer + data.size());
  }
  std::memcpy(buf.data() + z.write_pointer, data.data(), data.size());
  z.write_pointer += data.size();
  bytes_written_ += data.size();
  claimed_[zone_id] = false;
  return Status::OK();
}

Status ZonedDevice::Read(uint32_t zone_id, uint64_t offset, uint64_t len,
                         std::vector<uint8_t>* out) const {
  if (zone_id >= zones_.size()) return Status::InvalidArgument("bad zone id");
  const ZoneInfo& z = zones_[zone_id];
  if (offset + len > z.write_pointer) {
    return Status::ReadBeyondWritePointer(
        name_ + " zone " + std::to_string(zone_id) + ": [" +
        std::to_string(offset) + "," + std::to_string(offset + len) +
        ") beyond wp " + std::to_string(z.write_pointer));
  }
  out->resize(len);
  if (len > 0) {
    std::memcpy(out->data(), data_[zone_id].data() + offset, len);
  }
  const_cast<ZonedDevice*>(this)->bytes_read_ += len;
  return Status::OK();
}

Status ZonedDevice::ResetZone(uint32_t zone_id) {
  if (zone_id >= zones_.size()) return Status::InvalidArgument("bad zone id");
  zones_[zone_id].write_pointer = 0;
  data_[zone_id].clear();
  data_[zone_id].shrink_to_fit();
  claimed_[zone_id] = false;
  return Status::OK();
}

SimTime ZonedDevice::ServiceTime(IoKind kind, uint64_t size) const {
  switch (kind) {
    case IoKind::kSeqRead:
      return static_cast<double>(size) * (1.0 / profile_.seq_read_bps);
    case IoKind::kSeqWrite:
      return static_cast<double>(size) * (1.0 / profile_.seq_write_bps);
    case IoKind::kRandRead: {
      uint64_t blocks = (size + profile_.block_size - 1) / profile_.block_size;
      return static_cast<double>(blocks) * (1.0 / profile_.rand_read_iops);
    }
  }
  return 0;
}

SimTime ZonedDevice::Occupy(IoKind kind, uint64_t size, SimTime not_before) {
  SimTime start = not_before > busy_until_ ? not_before : busy_until_;
  busy_until_ = start + ServiceTime(kind, size);
  return busy_until_;
}

std::optional<uint32_t> ZonedDevice::ClaimEmptyZone() {
  for (uint32_t i = 0; i < zones_.size(); i++) {
    if (zones_[i].write_pointer == 0 && !claimed_[i]) {
      claimed_[i] = true;
      return i;
    }
  }
  return std::nullopt;
}

void ZonedDevice::ReleaseClaim(uint32_t zone_id) {
  if (zone_id < claimed_.size()) claimed_[zone_id] = false;
}

uint32_t ZonedDevice::EmptyUnclaimedCount() const {
  uint32_t n = 0;
  for (uint32_t i = 0; i < zones_.size(); i++) {
    if (zones_[i].write_pointer == 0 && !claimed_[i]) n++;
  }
  return n;
}

uint64_t ZonedDevice::OccupiedBytes() const {
  uint64_t total = 0;
  for (const ZoneInfo& z : zones_) total += z.write_pointer;
  return total;
}

}  // namespace hzkv
