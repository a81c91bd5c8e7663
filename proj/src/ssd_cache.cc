#include "hzkv/ssd_cache.h"

#include <cassert>

namespace hzkv {

std::optional<WalTarget> SsdCache::AcquireWalZone() {
  if (wal_zones_ + cache_zones() >= total_reserved_) {
    // Reclaim cache space ahead of WAL need.
    uint32_t reclaimed = 0;
    if (!EvictOldestZone(&reclaimed).ok()) return std::nullopt;
  }
  std::optional<uint32_t> z = ssd_->ClaimEmptyZone();
  if (!z) return std::nullopt;
  wal_zones_++;
  return WalTarget{ssd_, *z};
}

bool SsdCache::CanAcquireWalZone() const {
  if (wal_zones_ + cache_zones() < total_reserved_) {
    return ssd_->EmptyUnclaimedCount() > 0;
  }
  return cache_zones() > 0;
}

void SsdCache::ReleaseWalZone(ZonedDevice* dev, uint32_t zone) {
  (void)dev;
  (void)zone;
  assert(wal_zones_ > 0);
  wal_zones_--;
}

void SsdCache::OnHint(const Hint& hint) {
  const auto* ev = std::get_if<CacheEvictHint>(&hint);
  if (!ev) return;
  Admit(ev->sst_id, ev->block_offset, ev->block_payload);
}

bool SsdCache::EnsureActiveZone(uint64_t need_bytes) {
  if (active_zone_) {
    const ZoneInfo& z = ssd_->zone(*active_zone_);
    if (z.write_pointer + need_bytes <= z.capacity) return true;
    active_zone_.reset();  // zone full for this block; stays in zone_order_
  }
  if (wal_zones_ + cache_zones() < total_reserved_) {
    std::optional<uint32_t> z = ssd_->ClaimEmptyZone();
    if (z) {
      active_zone_ = *z;
      zone_order_.push_back(*z);
      return true;
    }
    return false;
  }
  // Budget exhausted: make room by evicting the oldest cache zone.
  uint32_t reclaimed = 0;
  if (!EvictOldestZone(&reclaimed).ok()) return false;
  std::optional<uint32_t> z = ssd_->ClaimEmptyZone();
  if (!z) return false;
  active_zone_ = *z;
  zone_order_.push_back(*z);
  return true;
}

SsdCache::AdmitResult SsdCache::Admit(uint64_t sst_id, uint64_t block_offset,
                                      std::span<const uint8_t> block) {
  if (!enabled_ || block.empty()) {
    stats_.discards++;
    return AdmitResult::kDiscarded;
  }
  const SstMeta* meta = live_ ? live_(sst_id) : nullptr;
  if (!meta || meta->location.device != DeviceKind::kHdd) {
    stats_.discards++;
    return AdmitResult::kDiscarded;
  }
  Key key{sst_id, block_offset};
  if (map_.count(key)) {
    stats_.discards++;
    return AdmitResult::kDiscarded;
  }
  if (!EnsureActiveZone(block.size())) {
    stats_.discards++;
    return AdmitResult::kDiscarded;
  }
  uint64_t offset = 0;
  Status st = ssd_->Append(*active_zone_, block, &offset);
  assert(st.ok());
  (void)st;
  traffic_->cache_admit_write += block.size();
  ssd_->Occupy(IoKind::kSeqWrite, block.size());  // off the foreground path
  fifo_.push_back(key);
  Slot slot;
  slot.zone = *active_zone_;
  slot.zone_offset = offset;
  slot.length = static_cast<uint32_t>(block.size());
  slot.queue_it = std::prev(fifo_.end());
  map_.emplace(key, slot);
  stats_.admissions++;
  return AdmitResult::kAdmitted;
}

std::optional<std::vector<uint8_t>> SsdCache::Lookup(uint64_t sst_id,
                                                     uint64_t block_offset,
                                                     SimTime not_before,
                                                     SimTime* done) {
  auto it = map_.find({sst_id, block_offset});
  if (it == map_.end()) {
    stats_.misses++;
    return std::nullopt;
  }
  const SstMeta* meta = live_ ? live_(sst_id) : nullptr;
  if (!meta || meta->location.device != DeviceKind::kHdd) {
    // SST deleted or moved to the SSD since admission.
    DropEntry(it);
    stats_.invalidations++;
    stats_.misses++;
    return std::nullopt;
  }
  std::vector<uint8_t> bytes;
  Status st = ssd_->Read(it->second.zone, it->second.zone_offset,
                         it->second.length, &bytes);
  assert(st.ok());
  (void)st;
  *done = ssd_->Occupy(IoKind::kRandRead, it->second.length, not_before);
  stats_.hits++;
  return bytes;
}

void SsdCache::DropEntry(std::map<Key, Slot>::iterator it) {
  fifo_.erase(it->second.queue_it);
  map_.erase(it);
}

Status SsdCache::EvictOldestZone(uint32_t* reclaimed) {
  if (zone_order_.empty()) {
    return Status::NoCacheZone("no cache zone to evict");
  }
  uint32_t victim = zone_order_.front();
  zone_order_.pop_front();
  if (active_zone_ && *active_zone_ == victim) active_zone_.reset();
  // Entries of one zone occupy a contiguous prefix of the FIFO queue.
  while (!fifo_.empty()) {
    auto it = map_.find(fifo_.front());
    assert(it != map_.end());
    if (it->second.zone != victim) break;
    map_.erase(it);
    fifo_.pop_front();
  }
  ssd_->ResetZone(victim);
  stats_.zone_evictions++;
  if (reclaimed) *reclaimed = victim;
  return Status::OK();
}

bool SsdCache::CheckBijection() const {
  if (map_.size() != fifo_.size()) return false;
  for (const Key& k : fifo_) {
    auto it = map_.find(k);
    if (it == map_.end()) return false;
    if (&*it->second.queue_it != &k) return false;
  }
  return true;
}

}  // namespace hzkv
