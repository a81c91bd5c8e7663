#include "hzkv/wal.h"

#include <cassert>

namespace hzkv {

bool WriteAheadLog::CanAppend(uint64_t record_bytes) const {
  if (!zones_.empty()) {
    const LogZone& tail = zones_.back();
    const ZoneInfo& z = tail.dev->zone(tail.zone);
    if (z.write_pointer + record_bytes <= z.capacity) return true;
  }
  return provider_->CanAcquireWalZone();
}

Status WriteAheadLog::Append(const sst::Entry& e, uint64_t memtable_gen,
                             SimTime not_before, SimTime* done) {
  std::vector<uint8_t> rec;
  sst::AppendEntry(&rec, e);
  LogZone* tail = zones_.empty() ? nullptr : &zones_.back();
  if (tail) {
    const ZoneInfo& z = tail->dev->zone(tail->zone);
    if (z.write_pointer + rec.size() > z.capacity) tail = nullptr;
  }
  if (!tail) {
    std::optional<WalTarget> t = provider_->AcquireWalZone();
    if (!t) {
      return Status::StoreFull("no WAL zone available");
    }
    zones_.push_back(LogZone{t->device, t->zone, {}});
    tail = &zones_.back();
  }
  Status st = tail->dev->Append(tail->zone, rec, nullptr);
  if (!st.ok()) return st;
  tail->outstanding[memtable_gen]++;
  stats_->wal_write[DevIdx(tail->dev->profile().kind)] += rec.size();
  *done = tail->dev->Occupy(IoKind::kSeqWrite, rec.size(), not_before);
  return Status::OK();
}

void WriteAheadLog::ReleaseGeneration(uint64_t gen) {
  for (LogZone& z : zones_) {
    z.outstanding.erase(gen);
  }
  ReclaimFront();
}

void WriteAheadLog::ReclaimFront() {
  // MemTables flush in order, so reclamation walks from the oldest zone. The
  // active tail is never reclaimed.
  while (zones_.size() > 1 && zones_.front().outstanding.empty()) {
    LogZone z = zones_.front();
    zones_.pop_front();
    z.dev->ResetZone(z.zone);
    provider_->ReleaseWalZone(z.dev, z.zone);
  }
  // A fully-flushed tail is reclaimed only once FULL; otherwise it keeps
  // taking appends.
  if (zones_.size() == 1 && zones_.front().outstanding.empty()) {
    const LogZone& tail = zones_.front();
    if (tail.dev->zone(tail.zone).cond() == ZoneCond::kFull) {
      LogZone z = zones_.front();
      zones_.pop_front();
      z.dev->ResetZone(z.zone);
      provider_->ReleaseWalZone(z.dev, z.zone);
    }
  }
}

uint64_t WriteAheadLog::TotalBytes() const {
  uint64_t total = 0;
  for (const LogZone& z : zones_) {
    total += z.dev->zone(z.zone).write_pointer;
  }
  return total;
}

std::vector<sst::Entry> WriteAheadLog::ReplayRecords() const {
  std::vector<sst::Entry> out;
  for (const LogZone& z : zones_) {
    const ZoneInfo& info = z.dev->zone(z.zone);
    std::vector<uint8_t> bytes;
    if (!z.dev->Read(z.zone, 0, info.write_pointer, &bytes).ok()) continue;
    size_t pos = 0;
    while (pos < bytes.size()) {
      sst::Entry e;
      size_t n = sst::DecodeEntry({bytes.data() + pos, bytes.size() - pos}, &e);
      if (n == 0) break;
      out.push_back(std::move(e));
      pos += n;
    }
  }
  return out;
}

}  // namespace hzkv
