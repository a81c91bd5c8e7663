#include "hzkv/migration.h"

#include <cassert>

namespace hzkv {

double SstReadRate(const SstMeta& meta, SimTime now) {
  SimTime age = now - meta.created_at;
  if (age < kAgeFloorSeconds) age = kAgeFloorSeconds;
  return static_cast<double>(meta.read_count) / age;
}

bool HigherPriority(const SstMeta& x, const SstMeta& y, SimTime now) {
  if (x.level != y.level) return x.level < y.level;
  double rx = SstReadRate(x, now);
  double ry = SstReadRate(y, now);
  if (rx != ry) return rx > ry;
  return x.sst_id < y.sst_id;
}

MigrationEngine::MigrationEngine(EventLoop* loop, LsmStore* store,
                                 HintedPlacement* placement, ZonedDevice* ssd,
                                 ZonedDevice* hdd, double rate_bytes_per_sec,
                                 TrafficStats* traffic)
    : loop_(loop),
      store_(store),
      placement_(placement),
      ssd_(ssd),
      hdd_(hdd),
      limiter_(rate_bytes_per_sec),
      traffic_(traffic) {}

void MigrationEngine::Start() {
  running_ticks_ = true;
  if (!tick_scheduled_) {
    tick_scheduled_ = true;
    loop_->ScheduleAfter(1.0, [this] { Tick(); });
  }
}

void MigrationEngine::Tick() {
  tick_scheduled_ = false;
  if (!running_ticks_) return;
  StepChecks();
  tick_scheduled_ = true;
  loop_->ScheduleAfter(1.0, [this] { Tick(); });
}

void MigrationEngine::Poke() { StepChecks(); }

void MigrationEngine::StepChecks() {
  if (active_ || !queue_.empty()) return;  // one decision at a time
  if (QueueCapacityMove()) {
    StartNext();
    return;
  }
  if (QueuePopularityMove()) {
    StartNext();
  }
}

bool MigrationEngine::QueueCapacityMove() {
  TieringDecision t = placement_->CurrentTiering();
  if (t.all_ssd) return false;
  SimTime now = loop_->Now();
  int at_tiering_in_ssd = 0;
  bool above_tiering_in_ssd = false;
  for (const auto& [id, meta] : store_->ssts()) {
    if (meta->location.device != DeviceKind::kSsd) continue;
    if (meta->level == t.level) at_tiering_in_ssd++;
    if (meta->level > t.level) above_tiering_in_ssd = true;
  }
  if (at_tiering_in_ssd <= t.reserved_slots && !above_tiering_in_ssd) {
    return false;
  }
  const SstMeta* victim = nullptr;
  for (const auto& [id, meta] : store_->ssts()) {
    if (meta->location.device != DeviceKind::kSsd) continue;
    if (meta->selected_for_compaction || meta->migrating) continue;
    if (!victim || HigherPriority(*victim, *meta, now)) victim = meta.get();
  }
  if (!victim) return false;
  Job job;
  job.job_id = next_job_id_++;
  job.sst_id = victim->sst_id;
  job.to = DeviceKind::kHdd;
  store_->FindSst(victim->sst_id)->migrating = true;
  queue_.push_back(job);
  return true;
}

int64_t MigrationEngine::DemandBelowTiering(const TieringDecision& t) const {
  const LevelLedger* ledger = placement_->ledger();
  int64_t demand = 0;
  for (int j = 0; j < t.level && j < ledger->level_count(); j++) {
    demand += (j == 0) ? ledger->wal_zones_in_use : ledger->demand[j];
  }
  return demand;
}

bool MigrationEngine::QueuePopularityMove() {
  SimTime now = loop_->Now();
  double hdd_rate = 0;
  for (const auto& [id, meta] : store_->ssts()) {
    if (meta->location.device == DeviceKind::kHdd) {
      hdd_rate += SstReadRate(*meta, now);
    }
  }
  if (hdd_rate <= 0.5 * hdd_->profile().rand_read_iops) return false;
  const SstMeta* hot = nullptr;
  for (const auto& [id, meta] : store_->ssts()) {
    if (meta->location.device != DeviceKind::kHdd) continue;
    if (meta->selected_for_compaction || meta->migrating) continue;
    if (!hot || HigherPriority(*meta, *hot, now)) hot = meta.get();
  }
  if (!hot) return false;
  TieringDecision t = placement_->CurrentTiering();
  const LevelLedger* ledger = placement_->ledger();
  int64_t empty_for_ssts =
      static_cast<int64_t>(ledger->ssd_budget) - placement_->allocated_total();
  if (empty_for_ssts > DemandBelowTiering(t)) {
    Job in;
    in.job_id = next_job_id_++;
    in.sst_id = hot->sst_id;
    in.to = DeviceKind::kSsd;
    store_->FindSst(hot->sst_id)->migrating = true;
    queue_.push_back(in);
    return true;
  }
  // Swap with the lowest-priority SSD-resident SST.
  const SstMeta* cold = nullptr;
  for (const auto& [id, meta] : store_->ssts()) {
    if (meta->location.device != DeviceKind::kSsd) continue;
    if (meta->selected_for_compaction || meta->migrating) continue;
    if (!cold || HigherPriority(*cold, *meta, now)) cold = meta.get();
  }
  if (!cold) return false;
  Job in;
  in.job_id = next_job_id_++;
  in.sst_id = hot->sst_id;
  in.to = DeviceKind::kSsd;
  Job out;
  out.job_id = next_job_id_++;
  out.sst_id = cold->sst_id;
  out.to = DeviceKind::kHdd;
  store_->FindSst(hot->sst_id)->migrating = true;
  store_->FindSst(cold->sst_id)->migrating = true;
  // Copy in first only when a zone can be granted without breaching the
  // ledger budget; otherwise free the zone first.
  if (placement_->CanGrantSsdZone()) {
    queue_.push_back(in);
    queue_.push_back(out);
  } else {
    queue_.push_back(out);
    queue_.push_back(in);
  }
  return true;
}

void MigrationEngine::StartNext() {
  while (!active_ && !queue_.empty()) {
    Job job = queue_.front();
    queue_.pop_front();
    SstMeta* meta = store_->FindSst(job.sst_id);
    if (!meta || meta->selected_for_compaction) {
      if (meta) meta->migrating = false;
      continue;
    }
    ActiveCopy copy;
    copy.job = job;
    copy.meta = meta;
    copy.level = meta->level;
    copy.total = meta->data_size;
    copy.start = loop_->Now();
    if (job.to == DeviceKind::kSsd) {
      std::optional<uint32_t> z = placement_->TryGrantSsdZone(meta->level);
      if (!z) {
        meta->migrating = false;
        continue;  // state changed while queued; re-picked at the next check
      }
      copy.dest.device = ssd_;
      copy.dest.zones = {*z};
      copy.granted_ssd = true;
    } else {
      if (!ClaimZonesFor(hdd_, meta->data_size, &copy.dest).ok()) {
        meta->migrating = false;
        continue;
      }
    }
    active_ = std::move(copy);
    ChunkStep();
    return;
  }
}

void MigrationEngine::ChunkStep() {
  assert(active_);
  ActiveCopy& c = *active_;
  if (c.aborted) {
    FinishActive(true);
    return;
  }
  if (c.file_pos >= c.total) {
    FinishActive(false);
    return;
  }
  uint64_t len = std::min<uint64_t>(kChunkBytes, c.total - c.file_pos);
  SimTime issue = limiter_.Grant(len, loop_->Now());
  chunk_log_.emplace_back(issue, len);
  ZonedDevice* src = c.meta->location.device == DeviceKind::kSsd ? ssd_ : hdd_;
  ZonedDevice* dst = c.dest.device;
  // Copy chunk bytes across source/destination extents.
  uint64_t copied = 0;
  while (copied < len) {
    uint64_t off = c.file_pos + copied;
    size_t src_idx = static_cast<size_t>(off / c.meta->location.zone_capacity);
    uint64_t src_off = off % c.meta->location.zone_capacity;
    uint64_t src_room = c.meta->location.zone_capacity - src_off;
    size_t dst_idx = static_cast<size_t>(off / dst->zone_capacity());
    uint64_t dst_off = off % dst->zone_capacity();
    uint64_t dst_room = dst->zone_capacity() - dst_off;
    uint64_t take = std::min({len - copied, src_room, dst_room});
    std::vector<uint8_t> bytes;
    Status st = src->Read(c.meta->location.zones[src_idx], src_off, take, &bytes);
    assert(st.ok());
    (void)st;
    uint64_t at = 0;
    st = dst->Append(c.dest.zones[dst_idx], bytes, &at);
    assert(st.ok());
    assert(at == dst_off);
    (void)at;
    copied += take;
  }
  SimTime rd_done = src->Occupy(IoKind::kSeqRead, len, issue);
  SimTime wr_done = dst->Occupy(IoKind::kSeqWrite, len, rd_done);
  traffic_->migration_read[DevIdx(src->profile().kind)] += len;
  traffic_->migration_write[DevIdx(dst->profile().kind)] += len;
  c.file_pos += len;
  loop_->Schedule(wr_done, [this] { ChunkStep(); });
}

void MigrationEngine::FinishActive(bool aborted) {
  ActiveCopy c = std::move(*active_);
  active_.reset();
  MigrationRecord rec;
  rec.job_id = c.job.job_id;
  rec.sst_id = c.job.sst_id;
  rec.to = c.job.to;
  rec.from = c.job.to == DeviceKind::kSsd ? DeviceKind::kHdd : DeviceKind::kSsd;
  rec.start = c.start;
  rec.end = loop_->Now();
  rec.bytes = c.file_pos;
  rec.aborted = aborted;
  log_.push_back(rec);
  if (aborted) {
    // Copy discarded: destination zones reclaimed, ledger grant withdrawn.
    for (uint32_t z : c.dest.zones) c.dest.device->ResetZone(z);
    if (c.granted_ssd) placement_->WithdrawSsdGrant(c.level);
    if (c.meta) c.meta->migrating = false;
  } else {
    store_->CommitMigration(c.meta, c.job.to, c.dest.zones);
  }
  StartNext();
  if (idle()) StepChecks();
}

void MigrationEngine::OnSstDeleted(uint64_t sst_id) {
  if (active_ && active_->job.sst_id == sst_id) {
    active_->aborted = true;
    active_->meta = nullptr;
    return;
  }
  for (auto it = queue_.begin(); it != queue_.end();) {
    if (it->sst_id == sst_id) {
      it = queue_.erase(it);
    } else {
      ++it;
    }
  }
}

void MigrationEngine::OnSstSelected(uint64_t sst_id) {
  if (active_ && active_->job.sst_id == sst_id) {
    active_->aborted = true;  // meta stays live until the compaction ends
  }
  for (auto it = queue_.begin(); it != queue_.end();) {
    if (it->sst_id == sst_id) {
      if (SstMeta* m = store_->FindSst(sst_id)) m->migrating = false;
      it = queue_.erase(it);
    } else {
      ++it;
    }
  }
}

}  // namespace hzkv
