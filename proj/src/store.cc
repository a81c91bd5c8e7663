#include "hzkv/store.h"

#include <algorithm>
#include <cassert>
#include <set>

namespace hzkv {

LsmStore::LsmStore(EventLoop* loop, ZonedDevice* ssd, ZonedDevice* hdd,
                   StoreConfig config, HintBus* bus, PlacementPolicy* policy,
                   WalZoneProvider* wal_provider, TrafficStats* traffic)
    : loop_(loop),
      ssd_(ssd),
      hdd_(hdd),
      config_(config),
      bus_(bus),
      policy_(policy),
      traffic_(traffic),
      wal_(wal_provider, traffic),
      block_cache_(config.block_cache_bytes,
                   [this](uint64_t sst_id, uint64_t offset,
                          std::vector<uint8_t> block) {
                     CacheEvictHint h;
                     h.sst_id = sst_id;
                     h.block_offset = offset;
                     h.block_payload = std::move(block);
                     PublishOrDie(Hint{std::move(h)});
                   }) {
  active_ = std::make_shared<MemTable>();
  active_gen_ = next_gen_++;
  levels_.resize(config_.level_count);
  level_locked_.assign(config_.level_count, false);
}

void LsmStore::PublishOrDie(const Hint& hint) {
  Status st = bus_->Publish(hint);
  if (!st.ok()) {
    assert(false && "hint protocol violation from the store");
    FailStore(st);
  }
}

void LsmStore::FailStore(const Status& st) {
  if (failed_.ok()) failed_ = st;
}

Status LsmStore::Put(const std::string& key, const std::string& value) {
  sst::Entry e;
  e.key = key;
  e.value = value;
  e.seqno = next_seqno_++;
  return PutEntry(std::move(e));
}

Status LsmStore::Delete(const std::string& key) {
  sst::Entry e;
  e.key = key;
  e.tombstone = true;
  e.seqno = next_seqno_++;
  return PutEntry(std::move(e));
}

Status LsmStore::PutEntry(sst::Entry e) {
  if (!failed_.ok()) return failed_;
  if (e.key.empty()) return Status::InvalidArgument("empty key");
  uint64_t rec_len = sst::EncodedSize(e);
  if (rec_len > sst::kBlockSize) {
    return Status::InvalidArgument("object larger than a data block");
  }
  SimTime t0 = loop_->Now();
  SimTime t = t0;
  if (!wal_.CanAppend(rec_len)) {
    // All reserved zones hold unflushed records: stall until a flush frees
    // one, forcing a flush if none is coming.
    ScheduleFlushes(true);
    DispatchPending();
    bool ok = loop_->RunUntilCondition(
        [&] { return !failed_.ok() || wal_.CanAppend(rec_len); });
    if (!failed_.ok()) return failed_;
    if (!ok) {
      FailStore(Status::StoreFull("WAL stalled with no background progress"));
      return failed_;
    }
    t = loop_->Now();
  }
  Status st = wal_.Append(e, active_gen_, t, &t);
  if (!st.ok()) {
    FailStore(st);
    return failed_;
  }
  active_->Put(std::move(e));
  if (active_->ApproximateBytes() >= config_.memtable_bytes) {
    if (static_cast<int>(immutables_.size()) >= config_.max_memtables - 1) {
      // Write stall: too many MemTables in memory.
      ScheduleFlushes(true);
      DispatchPending();
      bool ok = loop_->RunUntilCondition([&] {
        return !failed_.ok() ||
               static_cast<int>(immutables_.size()) < config_.max_memtables - 1;
      });
      if (!failed_.ok()) return failed_;
      if (!ok) {
        FailStore(Status::StoreFull("MemTable stall with no background progress"));
        return failed_;
      }
      if (loop_->Now() > t) t = loop_->Now();
    }
    SealActiveMemTable();
    DispatchPending();
  }
  loop_->RunUntil(t);
  last_op_duration_ = t - t0;
  return Status::OK();
}

void LsmStore::SealActiveMemTable() {
  if (active_->empty()) return;
  Immutable im;
  im.gen = active_gen_;
  im.table = active_;
  immutables_.push_back(std::move(im));
  active_ = std::make_shared<MemTable>();
  active_gen_ = next_gen_++;
  ScheduleFlushes(false);
}

void LsmStore::ScheduleFlushes(bool force_one) {
  bool trigger =
      static_cast<int>(immutables_.size()) >= config_.flush_trigger_memtables;
  if (trigger) {
    for (Immutable& im : immutables_) {
      if (im.flush_scheduled) continue;
      im.flush_scheduled = true;
      auto job = std::make_shared<FlushJob>();
      job->gen = im.gen;
      job->table = im.table;
      pending_flushes_.push_back(std::move(job));
    }
    return;
  }
  if (!force_one) return;
  for (const Immutable& im : immutables_) {
    if (im.flush_scheduled) return;  // progress already under way
  }
  if (immutables_.empty()) {
    if (active_->empty()) return;
    SealActiveMemTable();
    if (immutables_.empty() || immutables_.back().flush_scheduled) return;
  }
  Immutable& im = immutables_.front();
  im.flush_scheduled = true;
  auto job = std::make_shared<FlushJob>();
  job->gen = im.gen;
  job->table = im.table;
  pending_flushes_.push_back(std::move(job));
}

void LsmStore::MaybeScheduleBackground() {
  if (!failed_.ok()) return;
  ScheduleFlushes(false);
  MaybeScheduleCompaction();
  DispatchPending();
}

void LsmStore::MaybeScheduleCompaction() {
  for (;;) {
    double best_score = 1.0;
    int pick = -1;
    for (int i = 0; i + 1 < config_.level_count; i++) {
      if (level_locked_[i] || level_locked_[i + 1]) continue;
      uint64_t bytes = LevelBytes(i);
      uint64_t target = config_.TargetBytes(i);
      if (bytes <= target) continue;
      double score = static_cast<double>(bytes) / static_cast<double>(target);
      if (score > best_score) {
        best_score = score;
        pick = i;
      }
    }
    if (pick < 0) return;
    // L0 picks the SST with the oldest data (smallest max seqno) so newer
    // versions never sink below older ones; higher levels pick by age.
    SstMeta* input = nullptr;
    for (SstMeta* m : levels_[pick]) {
      if (m->selected_for_compaction) continue;
      if (!input) {
        input = m;
        continue;
      }
      bool better;
      if (pick == 0) {
        better = m->max_seqno < input->max_seqno;
      } else {
        better = m->created_at < input->created_at ||
                 (m->created_at == input->created_at && m->sst_id < input->sst_id);
      }
      if (better) input = m;
    }
    if (!input) return;
    auto job = std::make_shared<CompactionJob>();
    job->cid = next_compaction_id_++;
    job->input_level = pick;
    job->inputs.push_back(input);
    for (SstMeta* m : levels_[pick + 1]) {
      if (m->max_key >= input->min_key && m->min_key <= input->max_key) {
        assert(!m->selected_for_compaction);
        job->inputs.push_back(m);
      }
    }
    for (SstMeta* m : job->inputs) {
      m->selected_for_compaction = true;
      if (on_sst_selected) on_sst_selected(m->sst_id);
    }
    level_locked_[pick] = true;
    level_locked_[pick + 1] = true;
    pending_compactions_.push_back(std::move(job));
  }
}

void LsmStore::DispatchPending() {
  while (failed_.ok() && active_jobs_ < config_.max_background_jobs) {
    if (!pending_flushes_.empty()) {
      auto job = pending_flushes_.front();
      pending_flushes_.pop_front();
      active_jobs_++;
      // Build the SST now; device writes are stepped by the loop.
      sst::Builder b(config_.bloom_bits_per_key);
      for (const auto& [key, entry] : job->table->entries()) {
        Status st = b.Add(entry);
        assert(st.ok());
        (void)st;
      }
      job->meta = std::make_unique<SstMeta>();
      job->meta->sst_id = next_sst_id_++;
      job->meta->level = 0;
      job->file = b.Finish();
      job->meta->min_key = b.min_key();
      job->meta->max_key = b.max_key();
      job->meta->data_size = job->file.size();
      job->meta->max_seqno = b.max_seqno();
      auto view = std::make_shared<sst::View>();
      Status vs = sst::View::Parse(job->file, view.get());
      assert(vs.ok());
      (void)vs;
      job->meta->view = std::move(view);
      PublishOrDie(Hint{FlushHint{job->meta->sst_id}});
      Status st = policy_->SelectSstTarget(*job->meta, WriteCause::Flush(),
                                           &job->target);
      if (!st.ok()) {
        FailStore(st);
        active_jobs_--;
        return;
      }
      job->meta->location = MakeLocation(job->target, job->file.size());
      job->extents = job->meta->location.Extents();
      StepFlush(job);
      continue;
    }
    if (!pending_compactions_.empty()) {
      auto job = pending_compactions_.front();
      pending_compactions_.pop_front();
      active_jobs_++;
      std::vector<uint64_t> ids;
      for (SstMeta* m : job->inputs) ids.push_back(m->sst_id);
      PublishOrDie(Hint{CompactionBeginHint{job->cid, ids,
                                            job->input_level + 1}});
      for (SstMeta* m : job->inputs) {
        for (const SstLocation::Extent& ext : m->location.Extents()) {
          job->reads.emplace_back(m, ext);
        }
      }
      StepCompactionRead(job);
      continue;
    }
    break;
  }
}

void LsmStore::StepFlush(std::shared_ptr<FlushJob> job) {
  if (!failed_.ok()) return;
  if (job->next_extent == job->extents.size()) {
    FinishFlush(std::move(job));
    return;
  }
  const SstLocation::Extent& ext = job->extents[job->next_extent++];
  ZonedDevice* dev = job->target.device;
  std::span<const uint8_t> chunk(job->file.data() + job->file_pos, ext.length);
  Status st = dev->Append(ext.zone, chunk, nullptr);
  assert(st.ok());
  (void)st;
  job->file_pos += ext.length;
  traffic_->AddSstWrite(0, dev->profile().kind, ext.length);
  SimTime done = dev->Occupy(IoKind::kSeqWrite, ext.length);
  loop_->Schedule(done, [this, job = std::move(job)]() mutable {
    StepFlush(std::move(job));
  });
}

void LsmStore::FinishFlush(std::shared_ptr<FlushJob> job) {
  job->meta->created_at = loop_->Now();
  InstallSstL0(std::move(job->meta));
  wal_.ReleaseGeneration(job->gen);
  for (auto it = immutables_.begin(); it != immutables_.end(); ++it) {
    if (it->gen == job->gen) {
      immutables_.erase(it);
      break;
    }
  }
  active_jobs_--;
  MaybeScheduleBackground();
  if (on_background_event) on_background_event();
}

void LsmStore::InstallSstL0(std::unique_ptr<SstMeta> meta) {
  SstMeta* raw = meta.get();
  auto& l0 = levels_[0];
  auto pos = std::lower_bound(l0.begin(), l0.end(), raw,
                              [](const SstMeta* a, const SstMeta* b) {
                                return a->max_seqno > b->max_seqno;
                              });
  l0.insert(pos, raw);
  ssts_[raw->sst_id] = std::move(meta);
}

void LsmStore::StepCompactionRead(std::shared_ptr<CompactionJob> job) {
  if (!failed_.ok()) return;
  if (job->next_read == job->reads.size()) {
    MergeAndPlanOutputs(job.get());
    StepCompactionWrite(std::move(job));
    return;
  }
  auto& [meta, ext] = job->reads[job->next_read++];
  ZonedDevice* dev = DeviceFor(meta->location.device);
  std::vector<uint8_t> chunk;
  Status st = dev->Read(ext.zone, ext.zone_offset, ext.length, &chunk);
  assert(st.ok());
  (void)st;
  auto& buf = job->input_bytes[meta->sst_id];
  buf.insert(buf.end(), chunk.begin(), chunk.end());
  traffic_->compaction_read[DevIdx(dev->profile().kind)] += ext.length;
  SimTime done = dev->Occupy(IoKind::kSeqRead, ext.length);
  loop_->Schedule(done, [this, job = std::move(job)]() mutable {
    StepCompactionRead(std::move(job));
  });
}

std::vector<sst::Entry> LsmStore::DecodeSstData(
    const SstMeta& meta, const std::vector<uint8_t>& file) const {
  std::vector<sst::Entry> out;
  uint64_t data_bytes = meta.view->data_bytes();
  for (uint64_t off = 0; off < data_bytes; off += sst::kBlockSize) {
    std::span<const uint8_t> block(file.data() + off, sst::kBlockSize);
    for (sst::Entry& e : sst::View::DecodeBlock(block)) {
      out.push_back(std::move(e));
    }
  }
  return out;
}

void LsmStore::MergeAndPlanOutputs(CompactionJob* job) {
  std::vector<sst::Entry> all;
  for (SstMeta* m : job->inputs) {
    std::vector<sst::Entry> entries = DecodeSstData(*m, job->input_bytes[m->sst_id]);
    for (sst::Entry& e : entries) all.push_back(std::move(e));
  }
  job->input_bytes.clear();
  std::stable_sort(all.begin(), all.end(),
                   [](const sst::Entry& a, const sst::Entry& b) {
                     if (a.key != b.key) return a.key < b.key;
                     return a.seqno > b.seqno;
                   });
  int output_level = job->input_level + 1;
  bool drop_tombstones = output_level == config_.level_count - 1;
  std::unique_ptr<sst::Builder> builder;
  auto close_output = [&]() {
    if (!builder || builder->entry_count() == 0) return;
    CompactionJob::Output out;
    out.file = builder->Finish();
    out.meta = std::make_unique<SstMeta>();
    out.meta->sst_id = next_sst_id_++;
    out.meta->level = output_level;
    out.meta->min_key = builder->min_key();
    out.meta->max_key = builder->max_key();
    out.meta->data_size = out.file.size();
    out.meta->max_seqno = builder->max_seqno();
    auto view = std::make_shared<sst::View>();
    Status vs = sst::View::Parse(out.file, view.get());
    assert(vs.ok());
    (void)vs;
    out.meta->view = std::move(view);
    job->outputs.push_back(std::move(out));
    builder.reset();
  };
  const std::string* last_key = nullptr;
  for (const sst::Entry& e : all) {
    if (last_key && e.key == *last_key) continue;  // shadowed version
    last_key = &e.key;
    if (e.tombstone && drop_tombstones) continue;
    if (builder && builder->entry_count() > 0 &&
        builder->ProjectedSizeWith(e) > config_.sst_target_bytes) {
      close_output();
    }
    if (!builder) builder = std::make_unique<sst::Builder>(config_.bloom_bits_per_key);
    Status st = builder->Add(e);
    assert(st.ok());
    (void)st;
  }
  close_output();
}

void LsmStore::StepCompactionWrite(std::shared_ptr<CompactionJob> job) {
  if (!failed_.ok()) return;
  while (job->next_output < job->outputs.size()) {
    CompactionJob::Output& out = job->outputs[job->next_output];
    if (!out.announced) {
      PublishOrDie(Hint{CompactionOutputHint{job->cid, out.meta->sst_id,
                                             job->input_level + 1}});
      Status st = policy_->SelectSstTarget(
          *out.meta, WriteCause::Compaction(job->input_level + 1), &out.target);
      if (!st.ok()) {
        FailStore(st);
        return;
      }
      out.meta->location = MakeLocation(out.target, out.file.size());
      out.extents = out.meta->location.Extents();
      out.announced = true;
    }
    if (out.next_extent == out.extents.size()) {
      job->produced_ids.push_back(out.meta->sst_id);
      job->next_output++;
      continue;
    }
    const SstLocation::Extent& ext = out.extents[out.next_extent++];
    ZonedDevice* dev = out.target.device;
    std::span<const uint8_t> chunk(out.file.data() + out.file_pos, ext.length);
    Status st = dev->Append(ext.zone, chunk, nullptr);
    assert(st.ok());
    (void)st;
    out.file_pos += ext.length;
    traffic_->AddSstWrite(job->input_level + 1, dev->profile().kind, ext.length);
    SimTime done = dev->Occupy(IoKind::kSeqWrite, ext.length);
    loop_->Schedule(done, [this, job = std::move(job)]() mutable {
      StepCompactionWrite(std::move(job));
    });
    return;
  }
  FinishCompaction(std::move(job));
}

void LsmStore::FinishCompaction(std::shared_ptr<CompactionJob> job) {
  int output_level = job->input_level + 1;
  for (CompactionJob::Output& out : job->outputs) {
    out.meta->created_at = loop_->Now();
    SstMeta* raw = out.meta.get();
    auto& lv = levels_[output_level];
    auto pos = std::lower_bound(lv.begin(), lv.end(), raw,
                                [](const SstMeta* a, const SstMeta* b) {
                                  return a->min_key < b->min_key;
                                });
    lv.insert(pos, raw);
    ssts_[raw->sst_id] = std::move(out.meta);
  }
  uint32_t selected_count = static_cast<uint32_t>(job->inputs.size());
  for (SstMeta* m : job->inputs) DeleteSst(m);
  PublishOrDie(Hint{CompactionEndHint{job->cid, selected_count,
                                      job->produced_ids}});
  level_locked_[job->input_level] = false;
  level_locked_[output_level] = false;
  active_jobs_--;
  MaybeScheduleBackground();
  if (on_background_event) on_background_event();
}

void LsmStore::DeleteSst(SstMeta* meta) {
  auto& lv = levels_[meta->level];
  lv.erase(std::find(lv.begin(), lv.end(), meta));
  policy_->OnSstDeleted(*meta);
  ZonedDevice* dev = DeviceFor(meta->location.device);
  for (uint32_t z : meta->location.zones) dev->ResetZone(z);
  if (on_sst_deleted) on_sst_deleted(meta->sst_id);
  ssts_.erase(meta->sst_id);
}

SstLocation LsmStore::MakeLocation(const PlacementDecision& d,
                                   uint64_t bytes) const {
  SstLocation loc;
  loc.device = d.device->profile().kind;
  loc.zones = d.zones;
  loc.total_bytes = bytes;
  loc.zone_capacity = d.device->zone_capacity();
  return loc;
}

SstMeta* LsmStore::FindSst(uint64_t sst_id) {
  auto it = ssts_.find(sst_id);
  return it == ssts_.end() ? nullptr : it->second.get();
}

uint64_t LsmStore::LevelBytes(int level) const {
  uint64_t total = 0;
  for (const SstMeta* m : levels_[level]) total += m->data_size;
  return total;
}

Status LsmStore::ReadDataBlock(SstMeta* meta, uint64_t block_offset,
                               SimTime not_before, SimTime* done,
                               std::vector<uint8_t>* out) {
  *done = not_before;
  if (const std::vector<uint8_t>* cached =
          block_cache_.Get(meta->sst_id, block_offset)) {
    *out = *cached;
    return Status::OK();
  }
  if (ssd_cache_ && meta->location.device == DeviceKind::kHdd) {
    std::optional<std::vector<uint8_t>> hit =
        ssd_cache_->Lookup(meta->sst_id, block_offset, not_before, done);
    if (hit) {
      meta->read_count++;
      traffic_->data_block_read[DevIdx(DeviceKind::kSsd)] += hit->size();
      block_cache_.Insert(meta->sst_id, block_offset, *hit);
      *out = std::move(*hit);
      return Status::OK();
    }
  }
  SstLocation::Extent ext = meta->location.Resolve(block_offset, sst::kBlockSize);
  ZonedDevice* dev = DeviceFor(meta->location.device);
  Status st = dev->Read(ext.zone, ext.zone_offset, ext.length, out);
  if (!st.ok()) return st;
  *done = dev->Occupy(IoKind::kRandRead, ext.length, not_before);
  meta->read_count++;
  traffic_->data_block_read[DevIdx(meta->location.device)] += ext.length;
  block_cache_.Insert(meta->sst_id, block_offset, *out);
  return Status::OK();
}

std::optional<std::string> LsmStore::Get(std::string_view key) {
  SimTime t0 = loop_->Now();
  SimTime t = t0;
  last_op_duration_ = 0;
  // MemTables, newest first.
  if (const sst::Entry* e = active_->Get(key)) {
    return e->tombstone ? std::nullopt : std::make_optional(e->value);
  }
  for (auto it = immutables_.rbegin(); it != immutables_.rend(); ++it) {
    if (const sst::Entry* e = it->table->Get(key)) {
      return e->tombstone ? std::nullopt : std::make_optional(e->value);
    }
  }
  std::optional<std::string> result;
  bool decided = false;
  auto search_sst = [&](SstMeta* m) -> bool {
    if (key < m->min_key || key > m->max_key) return false;
    if (!m->view->MayContain(key)) return false;
    std::optional<uint64_t> block_off = m->view->FindBlock(key);
    if (!block_off) return false;
    std::vector<uint8_t> block;
    Status st = ReadDataBlock(m, *block_off, t, &t, &block);
    assert(st.ok());
    (void)st;
    std::vector<sst::Entry> entries = sst::View::DecodeBlock(block);
    auto it = std::lower_bound(entries.begin(), entries.end(), key,
                               [](const sst::Entry& e, std::string_view k) {
                                 return e.key < k;
                               });
    if (it == entries.end() || it->key != key) return false;
    if (!it->tombstone) result = it->value;
    decided = true;
    return true;
  };
  // L0 newest data first.
  for (SstMeta* m : levels_[0]) {
    if (search_sst(m)) break;
  }
  if (!decided) {
    for (int level = 1; level < config_.level_count && !decided; level++) {
      auto& lv = levels_[level];
      auto it = std::lower_bound(lv.begin(), lv.end(), key,
                                 [](const SstMeta* m, std::string_view k) {
                                   return m->max_key < k;
                                 });
      if (it == lv.end()) continue;
      search_sst(*it);
    }
  }
  loop_->RunUntil(t);
  last_op_duration_ = t - t0;
  return result;
}

namespace {

struct ScanSource {
  virtual ~ScanSource() = default;
  virtual bool Valid() const = 0;
  virtual const sst::Entry& Cur() const = 0;
  virtual void Next() = 0;
};

struct MemSource : ScanSource {
  std::map<std::string, sst::Entry>::const_iterator it, end;
  MemSource(const std::map<std::string, sst::Entry>& m, std::string_view start) {
    it = m.lower_bound(std::string(start));
    end = m.end();
  }
  bool Valid() const override { return it != end; }
  const sst::Entry& Cur() const override { return it->second; }
  void Next() override { ++it; }
};

struct SstSource : ScanSource {
  LsmStore* store;
  SstMeta* meta;
  SimTime* t;
  size_t index_pos = 0;
  std::vector<sst::Entry> entries;
  size_t eidx = 0;
  bool valid = false;

  SstSource(LsmStore* s, SstMeta* m, std::string_view start, SimTime* time)
      : store(s), meta(m), t(time) {
    const auto& index = meta->view->index();
    auto it = std::lower_bound(index.begin(), index.end(), start,
                               [](const sst::IndexEntry& ie, std::string_view k) {
                                 return ie.last_key < k;
                               });
    index_pos = static_cast<size_t>(it - index.begin());
    if (index_pos >= index.size()) return;
    LoadBlock();
    while (valid && entries[eidx].key < start) AdvanceEntry();
  }

  void LoadBlock() {
    const auto& index = meta->view->index();
    std::vector<uint8_t> block;
    Status st = store->ReadDataBlock(meta, index[index_pos].offset, *t, t, &block);
    assert(st.ok());
    (void)st;
    entries = sst::View::DecodeBlock(block);
    eidx = 0;
    valid = !entries.empty();
  }

  void AdvanceEntry() {
    eidx++;
    if (eidx < entries.size()) return;
    index_pos++;
    if (index_pos < meta->view->index().size()) {
      LoadBlock();
    } else {
      valid = false;
    }
  }

  bool Valid() const override { return valid; }
  const sst::Entry& Cur() const override { return entries[eidx]; }
  void Next() override { AdvanceEntry(); }
};

// Walks a run of key-disjoint SSTs in key order, opening one SST at a time.
struct LevelSource : ScanSource {
  LsmStore* store;
  std::vector<SstMeta*> ssts;
  SimTime* t;
  std::string start;
  size_t sst_idx = 0;
  std::unique_ptr<SstSource> inner;

  LevelSource(LsmStore* s, const std::vector<SstMeta*>& level,
              std::string_view start_key, SimTime* time)
      : store(s), ssts(level), t(time), start(start_key) {
    auto it = std::lower_bound(ssts.begin(), ssts.end(), start_key,
                               [](const SstMeta* m, std::string_view k) {
                                 return m->max_key < k;
                               });
    sst_idx = static_cast<size_t>(it - ssts.begin());
    OpenCurrent();
  }

  void OpenCurrent() {
    inner.reset();
    while (sst_idx < ssts.size()) {
      inner = std::make_unique<SstSource>(store, ssts[sst_idx], start, t);
      if (inner->Valid()) return;
      inner.reset();
      sst_idx++;
    }
  }

  bool Valid() const override { return inner && inner->Valid(); }
  const sst::Entry& Cur() const override { return inner->Cur(); }
  void Next() override {
    inner->Next();
    if (!inner->Valid()) {
      sst_idx++;
      OpenCurrent();
    }
  }
};

}  // namespace

std::vector<std::pair<std::string, std::string>> LsmStore::Scan(
    std::string_view start, size_t count) {
  SimTime t0 = loop_->Now();
  SimTime t = t0;
  std::vector<std::pair<std::string, std::string>> result;
  if (count == 0) {
    last_op_duration_ = 0;
    return result;
  }
  std::vector<std::unique_ptr<ScanSource>> sources;
  sources.push_back(std::make_unique<MemSource>(active_->entries(), start));
  for (const Immutable& im : immutables_) {
    sources.push_back(std::make_unique<MemSource>(im.table->entries(), start));
  }
  for (SstMeta* m : levels_[0]) {
    if (m->max_key < start) continue;
    auto src = std::make_unique<SstSource>(this, m, start, &t);
    if (src->Valid()) sources.push_back(std::move(src));
  }
  for (int level = 1; level < config_.level_count; level++) {
    auto src = std::make_unique<LevelSource>(this, levels_[level], start, &t);
    if (src->Valid()) sources.push_back(std::move(src));
  }
  while (result.size() < count) {
    const std::string* min_key = nullptr;
    for (const auto& s : sources) {
      if (!s->Valid()) continue;
      if (!min_key || s->Cur().key < *min_key) min_key = &s->Cur().key;
    }
    if (!min_key) break;
    std::string key = *min_key;
    const sst::Entry* winner = nullptr;
    for (const auto& s : sources) {
      if (!s->Valid() || s->Cur().key != key) continue;
      if (!winner || s->Cur().seqno > winner->seqno) winner = &s->Cur();
    }
    if (!winner->tombstone) result.emplace_back(key, winner->value);
    for (const auto& s : sources) {
      while (s->Valid() && s->Cur().key == key) s->Next();
    }
  }
  loop_->RunUntil(t);
  last_op_duration_ = t - t0;
  return result;
}

void LsmStore::CommitMigration(SstMeta* meta, DeviceKind to,
                               std::vector<uint32_t> dest_zones) {
  DeviceKind from = meta->location.device;
  std::vector<uint32_t> old_zones = meta->location.zones;
  ZonedDevice* old_dev = DeviceFor(from);
  meta->location.device = to;
  meta->location.zones = std::move(dest_zones);
  meta->location.zone_capacity = DeviceFor(to)->zone_capacity();
  meta->migrating = false;
  for (uint32_t z : old_zones) old_dev->ResetZone(z);
  policy_->OnSstMigrated(*meta, from, to);
}

bool LsmStore::BackgroundIdle() const {
  return active_jobs_ == 0 && pending_flushes_.empty() &&
         pending_compactions_.empty();
}

bool LsmStore::DrainBackground() {
  MaybeScheduleBackground();
  return loop_->RunUntilCondition(
      [this] { return !failed_.ok() || BackgroundIdle(); });
}

Status LsmStore::CheckInvariants() const {
  std::set<std::pair<DeviceKind, uint32_t>> zone_owner;
  for (const auto& [id, meta] : ssts_) {
    uint64_t cap = meta->location.zone_capacity;
    uint64_t expect = (meta->data_size + cap - 1) / cap;
    if (meta->location.device == DeviceKind::kSsd && meta->location.zones.size() != 1) {
      return Status::IoError("SSD SST not in exactly one zone");
    }
    if (meta->location.device == DeviceKind::kHdd &&
        meta->location.zones.size() != expect) {
      return Status::IoError("HDD SST zone count mismatch");
    }
    for (uint32_t z : meta->location.zones) {
      if (!zone_owner.insert({meta->location.device, z}).second) {
        return Status::IoError("zone owned by two SSTs");
      }
    }
    if (meta->min_key > meta->max_key) {
      return Status::IoError("SST with inverted key range");
    }
  }
  for (int level = 1; level < config_.level_count; level++) {
    const auto& lv = levels_[level];
    for (size_t i = 0; i + 1 < lv.size(); i++) {
      if (!(lv[i]->max_key < lv[i + 1]->min_key)) {
        return Status::IoError("overlapping SSTs at level " +
                               std::to_string(level));
      }
    }
  }
  return Status::OK();
}

}  // namespace hzkv
