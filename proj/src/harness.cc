#include "hzkv/harness.h"

#include <cinttypes>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "hzkv/baselines.h"
#include "hzkv/hints.h"
#include "hzkv/migration.h"
#include "hzkv/placement.h"
#include "hzkv/ssd_cache.h"

namespace hzkv {

namespace {

std::string Fmt(const char* fmt, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, fmt);
  vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  return buf;
}

std::string FmtTime(SimTime t) { return Fmt("%.9f", t); }

class TraceSubscriber : public HintSubscriber {
 public:
  void OnHint(const Hint& hint) override {
    lines_.push_back(HintToString(hint));
  }
  const std::vector<std::string>& lines() const { return lines_; }

 private:
  std::vector<std::string> lines_;
};

}  // namespace

Status ParsePolicyKind(const std::string& name, PolicyKind* out) {
  if (name == "b1") *out = PolicyKind::kB1;
  else if (name == "b2") *out = PolicyKind::kB2;
  else if (name == "b3") *out = PolicyKind::kB3;
  else if (name == "b4") *out = PolicyKind::kB4;
  else if (name == "auto") *out = PolicyKind::kAuto;
  else if (name == "p") *out = PolicyKind::kP;
  else if (name == "pm") *out = PolicyKind::kPM;
  else if (name == "pmc" || name == "hhzs") *out = PolicyKind::kPMC;
  else return Status::ConfigError("unknown policy '" + name + "'");
  return Status::OK();
}

std::string PolicyKindName(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kB1: return "b1";
    case PolicyKind::kB2: return "b2";
    case PolicyKind::kB3: return "b3";
    case PolicyKind::kB4: return "b4";
    case PolicyKind::kAuto: return "auto";
    case PolicyKind::kP: return "p";
    case PolicyKind::kPM: return "pm";
    case PolicyKind::kPMC: return "pmc";
  }
  return "?";
}

Status ExperimentConfig::Validate() const {
  Status st = run.Validate();
  if (!st.ok()) return st;
  if (ssd_zones == 0 || hdd_zones == 0) {
    return Status::ConfigError("zone counts must be positive");
  }
  if (wal_cache_zones < 1 || static_cast<uint32_t>(wal_cache_zones) >= ssd_zones) {
    return Status::ConfigError("wal_cache_zones must be in [1, ssd_zones)");
  }
  if (migration_rate_mib_s <= 0) {
    return Status::ConfigError("migration rate must be positive");
  }
  if (sample_interval <= 0) {
    return Status::ConfigError("sample interval must be positive");
  }
  if (value_size == 0 || value_size + 24 + 14 > sst::kBlockSize) {
    return Status::ConfigError("value_size must fit a 4 KiB data block");
  }
  return Status::OK();
}

Status ExperimentConfig::FromConfigMap(const ConfigMap& cfg,
                                       ExperimentConfig* out) {
  Status err;
  ExperimentConfig c;
  if (cfg.Has("policy")) {
    Status st = ParsePolicyKind(cfg.GetOr("policy", "pmc"), &c.policy);
    if (!st.ok()) return st;
  }
  if (cfg.Has("workload")) {
    std::string w = cfg.GetOr("workload", "a");
    if (w != "custom") {
      Status st = WorkloadSpec::Ycsb(w.empty() ? 'a' : w[0], &c.run);
      if (!st.ok()) return st;
    }
  }
  c.run.read_pct = static_cast<int>(cfg.GetOr("read-pct", uint64_t(c.run.read_pct), &err));
  c.run.update_pct = static_cast<int>(cfg.GetOr("update-pct", uint64_t(c.run.update_pct), &err));
  c.run.insert_pct = static_cast<int>(cfg.GetOr("insert-pct", uint64_t(c.run.insert_pct), &err));
  c.run.rmw_pct = static_cast<int>(cfg.GetOr("rmw-pct", uint64_t(c.run.rmw_pct), &err));
  c.run.scan_pct = static_cast<int>(cfg.GetOr("scan-pct", uint64_t(c.run.scan_pct), &err));
  c.run.zipf_alpha = cfg.GetOr("zipf-alpha", c.run.zipf_alpha, &err);
  if (cfg.Has("key-dist")) {
    std::string d = cfg.GetOr("key-dist", "zipf");
    if (d == "zipf") c.run.dist = WorkloadSpec::KeyDist::kZipf;
    else if (d == "latest") c.run.dist = WorkloadSpec::KeyDist::kLatest;
    else if (d == "uniform") c.run.dist = WorkloadSpec::KeyDist::kUniform;
    else return Status::ConfigError("unknown key-dist '" + d + "'");
  }
  c.run.target_rate = cfg.GetOr("target-rate", c.run.target_rate, &err);
  c.run_ops = cfg.GetOr("ops", c.run_ops, &err);
  c.load_bytes = cfg.GetOr("load-bytes", c.load_bytes, &err);
  c.value_size = cfg.GetOr("value-size", c.value_size, &err);
  c.load_target_rate = cfg.GetOr("load-target-rate", c.load_target_rate, &err);
  c.seed = cfg.GetOr("seed", c.seed, &err);
  c.ssd_zones = static_cast<uint32_t>(cfg.GetOr("ssd-zones", uint64_t(c.ssd_zones), &err));
  c.hdd_zones = static_cast<uint32_t>(cfg.GetOr("hdd-zones", uint64_t(c.hdd_zones), &err));
  c.wal_cache_zones = static_cast<int>(cfg.GetOr("wal-cache-zones", uint64_t(c.wal_cache_zones), &err));
  c.migration_rate_mib_s = cfg.GetOr("migration-rate", c.migration_rate_mib_s, &err);
  c.sample_interval = cfg.GetOr("sample-interval", c.sample_interval, &err);
  c.store.memtable_bytes = cfg.GetOr("memtable-bytes", c.store.memtable_bytes, &err);
  c.store.block_cache_bytes = cfg.GetOr("block-cache-bytes", c.store.block_cache_bytes, &err);
  if (cfg.Has("dump-sst")) {
    uint64_t id = 0;
    Status st = cfg.GetU64("dump-sst", &id);
    if (!st.ok()) return st;
    c.dump_sst = id;
  }
  if (cfg.Has("hint-trace")) c.hint_trace_path = cfg.GetOr("hint-trace", "");
  if (!err.ok()) return err;
  Status st = c.Validate();
  if (!st.ok()) return st;
  *out = c;
  return Status::OK();
}

std::string ExperimentConfig::Echo() const {
  std::ostringstream os;
  os << "policy=" << PolicyKindName(policy) << " read_pct=" << run.read_pct
     << " update_pct=" << run.update_pct << " insert_pct=" << run.insert_pct
     << " rmw_pct=" << run.rmw_pct << " scan_pct=" << run.scan_pct
     << " dist=" << static_cast<int>(run.dist) << " alpha=" << Fmt("%.4f", run.zipf_alpha)
     << " ops=" << run_ops << " load_bytes=" << load_bytes
     << " value_size=" << value_size << " seed=" << seed
     << " ssd_zones=" << ssd_zones << " hdd_zones=" << hdd_zones
     << " wal_cache_zones=" << wal_cache_zones
     << " migration_rate_mib_s=" << Fmt("%.4f", migration_rate_mib_s)
     << " target_rate=" << Fmt("%.4f", run.target_rate)
     << " load_target_rate=" << Fmt("%.4f", load_target_rate)
     << " sample_interval=" << Fmt("%.4f", sample_interval);
  return os.str();
}

namespace {

struct LatencyRecorder {
  std::vector<double> all;
  std::vector<double> reads;

  void Add(double v, bool is_read) {
    all.push_back(v);
    if (is_read) reads.push_back(v);
  }
};

PhaseResult MakePhase(const std::string& name, uint64_t ops, SimTime duration,
                      LatencyRecorder& lat) {
  PhaseResult p;
  p.name = name;
  p.ops = ops;
  p.duration = duration;
  p.throughput_ops_s = duration > 0 ? ops / duration : 0;
  p.p99 = Percentile(lat.all, 0.99);
  p.p999 = Percentile(lat.all, 0.999);
  p.p9999 = Percentile(lat.all, 0.9999);
  p.read_p99 = Percentile(lat.reads, 0.99);
  p.read_p999 = Percentile(lat.reads, 0.999);
  p.read_p9999 = Percentile(lat.reads, 0.9999);
  return p;
}

std::string DumpSstText(LsmStore& store, uint64_t sst_id) {
  SstMeta* meta = store.FindSst(sst_id);
  if (!meta) return Fmt("sst %" PRIu64 " not found\n", sst_id);
  std::ostringstream os;
  os << "sst " << meta->sst_id << " level=" << meta->level
     << " size=" << meta->data_size
     << " device=" << (meta->location.device == DeviceKind::kSsd ? "ssd" : "hdd")
     << " zones=";
  for (size_t i = 0; i < meta->location.zones.size(); i++) {
    if (i) os << ",";
    os << meta->location.zones[i];
  }
  os << " entries=" << meta->view->entry_count()
     << " reads=" << meta->read_count << "\n";
  os << "index blocks=" << meta->view->index().size() << "\n";
  for (const sst::IndexEntry& ie : meta->view->index()) {
    os << "  block offset=" << ie.offset << " last_key=" << ie.last_key << "\n";
  }
  const sst::Footer& f = meta->view->footer();
  os << "footer index_offset=" << f.index_offset
     << " index_length=" << f.index_length
     << " filter_offset=" << f.filter_offset
     << " filter_length=" << f.filter_length
     << " entry_count=" << f.entry_count << "\n";
  return os.str();
}

}  // namespace

ExperimentResult RunExperiment(const ExperimentConfig& cfg) {
  ExperimentResult result;
  result.status = cfg.Validate();
  if (!result.status.ok()) return result;

  EventLoop loop;
  DeviceProfile ssd_profile =
      cfg.ssd_profile ? *cfg.ssd_profile : DeviceProfile::DeskSsd(cfg.ssd_zones);
  DeviceProfile hdd_profile =
      cfg.hdd_profile ? *cfg.hdd_profile : DeviceProfile::DeskHdd(cfg.hdd_zones);
  ssd_profile.zone_count = cfg.ssd_zones;
  hdd_profile.zone_count = cfg.hdd_zones;
  ZonedDevice ssd("ssd", ssd_profile, &loop);
  ZonedDevice hdd("hdd", hdd_profile, &loop);

  TrafficStats traffic;
  HintBus bus;
  TraceSubscriber trace;
  if (!cfg.hint_trace_path.empty()) bus.Subscribe(&trace);

  std::unique_ptr<PlacementPolicy> policy;
  std::unique_ptr<BasicWalProvider> basic_wal;
  std::unique_ptr<SsdCache> cache;
  HintedPlacement* hinted = nullptr;
  WalZoneProvider* wal_provider = nullptr;
  std::unique_ptr<LsmStore> store;

  auto wal_zones_fn = [&store]() {
    return store ? store->wal_zones_in_use() : 0;
  };

  bool use_cache_module = false;
  bool use_migration = false;
  switch (cfg.policy) {
    case PolicyKind::kB1:
    case PolicyKind::kB2:
    case PolicyKind::kB3:
    case PolicyKind::kB4: {
      int h = 1 + static_cast<int>(cfg.policy) - static_cast<int>(PolicyKind::kB1);
      policy = std::make_unique<BasicPolicy>(&ssd, &hdd, h);
      basic_wal = std::make_unique<BasicWalProvider>(&ssd, &hdd);
      wal_provider = basic_wal.get();
      break;
    }
    case PolicyKind::kAuto: {
      policy = std::make_unique<AutoPolicy>(&ssd, &hdd, cfg.store.level_count,
                                            cfg.wal_cache_zones, wal_zones_fn);
      cache = std::make_unique<SsdCache>(&loop, &ssd, cfg.wal_cache_zones,
                                         false, &traffic);
      wal_provider = cache.get();
      break;
    }
    case PolicyKind::kP:
    case PolicyKind::kPM:
    case PolicyKind::kPMC: {
      auto hp = std::make_unique<HintedPlacement>(
          &ssd, &hdd, cfg.store.level_count, cfg.wal_cache_zones, wal_zones_fn);
      hinted = hp.get();
      policy = std::move(hp);
      use_cache_module = cfg.policy == PolicyKind::kPMC;
      use_migration = cfg.policy != PolicyKind::kP;
      cache = std::make_unique<SsdCache>(&loop, &ssd, cfg.wal_cache_zones,
                                         use_cache_module, &traffic);
      wal_provider = cache.get();
      break;
    }
  }

  bus.Subscribe(policy.get());
  if (cache) bus.Subscribe(cache.get());

  store = std::make_unique<LsmStore>(&loop, &ssd, &hdd, cfg.store, &bus,
                                     policy.get(), wal_provider, &traffic);
  if (cache) {
    cache->SetLiveLookup([&store](uint64_t id) -> const SstMeta* {
      return store->FindSst(id);
    });
    store->SetSsdCache(cache.get());
  }

  std::unique_ptr<MigrationEngine> engine;
  if (use_migration) {
    engine = std::make_unique<MigrationEngine>(
        &loop, store.get(), hinted, &ssd, &hdd,
        cfg.migration_rate_mib_s * MiB, &traffic);
    store->on_background_event = [&engine] { engine->Poke(); };
    store->on_sst_deleted = [&engine](uint64_t id) { engine->OnSstDeleted(id); };
    store->on_sst_selected = [&engine](uint64_t id) { engine->OnSstSelected(id); };
    engine->Start();
  }

  MetricsReport& report = result.report;
  report.config_echo = cfg.Echo();

  // Periodic sampler: tree/ledger state plus the policy's tuning window.
  bool sampling = true;
  auto take_sample = [&] {
    LevelSample s;
    s.at = loop.Now();
    for (int i = 0; i < cfg.store.level_count; i++) {
      s.level_bytes.push_back(store->LevelBytes(i));
    }
    s.wal_bytes = store->wal_bytes();
    s.wal_zones = store->wal_zones_in_use();
    if (hinted) {
      TieringDecision t = hinted->CurrentTiering();
      const LevelLedger* ledger = hinted->ledger();
      s.allocated = ledger->allocated;
      s.demand = ledger->demand;
      s.demand[0] = ledger->wal_zones_in_use;
      s.tiering_level = t.level;
      s.reserved_slots = t.reserved_slots;
    }
    report.samples.push_back(std::move(s));
  };
  std::function<void()> sampler_tick = [&] {
    if (!sampling) return;
    take_sample();
    policy->OnSampleTick();
    loop.ScheduleAfter(cfg.sample_interval, sampler_tick);
  };
  loop.ScheduleAfter(cfg.sample_interval, sampler_tick);

  uint64_t object_size = 24 + cfg.value_size;
  uint64_t load_count = cfg.load_bytes / object_size;
  uint64_t key_count = 0;

  // --- load phase ---
  {
    LatencyRecorder lat;
    SimTime phase_start = loop.Now();
    for (uint64_t i = 0; i < load_count; i++) {
      if (cfg.load_target_rate > 0) {
        SimTime due = phase_start + static_cast<double>(i) / cfg.load_target_rate;
        if (due > loop.Now()) loop.RunUntil(due);
      }
      Status st = store->Put(KeyForIndex(i), ValueForIndex(i, 0, cfg.value_size));
      if (!st.ok()) {
        result.status = st;
        return result;
      }
      lat.Add(store->last_op_duration(), false);
    }
    key_count = load_count;
    report.phases.push_back(
        MakePhase("load", load_count, loop.Now() - phase_start, lat));
    take_sample();
  }

  // --- run phase ---
  if (cfg.run_ops > 0) {
    WorkloadSpec spec = cfg.run;
    Rng rng(cfg.seed);
    ZipfGenerator zipf(spec.dist == WorkloadSpec::KeyDist::kUniform
                           ? 0.0
                           : spec.zipf_alpha,
                       key_count == 0 ? 1 : key_count);
    LatencyRecorder lat;
    SimTime phase_start = loop.Now();
    uint64_t op_salt = 1;
    auto pick_index = [&]() -> uint64_t {
      if (key_count == 0) return 0;
      switch (spec.dist) {
        case WorkloadSpec::KeyDist::kUniform:
          return rng.NextU64(key_count);
        case WorkloadSpec::KeyDist::kZipf:
          return zipf.Next(rng);
        case WorkloadSpec::KeyDist::kLatest: {
          uint64_t rank = zipf.Next(rng);
          return key_count - 1 - (rank >= key_count ? key_count - 1 : rank);
        }
      }
      return 0;
    };
    for (uint64_t i = 0; i < cfg.run_ops; i++) {
      if (spec.target_rate > 0) {
        SimTime due = phase_start + static_cast<double>(i) / spec.target_rate;
        if (due > loop.Now()) loop.RunUntil(due);
      }
      uint64_t r = rng.NextU64(100);
      Status st;
      SimTime issue = loop.Now();
      bool is_read = false;
      if (r < static_cast<uint64_t>(spec.read_pct)) {
        is_read = true;
        store->Get(KeyForIndex(pick_index()));
        st = store->Health();
      } else if (r < static_cast<uint64_t>(spec.read_pct + spec.update_pct)) {
        uint64_t idx = pick_index();
        st = store->Put(KeyForIndex(idx),
                        ValueForIndex(idx, op_salt++, cfg.value_size));
      } else if (r < static_cast<uint64_t>(spec.read_pct + spec.update_pct +
                                           spec.insert_pct)) {
        uint64_t idx = key_count++;
        st = store->Put(KeyForIndex(idx),
                        ValueForIndex(idx, op_salt++, cfg.value_size));
        zipf.Grow(key_count);
      } else if (r < static_cast<uint64_t>(spec.read_pct + spec.update_pct +
                                           spec.insert_pct + spec.rmw_pct)) {
        uint64_t idx = pick_index();
        std::string key = KeyForIndex(idx);
        store->Get(key);
        SimTime get_done = loop.Now();
        (void)get_done;
        st = store->Put(key, ValueForIndex(idx, op_salt++, cfg.value_size));
      } else {
        uint64_t idx = pick_index();
        uint64_t span = static_cast<uint64_t>(spec.scan_len_max - spec.scan_len_min + 1);
        size_t len = spec.scan_len_min + rng.NextU64(span);
        store->Scan(KeyForIndex(idx), len);
        st = store->Health();
      }
      if (!st.ok()) {
        result.status = st;
        return result;
      }
      lat.Add(loop.Now() - issue, is_read);
    }
    report.phases.push_back(
        MakePhase("run", cfg.run_ops, loop.Now() - phase_start, lat));
    take_sample();
  }
  sampling = false;

  // --- final state ---
  for (const auto& [id, meta] : store->ssts()) {
    SstReadCount rc;
    rc.sst_id = id;
    rc.level = meta->level;
    rc.device = meta->location.device;
    rc.read_count = meta->read_count;
    report.sst_reads.push_back(rc);
    report.final_level_residency[meta->level][DevIdx(meta->location.device)] +=
        meta->data_size;
  }
  report.traffic = traffic;
  report.block_cache.hits = store->block_cache().hits();
  report.block_cache.misses = store->block_cache().misses();
  report.block_cache.inserts = store->block_cache().inserts();
  report.block_cache.evictions = store->block_cache().evictions();
  if (cache) report.ssd_cache = cache->stats();
  if (engine) report.migrations = engine->log();
  report.device_bytes_written[DevIdx(DeviceKind::kSsd)] = ssd.bytes_written();
  report.device_bytes_written[DevIdx(DeviceKind::kHdd)] = hdd.bytes_written();
  report.category_bytes_written[DevIdx(DeviceKind::kSsd)] =
      traffic.TotalWrites(DeviceKind::kSsd);
  report.category_bytes_written[DevIdx(DeviceKind::kHdd)] =
      traffic.TotalWrites(DeviceKind::kHdd);
  report.live_sst_count = store->live_sst_count();
  report.priority_table_bytes = SsdCache::PriorityBytesFor(store->live_sst_count());
  report.cache_mapping_bytes = cache ? cache->MappingMemoryBytes() : 0;

  if (cfg.dump_sst) {
    result.sst_dump = DumpSstText(*store, *cfg.dump_sst);
  }
  if (!cfg.hint_trace_path.empty()) {
    std::ofstream out(cfg.hint_trace_path);
    for (const std::string& line : trace.lines()) out << line << "\n";
  }
  if (engine) engine->Stop();
  return result;
}

namespace {

const char* DevName(DeviceKind k) {
  return k == DeviceKind::kSsd ? "ssd" : "hdd";
}

void SerializePhase(std::ostringstream& os, const PhaseResult& p) {
  os << "phase name=" << p.name << " ops=" << p.ops
     << " duration=" << FmtTime(p.duration)
     << " throughput=" << Fmt("%.6f", p.throughput_ops_s)
     << " p99=" << FmtTime(p.p99) << " p999=" << FmtTime(p.p999)
     << " p9999=" << FmtTime(p.p9999) << " read_p99=" << FmtTime(p.read_p99)
     << " read_p999=" << FmtTime(p.read_p999)
     << " read_p9999=" << FmtTime(p.read_p9999) << "\n";
}

}  // namespace

std::string SerializeRecords(const MetricsReport& report) {
  std::ostringstream os;
  os << "config " << report.config_echo << "\n";
  for (const PhaseResult& p : report.phases) SerializePhase(os, p);
  for (const LevelSample& s : report.samples) {
    os << "sample at=" << FmtTime(s.at);
    for (size_t i = 0; i < s.level_bytes.size(); i++) {
      os << " l" << i << "=" << s.level_bytes[i];
    }
    os << " wal_bytes=" << s.wal_bytes << " wal_zones=" << s.wal_zones;
    if (!s.allocated.empty()) {
      os << " alloc=";
      for (size_t i = 0; i < s.allocated.size(); i++) {
        if (i) os << ",";
        os << s.allocated[i];
      }
      os << " demand=";
      for (size_t i = 0; i < s.demand.size(); i++) {
        if (i) os << ",";
        os << s.demand[i];
      }
      os << " tiering=" << s.tiering_level
         << " reserved=" << s.reserved_slots;
    }
    os << "\n";
  }
  for (int dev = 0; dev < 2; dev++) {
    DeviceKind k = static_cast<DeviceKind>(dev);
    os << "write_traffic device=" << DevName(k)
       << " wal=" << report.traffic.wal_write[dev];
    for (const auto& [level, arr] : report.traffic.sst_write) {
      os << " l" << level << "=" << arr[dev];
    }
    os << " migration=" << report.traffic.migration_write[dev]
       << " cache_admit=" << (dev == 0 ? report.traffic.cache_admit_write : 0)
       << "\n";
  }
  for (int dev = 0; dev < 2; dev++) {
    os << "read_traffic device=" << DevName(static_cast<DeviceKind>(dev))
       << " data_blocks=" << report.traffic.data_block_read[dev]
       << " compaction=" << report.traffic.compaction_read[dev]
       << " migration=" << report.traffic.migration_read[dev] << "\n";
  }
  os << "block_cache hits=" << report.block_cache.hits
     << " misses=" << report.block_cache.misses
     << " inserts=" << report.block_cache.inserts
     << " evictions=" << report.block_cache.evictions << "\n";
  os << "ssd_cache hits=" << report.ssd_cache.hits
     << " misses=" << report.ssd_cache.misses
     << " admissions=" << report.ssd_cache.admissions
     << " discards=" << report.ssd_cache.discards
     << " zone_evictions=" << report.ssd_cache.zone_evictions
     << " invalidations=" << report.ssd_cache.invalidations << "\n";
  for (const MigrationRecord& m : report.migrations) {
    os << "migration job=" << m.job_id << " sst=" << m.sst_id
       << " from=" << DevName(m.from) << " to=" << DevName(m.to)
       << " start=" << FmtTime(m.start) << " end=" << FmtTime(m.end)
       << " bytes=" << m.bytes << " aborted=" << (m.aborted ? 1 : 0) << "\n";
  }
  for (const SstReadCount& rc : report.sst_reads) {
    os << "sst_reads sst=" << rc.sst_id << " level=" << rc.level
       << " device=" << DevName(rc.device) << " reads=" << rc.read_count << "\n";
  }
  for (const auto& [level, arr] : report.final_level_residency) {
    os << "residency level=" << level << " ssd=" << arr[0] << " hdd=" << arr[1]
       << "\n";
  }
  os << "conservation ssd_device=" << report.device_bytes_written[0]
     << " ssd_categories=" << report.category_bytes_written[0]
     << " hdd_device=" << report.device_bytes_written[1]
     << " hdd_categories=" << report.category_bytes_written[1] << "\n";
  os << "memory live_ssts=" << report.live_sst_count
     << " priority_table_bytes=" << report.priority_table_bytes
     << " cache_mapping_bytes=" << report.cache_mapping_bytes << "\n";
  return os.str();
}

Status EmitReport(const MetricsReport& report, const std::string& dir,
                  const std::string& format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) return Status::IoError("cannot create output dir: " + dir);
  auto write_file = [&](const std::string& name,
                        const std::string& body) -> Status {
    std::ofstream out(dir + "/" + name, std::ios::binary);
    if (!out) return Status::IoError("cannot write " + dir + "/" + name);
    out << body;
    return Status::OK();
  };
  if (format == "records") {
    return write_file("records.txt", SerializeRecords(report));
  }
  if (format != "csv") {
    return Status::ConfigError("unknown report format '" + format + "'");
  }
  {
    std::ostringstream os;
    os << "phase,ops,duration_s,throughput_ops_s,p99,p999,p9999,read_p99,read_p999,read_p9999\n";
    for (const PhaseResult& p : report.phases) {
      os << p.name << "," << p.ops << "," << FmtTime(p.duration) << ","
         << Fmt("%.6f", p.throughput_ops_s) << "," << FmtTime(p.p99) << ","
         << FmtTime(p.p999) << "," << FmtTime(p.p9999) << ","
         << FmtTime(p.read_p99) << "," << FmtTime(p.read_p999) << ","
         << FmtTime(p.read_p9999) << "\n";
    }
    Status st = write_file("summary.csv", os.str());
    if (!st.ok()) return st;
  }
  {
    std::ostringstream os;
    os << "at_s";
    size_t levels = report.samples.empty() ? 0 : report.samples[0].level_bytes.size();
    for (size_t i = 0; i < levels; i++) os << ",l" << i << "_bytes";
    os << ",wal_bytes,wal_zones,tiering_level,reserved_slots\n";
    for (const LevelSample& s : report.samples) {
      os << FmtTime(s.at);
      for (uint64_t b : s.level_bytes) os << "," << b;
      os << "," << s.wal_bytes << "," << s.wal_zones << "," << s.tiering_level
         << "," << s.reserved_slots << "\n";
    }
    Status st = write_file("samples.csv", os.str());
    if (!st.ok()) return st;
  }
  {
    std::ostringstream os;
    os << "category,ssd_bytes,hdd_bytes\n";
    os << "wal," << report.traffic.wal_write[0] << ","
       << report.traffic.wal_write[1] << "\n";
    for (const auto& [level, arr] : report.traffic.sst_write) {
      os << "l" << level << "," << arr[0] << "," << arr[1] << "\n";
    }
    os << "migration," << report.traffic.migration_write[0] << ","
       << report.traffic.migration_write[1] << "\n";
    os << "cache_admit," << report.traffic.cache_admit_write << ",0\n";
    os << "read_data_blocks," << report.traffic.data_block_read[0] << ","
       << report.traffic.data_block_read[1] << "\n";
    os << "read_compaction," << report.traffic.compaction_read[0] << ","
       << report.traffic.compaction_read[1] << "\n";
    os << "read_migration," << report.traffic.migration_read[0] << ","
       << report.traffic.migration_read[1] << "\n";
    Status st = write_file("traffic.csv", os.str());
    if (!st.ok()) return st;
  }
  {
    std::ostringstream os;
    os << "sst_id,level,device,read_count\n";
    for (const SstReadCount& rc : report.sst_reads) {
      os << rc.sst_id << "," << rc.level << "," << DevName(rc.device) << ","
         << rc.read_count << "\n";
    }
    Status st = write_file("sst_reads.csv", os.str());
    if (!st.ok()) return st;
  }
  {
    std::ostringstream os;
    os << "job_id,sst_id,from,to,start_s,end_s,bytes,aborted\n";
    for (const MigrationRecord& m : report.migrations) {
      os << m.job_id << "," << m.sst_id << "," << DevName(m.from) << ","
         << DevName(m.to) << "," << FmtTime(m.start) << "," << FmtTime(m.end)
         << "," << m.bytes << "," << (m.aborted ? 1 : 0) << "\n";
    }
    Status st = write_file("migrations.csv", os.str());
    if (!st.ok()) return st;
  }
  {
    std::ostringstream os;
    os << "cache,hits,misses,admissions,discards,zone_evictions,invalidations\n";
    os << "block," << report.block_cache.hits << "," << report.block_cache.misses
       << "," << report.block_cache.inserts << ",0,0,"
       << report.block_cache.evictions << "\n";
    os << "ssd," << report.ssd_cache.hits << "," << report.ssd_cache.misses
       << "," << report.ssd_cache.admissions << "," << report.ssd_cache.discards
       << "," << report.ssd_cache.zone_evictions << ","
       << report.ssd_cache.invalidations << "\n";
    Status st = write_file("cache.csv", os.str());
    if (!st.ok()) return st;
  }
  {
    std::ostringstream os;
    os << "level,ssd_bytes,hdd_bytes\n";
    for (const auto& [level, arr] : report.final_level_residency) {
      os << level << "," << arr[0] << "," << arr[1] << "\n";
    }
    Status st = write_file("residency.csv", os.str());
    if (!st.ok()) return st;
  }
  return Status::OK();
}

}  // namespace hzkv
