// CLI entry point: runs one experiment on the simulated clock and writes the
// metrics report. Every flag can also come from a key=value config file via
// --config; flags given on the command line win.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hzkv/config.h"
#include "hzkv/harness.h"

using namespace hzkv;

int main(int argc, char** argv) {
  CLI::App app{"hzkv: LSM-tree KV store simulator on hybrid zoned storage"};

  std::string config_path;
  std::string policy = "hhzs";
  std::string workload = "a";
  std::string key_dist;
  std::string out_dir = "out";
  std::string format = "csv";
  std::string hint_trace;
  std::string ssd_profile_path, hdd_profile_path;
  uint64_t ops = 100000, load_bytes = 200 * MiB, value_size = 1000, seed = 1;
  uint64_t ssd_zones = 20, hdd_zones = 8192, wal_cache_zones = 2;
  uint64_t memtable_bytes = 512 * KiB, block_cache_bytes = 8 * KiB;
  int64_t dump_sst = -1;
  double zipf_alpha = -1, target_rate = 0, load_target_rate = 0;
  double migration_rate = 4.0, sample_interval = 1.0;
  int read_pct = -1, update_pct = -1, insert_pct = -1, rmw_pct = -1, scan_pct = -1;

  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--policy", policy, "b1|b2|b3|b4|auto|hhzs|p|pm|pmc");
  app.add_option("--workload", workload, "a|b|c|d|e|f|custom");
  app.add_option("--read-pct", read_pct, "custom mix: % reads");
  app.add_option("--update-pct", update_pct, "custom mix: % updates");
  app.add_option("--insert-pct", insert_pct, "custom mix: % inserts");
  app.add_option("--rmw-pct", rmw_pct, "custom mix: % read-modify-writes");
  app.add_option("--scan-pct", scan_pct, "custom mix: % scans");
  app.add_option("--key-dist", key_dist, "zipf|latest|uniform");
  app.add_option("--zipf-alpha", zipf_alpha, "zipf skewness factor");
  app.add_option("--ops", ops, "run-phase operation count");
  app.add_option("--load-bytes", load_bytes, "load-phase total KV bytes");
  app.add_option("--value-size", value_size, "value size in bytes");
  app.add_option("--target-rate", target_rate, "run-phase ops/s throttle");
  app.add_option("--load-target-rate", load_target_rate, "load-phase ops/s throttle");
  app.add_option("--seed", seed, "workload RNG seed");
  app.add_option("--ssd-zones", ssd_zones, "available SSD zones");
  app.add_option("--hdd-zones", hdd_zones, "available HDD zones");
  app.add_option("--wal-cache-zones", wal_cache_zones,
                 "reserved SSD zones shared by WAL and cache");
  app.add_option("--migration-rate", migration_rate, "migration limit, MiB/s");
  app.add_option("--sample-interval", sample_interval, "metrics sample period, s");
  app.add_option("--memtable-bytes", memtable_bytes, "MemTable size limit");
  app.add_option("--block-cache-bytes", block_cache_bytes, "in-memory block cache budget");
  app.add_option("--ssd-profile", ssd_profile_path, "SSD device profile config");
  app.add_option("--hdd-profile", hdd_profile_path, "HDD device profile config");
  app.add_option("--out", out_dir, "report output directory");
  app.add_option("--format", format, "csv|records");
  app.add_option("--dump-sst", dump_sst, "print this SST's index after the run");
  app.add_option("--hint-trace", hint_trace, "write a hint trace to this file");

  CLI11_PARSE(app, argc, argv);

  ExperimentConfig cfg;
  if (!config_path.empty()) {
    ConfigMap file_cfg;
    Status st = ConfigMap::ParseFile(config_path, &file_cfg);
    if (st.ok()) st = ExperimentConfig::FromConfigMap(file_cfg, &cfg);
    if (!st.ok()) {
      std::cerr << st.ToString() << "\n";
      return 2;
    }
  }

  auto given = [&](const char* name) { return app.count(name) > 0; };
  if (given("--policy") || config_path.empty()) {
    Status st = ParsePolicyKind(policy, &cfg.policy);
    if (!st.ok()) {
      std::cerr << st.ToString() << "\n";
      return 2;
    }
  }
  if (given("--workload") && workload != "custom") {
    Status st = WorkloadSpec::Ycsb(workload[0], &cfg.run);
    if (!st.ok()) {
      std::cerr << st.ToString() << "\n";
      return 2;
    }
  }
  if (given("--workload") && workload == "custom") {
    cfg.run = WorkloadSpec{};
  }
  if (read_pct >= 0) cfg.run.read_pct = read_pct;
  if (update_pct >= 0) cfg.run.update_pct = update_pct;
  if (insert_pct >= 0) cfg.run.insert_pct = insert_pct;
  if (rmw_pct >= 0) cfg.run.rmw_pct = rmw_pct;
  if (scan_pct >= 0) cfg.run.scan_pct = scan_pct;
  if (!key_dist.empty()) {
    if (key_dist == "zipf") cfg.run.dist = WorkloadSpec::KeyDist::kZipf;
    else if (key_dist == "latest") cfg.run.dist = WorkloadSpec::KeyDist::kLatest;
    else if (key_dist == "uniform") cfg.run.dist = WorkloadSpec::KeyDist::kUniform;
    else {
      std::cerr << "unknown --key-dist '" << key_dist << "'\n";
      return 2;
    }
  }
  if (zipf_alpha >= 0) cfg.run.zipf_alpha = zipf_alpha;
  if (given("--target-rate")) cfg.run.target_rate = target_rate;
  if (given("--load-target-rate")) cfg.load_target_rate = load_target_rate;
  if (given("--ops")) cfg.run_ops = ops;
  if (given("--load-bytes")) cfg.load_bytes = load_bytes;
  if (given("--value-size")) cfg.value_size = value_size;
  if (given("--seed")) cfg.seed = seed;
  if (given("--ssd-zones")) cfg.ssd_zones = static_cast<uint32_t>(ssd_zones);
  if (given("--hdd-zones")) cfg.hdd_zones = static_cast<uint32_t>(hdd_zones);
  if (given("--wal-cache-zones")) cfg.wal_cache_zones = static_cast<int>(wal_cache_zones);
  if (given("--migration-rate")) cfg.migration_rate_mib_s = migration_rate;
  if (given("--sample-interval")) cfg.sample_interval = sample_interval;
  if (given("--memtable-bytes")) cfg.store.memtable_bytes = memtable_bytes;
  if (given("--block-cache-bytes")) cfg.store.block_cache_bytes = block_cache_bytes;
  if (dump_sst >= 0) cfg.dump_sst = static_cast<uint64_t>(dump_sst);
  if (!hint_trace.empty()) cfg.hint_trace_path = hint_trace;
  if (!ssd_profile_path.empty()) {
    ConfigMap prof;
    DeviceProfile p;
    Status st = ConfigMap::ParseFile(ssd_profile_path, &prof);
    if (st.ok()) st = DeviceProfile::FromConfig(prof, &p);
    if (!st.ok()) {
      std::cerr << st.ToString() << "\n";
      return 2;
    }
    cfg.ssd_profile = p;
  }
  if (!hdd_profile_path.empty()) {
    ConfigMap prof;
    DeviceProfile p;
    Status st = ConfigMap::ParseFile(hdd_profile_path, &prof);
    if (st.ok()) st = DeviceProfile::FromConfig(prof, &p);
    if (!st.ok()) {
      std::cerr << st.ToString() << "\n";
      return 2;
    }
    cfg.hdd_profile = p;
  }

  Status st = cfg.Validate();
  if (!st.ok()) {
    std::cerr << st.ToString() << "\n";
    return 2;
  }

  ExperimentResult result = RunExperiment(cfg);
  if (!result.status.ok()) {
    std::cerr << "experiment failed: " << result.status.ToString() << "\n";
    return 1;
  }
  st = EmitReport(result.report, out_dir, format);
  if (!st.ok()) {
    std::cerr << st.ToString() << "\n";
    return 1;
  }
  for (const PhaseResult& p : result.report.phases) {
    std::printf("%s: %llu ops in %.6f s simulated, %.1f ops/s\n",
                p.name.c_str(), static_cast<unsigned long long>(p.ops),
                p.duration, p.throughput_ops_s);
  }
  if (!result.sst_dump.empty()) std::fputs(result.sst_dump.c_str(), stdout);
  std::printf("report written to %s (%s)\n", out_dir.c_str(), format.c_str());
  return 0;
}
