#pragma once

// Experiment harness: builds devices, policy, and store from a config,
// runs the load and run phases on the simulated clock, samples metrics, and
// emits machine-readable reports. Reports are pure functions of
// (config, seed).

#include <cstdint>
#include <optional>
#include <string>

#include "hzkv/config.h"
#include "hzkv/device.h"
#include "hzkv/stats.h"
#include "hzkv/store.h"
#include "hzkv/workload.h"

namespace hzkv {

enum class PolicyKind { kB1, kB2, kB3, kB4, kAuto, kP, kPM, kPMC };

Status ParsePolicyKind(const std::string& name, PolicyKind* out);
std::string PolicyKindName(PolicyKind kind);

struct ExperimentConfig {
  PolicyKind policy = PolicyKind::kPMC;
  WorkloadSpec run;
  uint64_t run_ops = 100000;
  uint64_t load_bytes = 200 * MiB;
  uint64_t value_size = 1000;
  double load_target_rate = 0;  // ops/s; 0 = unthrottled
  uint64_t seed = 1;
  uint32_t ssd_zones = 20;
  uint32_t hdd_zones = 8192;
  int wal_cache_zones = 2;
  double migration_rate_mib_s = 4.0;
  double sample_interval = 1.0;
  StoreConfig store = StoreConfig::Desk();
  std::optional<DeviceProfile> ssd_profile;  // defaults to the desk profiles
  std::optional<DeviceProfile> hdd_profile;
  std::optional<uint64_t> dump_sst;
  std::string hint_trace_path;

  Status Validate() const;
  // Mirrors the CLI flags; unknown keys are ConfigErrors.
  static Status FromConfigMap(const ConfigMap& cfg, ExperimentConfig* out);
  std::string Echo() const;
};

struct ExperimentResult {
  MetricsReport report;
  Status status;
  std::string sst_dump;  // --dump-sst output, when requested
};

ExperimentResult RunExperiment(const ExperimentConfig& cfg);

// Newline-delimited records form of the whole report (also the byte-level
// determinism witness).
std::string SerializeRecords(const MetricsReport& report);

// format: "csv" writes one file per section under dir; "records" writes
// records.txt.
Status EmitReport(const MetricsReport& report, const std::string& dir,
                  const std::string& format);

}  // namespace hzkv
