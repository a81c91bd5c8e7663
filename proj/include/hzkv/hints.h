#pragma once

// The three hint families emitted by the store (flushing, three-phase
// compaction, block-cache eviction) and a synchronous bus that validates the
// compaction phase protocol and delivers hints to subscribers in emission
// order.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "hzkv/status.h"

namespace hzkv {

struct FlushHint {
  uint64_t sst_id = 0;
};

struct CompactionBeginHint {
  uint64_t compaction_id = 0;
  std::vector<uint64_t> selected_sst_ids;
  int output_level = 0;
};

struct CompactionOutputHint {
  uint64_t compaction_id = 0;
  uint64_t sst_id = 0;
  int level = 0;
};

struct CompactionEndHint {
  uint64_t compaction_id = 0;
  uint32_t selected_count = 0;
  std::vector<uint64_t> produced_sst_ids;
};

struct CacheEvictHint {
  uint64_t sst_id = 0;
  uint64_t block_offset = 0;
  std::vector<uint8_t> block_payload;
};

using Hint = std::variant<FlushHint, CompactionBeginHint, CompactionOutputHint,
                          CompactionEndHint, CacheEvictHint>;

std::string HintToString(const Hint& h);

class HintSubscriber {
 public:
  virtual ~HintSubscriber() = default;
  virtual void OnHint(const Hint& hint) = 0;
};

class HintBus {
 public:
  void Subscribe(HintSubscriber* sub) { subs_.push_back(sub); }

  // Validates the compaction protocol (one Begin, >= 0 Outputs, one End, in
  // that order, per compaction id), then delivers to every subscriber before
  // returning. Invalid hints are not delivered.
  Status Publish(const Hint& hint);

  uint64_t published_count() const { return published_; }

 private:
  struct OpenCompaction {
    int output_level = 0;
    uint32_t selected_count = 0;
    std::vector<uint64_t> outputs_seen;
  };

  Status Validate(const Hint& hint);

  std::vector<HintSubscriber*> subs_;
  std::map<uint64_t, OpenCompaction> open_;
  std::set<uint64_t> finished_;
  uint64_t published_ = 0;
};

}  // namespace hzkv
