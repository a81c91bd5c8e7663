#include "hzkv/hints.h"

#include <algorithm>
#include <sstream>

namespace hzkv {

namespace {
std::string IdList(const std::vector<uint64_t>& ids) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < ids.size(); i++) {
    if (i) os << ",";
    os << ids[i];
  }
  os << "]";
  return os.str();
}
}  // namespace

std::string HintToString(const Hint& h) {
  std::ostringstream os;
  if (const auto* f = std::get_if<FlushHint>(&h)) {
    os << "flush sst=" << f->sst_id;
  } else if (const auto* b = std::get_if<CompactionBeginHint>(&h)) {
    os << "compaction_begin cid=" << b->compaction_id
       << " selected=" << IdList(b->selected_sst_ids)
       << " output_level=" << b->output_level;
  } else if (const auto* o = std::get_if<CompactionOutputHint>(&h)) {
    os << "compaction_output cid=" << o->compaction_id << " sst=" << o->sst_id
       << " level=" << o->level;
  } else if (const auto* e = std::get_if<CompactionEndHint>(&h)) {
    os << "compaction_end cid=" << e->compaction_id
       << " selected_count=" << e->selected_count
       << " produced=" << IdList(e->produced_sst_ids);
  } else if (const auto* c = std::get_if<CacheEvictHint>(&h)) {
    os << "cache_evict sst=" << c->sst_id << " offset=" << c->block_offset
       << " bytes=" << c->block_payload.size();
  }
  return os.str();
}

Status HintBus::Validate(const Hint& hint) {
  if (const auto* b = std::get_if<CompactionBeginHint>(&hint)) {
    if (b->selected_sst_ids.empty()) {
      return Status::ProtocolViolation("compaction begin with no selected SSTs");
    }
    if (open_.count(b->compaction_id) || finished_.count(b->compaction_id)) {
      return Status::ProtocolViolation(
          "duplicate compaction begin for id " + std::to_string(b->compaction_id));
    }
    OpenCompaction oc;
    oc.output_level = b->output_level;
    oc.selected_count = static_cast<uint32_t>(b->selected_sst_ids.size());
    open_[b->compaction_id] = oc;
    return Status::OK();
  }
  if (const auto* o = std::get_if<CompactionOutputHint>(&hint)) {
    auto it = open_.find(o->compaction_id);
    if (it == open_.end()) {
      return Status::ProtocolViolation(
          "compaction output before begin for id " +
          std::to_string(o->compaction_id));
    }
    if (o->level != it->second.output_level) {
      return Status::ProtocolViolation("compaction output level mismatch");
    }
    if (it->second.outputs_seen.size() >= it->second.selected_count) {
      return Status::ProtocolViolation(
          "compaction produced more SSTs than it selected");
    }
    it->second.outputs_seen.push_back(o->sst_id);
    return Status::OK();
  }
  if (const auto* e = std::get_if<CompactionEndHint>(&hint)) {
    auto it = open_.find(e->compaction_id);
    if (it == open_.end()) {
      return Status::ProtocolViolation("compaction end before begin for id " +
                                       std::to_string(e->compaction_id));
    }
    if (e->selected_count != it->second.selected_count) {
      return Status::ProtocolViolation(
          "compaction end selected_count does not match begin");
    }
    if (e->produced_sst_ids != it->second.outputs_seen) {
      return Status::ProtocolViolation(
          "compaction end produced list does not match output hints");
    }
    open_.erase(it);
    finished_.insert(e->compaction_id);
    return Status::OK();
  }
  return Status::OK();
}

Status HintBus::Publish(const Hint& hint) {
  Status st = Validate(hint);
  if (!st.ok()) return st;
  published_++;
  for (HintSubscriber* sub : subs_) {
    sub->OnHint(hint);
  }
  return Status::OK();
}

}  // namespace hzkv
