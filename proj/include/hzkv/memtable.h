#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "hzkv/sst.h"

namespace hzkv {

// Sorted in-memory write buffer. Later seqnos shadow earlier ones per key.
class MemTable {
 public:
  void Put(sst::Entry e) {
    if (max_seqno_ < e.seqno) max_seqno_ = e.seqno;
    auto it = entries_.find(e.key);
    if (it != entries_.end()) {
      bytes_ -= it->second.key.size() + it->second.value.size();
      it->second = std::move(e);
      bytes_ += it->second.key.size() + it->second.value.size();
    } else {
      bytes_ += e.key.size() + e.value.size();
      entries_.emplace(e.key, std::move(e));
    }
  }

  const sst::Entry* Get(std::string_view key) const {
    auto it = entries_.find(std::string(key));
    return it == entries_.end() ? nullptr : &it->second;
  }

  uint64_t ApproximateBytes() const { return bytes_; }
  bool empty() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }
  uint64_t max_seqno() const { return max_seqno_; }
  const std::map<std::string, sst::Entry>& entries() const { return entries_; }

 private:
  std::map<std::string, sst::Entry> entries_;
  uint64_t bytes_ = 0;
  uint64_t max_seqno_ = 0;
};

}  // namespace hzkv
