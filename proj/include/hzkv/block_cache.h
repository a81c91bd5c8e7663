#pragma once

// In-memory LRU cache of SST data blocks under a fixed byte budget. Evicting
// a data block hands it to the eviction callback (which the store turns into
// a CacheEvict hint). Only data blocks are ever inserted; index blocks and
// filters are pinned elsewhere.

#include <cstdint>
#include <functional>
#include <list>
#include <map>
#include <utility>
#include <vector>

namespace hzkv {

class BlockCache {
 public:
  using Key = std::pair<uint64_t, uint64_t>;  // (sst_id, block_offset)
  using EvictFn = std::function<void(uint64_t sst_id, uint64_t block_offset,
                                     std::vector<uint8_t> block)>;

  explicit BlockCache(uint64_t capacity_bytes, EvictFn on_evict = nullptr)
      : capacity_(capacity_bytes), on_evict_(std::move(on_evict)) {}

  const std::vector<uint8_t>* Get(uint64_t sst_id, uint64_t offset) {
    auto it = map_.find({sst_id, offset});
    if (it == map_.end()) {
      misses_++;
      return nullptr;
    }
    hits_++;
    lru_.splice(lru_.begin(), lru_, it->second.pos);
    return &it->second.block;
  }

  void Insert(uint64_t sst_id, uint64_t offset, std::vector<uint8_t> block) {
    Key key{sst_id, offset};
    auto it = map_.find(key);
    if (it != map_.end()) {
      used_ -= it->second.block.size();
      lru_.erase(it->second.pos);
      map_.erase(it);
    }
    if (block.size() > capacity_) return;  // never fits; skip quietly
    used_ += block.size();
    lru_.push_front(key);
    map_.emplace(key, Slot{std::move(block), lru_.begin()});
    inserts_++;
    while (used_ > capacity_) EvictLru();
  }

  uint64_t used_bytes() const { return used_; }
  size_t entry_count() const { return map_.size(); }
  uint64_t hits() const { return hits_; }
  uint64_t misses() const { return misses_; }
  uint64_t evictions() const { return evictions_; }
  uint64_t inserts() const { return inserts_; }

 private:
  struct Slot {
    std::vector<uint8_t> block;
    std::list<Key>::iterator pos;
  };

  void EvictLru() {
    Key victim = lru_.back();
    lru_.pop_back();
    auto it = map_.find(victim);
    std::vector<uint8_t> block = std::move(it->second.block);
    used_ -= block.size();
    map_.erase(it);
    evictions_++;
    if (on_evict_) on_evict_(victim.first, victim.second, std::move(block));
  }

  uint64_t capacity_;
  EvictFn on_evict_;
  std::map<Key, Slot> map_;
  std::list<Key> lru_;  // front = most recent
  uint64_t used_ = 0;
  uint64_t hits_ = 0, misses_ = 0, evictions_ = 0, inserts_ = 0;
};

}  // namespace hzkv
