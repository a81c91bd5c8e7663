#pragma once

// Serialized SST layout, bit-exact and little-endian:
//   [data blocks]   4 KiB each, zero-padded; entries never split across blocks
//   [index block]   per data block: u16 key_len, last key bytes, u64 offset
//   [bloom filter]  bit array, last byte stores the probe count
//   [footer]        u64 index_offset, u64 index_len, u64 filter_offset,
//                   u64 filter_len, u32 entry_count   (36 bytes)
// Entry encoding: u16 key_len, key, u32 value_len, value, u64 seqno. A
// value_len of 0xFFFFFFFF marks a tombstone (no value bytes follow).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hzkv/status.h"

namespace hzkv {
namespace sst {

constexpr uint64_t kBlockSize = 4096;
constexpr uint32_t kTombstoneValueLen = 0xFFFFFFFFu;
constexpr size_t kFooterSize = 8 + 8 + 8 + 8 + 4;

struct Entry {
  std::string key;
  std::string value;
  uint64_t seqno = 0;
  bool tombstone = false;
};

size_t EncodedSize(const Entry& e);
void AppendEntry(std::vector<uint8_t>* out, const Entry& e);
// Returns bytes consumed, or 0 at block padding / truncated input.
size_t DecodeEntry(std::span<const uint8_t> in, Entry* out);

class BloomFilter {
 public:
  BloomFilter() = default;
  static BloomFilter Build(const std::vector<std::string_view>& keys,
                           int bits_per_key);
  static Status FromBits(std::vector<uint8_t> bits, BloomFilter* out);

  // No false negatives over the build set.
  bool MayContain(std::string_view key) const;
  const std::vector<uint8_t>& bits() const { return bits_; }

 private:
  std::vector<uint8_t> bits_;  // last byte = probe count
};

struct IndexEntry {
  std::string last_key;  // last key in the block
  uint64_t offset = 0;   // block offset within the file
};

struct Footer {
  uint64_t index_offset = 0;
  uint64_t index_length = 0;
  uint64_t filter_offset = 0;
  uint64_t filter_length = 0;
  uint32_t entry_count = 0;
};

class Builder {
 public:
  explicit Builder(int bloom_bits_per_key = 10);

  // Keys must be non-empty and strictly ascending.
  Status Add(const Entry& e);
  // Total file size if e were added and the file finished now.
  uint64_t ProjectedSizeWith(const Entry& e) const;
  uint64_t ProjectedSize() const;

  std::vector<uint8_t> Finish();

  size_t entry_count() const { return entry_count_; }
  const std::string& min_key() const { return min_key_; }
  const std::string& max_key() const { return max_key_; }
  uint64_t max_seqno() const { return max_seqno_; }

 private:
  void CutBlock();
  uint64_t ClosedIndexBytes() const;

  int bloom_bits_per_key_;
  std::vector<uint8_t> data_;          // finished, padded blocks
  std::vector<uint8_t> current_;       // open block
  std::vector<IndexEntry> index_;
  std::string current_last_key_;
  std::vector<std::string> keys_;
  size_t entry_count_ = 0;
  std::string min_key_, max_key_;
  uint64_t max_seqno_ = 0;
  bool finished_ = false;
};

// Parsed SST metadata pinned in memory (index entries, bloom filter, entry
// count). Data blocks stay on the device.
class View {
 public:
  static Status Parse(std::span<const uint8_t> file, View* out);

  // Offset of the data block that may contain key, via index binary search.
  std::optional<uint64_t> FindBlock(std::string_view key) const;
  bool MayContain(std::string_view key) const { return bloom_.MayContain(key); }

  static std::vector<Entry> DecodeBlock(std::span<const uint8_t> block);

  uint64_t data_bytes() const { return data_bytes_; }
  uint64_t block_count() const { return data_bytes_ / kBlockSize; }
  uint32_t entry_count() const { return footer_.entry_count; }
  const std::vector<IndexEntry>& index() const { return index_; }
  const Footer& footer() const { return footer_; }

 private:
  Footer footer_;
  std::vector<IndexEntry> index_;
  BloomFilter bloom_;
  uint64_t data_bytes_ = 0;
};

}  // namespace sst
}  // namespace hzkv
