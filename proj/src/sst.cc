#include "hzkv/sst.h"

#include <algorithm>
#include <cassert>
#include <cstring>

namespace hzkv {
namespace sst {

namespace {

void PutU16(std::vector<uint8_t>* out, uint16_t v) {
  out->push_back(static_cast<uint8_t>(v & 0xff));
  out->push_back(static_cast<uint8_t>(v >> 8));
}

void PutU32(std::vector<uint8_t>* out, uint32_t v) {
  for (int i = 0; i < 4; i++) out->push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void PutU64(std::vector<uint8_t>* out, uint64_t v) {
  for (int i = 0; i < 8; i++) out->push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint16_t GetU16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

uint32_t GetU32(const uint8_t* p) {
  uint32_t v = 0;
  for (int i = 3; i >= 0; i--) v = (v << 8) | p[i];
  return v;
}

uint64_t GetU64(const uint8_t* p) {
  uint64_t v = 0;
  for (int i = 7; i >= 0; i--) v = (v << 8) | p[i];
  return v;
}

uint64_t Fnv1a64(std::string_view s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

size_t EncodedSize(const Entry& e) {
  return 2 + e.key.size() + 4 + (e.tombstone ? 0 : e.value.size()) + 8;
}

void AppendEntry(std::vector<uint8_t>* out, const Entry& e) {
  PutU16(out, static_cast<uint16_t>(e.key.size()));
  out->insert(out->end(), e.key.begin(), e.key.end());
  if (e.tombstone) {
    PutU32(out, kTombstoneValueLen);
  } else {
    PutU32(out, static_cast<uint32_t>(e.value.size()));
    out->insert(out->end(), e.value.begin(), e.value.end());
  }
  PutU64(out, e.seqno);
}

size_t DecodeEntry(std::span<const uint8_t> in, Entry* out) {
  if (in.size() < 2) return 0;
  uint16_t klen = GetU16(in.data());
  if (klen == 0) return 0;  // zero padding
  size_t pos = 2;
  if (in.size() < pos + klen + 4) return 0;
  out->key.assign(reinterpret_cast<const char*>(in.data() + pos), klen);
  pos += klen;
  uint32_t vlen = GetU32(in.data() + pos);
  pos += 4;
  if (vlen == kTombstoneValueLen) {
    out->tombstone = true;
    out->value.clear();
  } else {
    if (in.size() < pos + vlen) return 0;
    out->tombstone = false;
    out->value.assign(reinterpret_cast<const char*>(in.data() + pos), vlen);
    pos += vlen;
  }
  if (in.size() < pos + 8) return 0;
  out->seqno = GetU64(in.data() + pos);
  return pos + 8;
}

BloomFilter BloomFilter::Build(const std::vector<std::string_view>& keys,
                               int bits_per_key) {
  BloomFilter f;
  size_t bits = keys.size() * static_cast<size_t>(bits_per_key);
  if (bits < 64) bits = 64;
  size_t bytes = (bits + 7) / 8;
  bits = bytes * 8;
  int k = static_cast<int>(bits_per_key * 0.69);  // ~ bits_per_key * ln(2)
  if (k < 1) k = 1;
  if (k > 30) k = 30;
  f.bits_.assign(bytes + 1, 0);
  f.bits_[bytes] = static_cast<uint8_t>(k);
  for (std::string_view key : keys) {
    uint64_t h = Fnv1a64(key);
    uint64_t delta = (h >> 17) | (h << 47);  // double hashing
    for (int i = 0; i < k; i++) {
      uint64_t pos = h % bits;
      f.bits_[pos / 8] |= static_cast<uint8_t>(1u << (pos % 8));
      h += delta;
    }
  }
  return f;
}

Status BloomFilter::FromBits(std::vector<uint8_t> bits, BloomFilter* out) {
  if (bits.size() < 2) return Status::IoError("bloom filter too short");
  out->bits_ = std::move(bits);
  return Status::OK();
}

bool BloomFilter::MayContain(std::string_view key) const {
  if (bits_.size() < 2) return true;
  size_t bits = (bits_.size() - 1) * 8;
  int k = bits_.back();
  uint64_t h = Fnv1a64(key);
  uint64_t delta = (h >> 17) | (h << 47);
  for (int i = 0; i < k; i++) {
    uint64_t pos = h % bits;
    if (!(bits_[pos / 8] & (1u << (pos % 8)))) return false;
    h += delta;
  }
  return true;
}

Builder::Builder(int bloom_bits_per_key)
    : bloom_bits_per_key_(bloom_bits_per_key) {
  current_.reserve(kBlockSize);
}

Status Builder::Add(const Entry& e) {
  assert(!finished_);
  if (e.key.empty()) return Status::InvalidArgument("empty key");
  if (e.key.size() > 0xffff) return Status::InvalidArgument("key too long");
  size_t need = EncodedSize(e);
  if (need > kBlockSize) {
    return Status::InvalidArgument("entry larger than a data block");
  }
  if (entry_count_ > 0 && e.key <= max_key_) {
    return Status::InvalidArgument("keys must be strictly ascending");
  }
  if (current_.size() + need > kBlockSize) CutBlock();
  AppendEntry(&current_, e);
  current_last_key_ = e.key;
  keys_.push_back(e.key);
  if (entry_count_ == 0) min_key_ = e.key;
  max_key_ = e.key;
  max_seqno_ = std::max(max_seqno_, e.seqno);
  entry_count_++;
  return Status::OK();
}

void Builder::CutBlock() {
  if (current_.empty()) return;
  index_.push_back(IndexEntry{current_last_key_, data_.size()});
  current_.resize(kBlockSize, 0);  // zero padding
  data_.insert(data_.end(), current_.begin(), current_.end());
  current_.clear();
}

uint64_t Builder::ClosedIndexBytes() const {
  uint64_t bytes = 0;
  for (const IndexEntry& ie : index_) bytes += 2 + ie.last_key.size() + 8;
  return bytes;
}

static uint64_t FilterBytesFor(uint64_t nkeys, int bits_per_key) {
  uint64_t bits = nkeys * static_cast<uint64_t>(bits_per_key);
  if (bits < 64) bits = 64;
  return (bits + 7) / 8 + 1;  // +1 for the probe count byte
}

uint64_t Builder::ProjectedSize() const {
  uint64_t blocks = data_.size() + (current_.empty() ? 0 : kBlockSize);
  uint64_t index_bytes = ClosedIndexBytes();
  if (!current_.empty()) index_bytes += 2 + current_last_key_.size() + 8;
  return blocks + index_bytes + FilterBytesFor(keys_.size(), bloom_bits_per_key_) +
         kFooterSize;
}

uint64_t Builder::ProjectedSizeWith(const Entry& e) const {
  size_t need = EncodedSize(e);
  uint64_t blocks = data_.size();
  uint64_t index_bytes = ClosedIndexBytes();
  if (current_.size() + need > kBlockSize) {
    // current block closes, entry opens a new one
    if (!current_.empty()) {
      blocks += kBlockSize;
      index_bytes += 2 + current_last_key_.size() + 8;
    }
    blocks += kBlockSize;
    index_bytes += 2 + e.key.size() + 8;
  } else {
    blocks += kBlockSize;
    index_bytes += 2 + e.key.size() + 8;
  }
  return blocks + index_bytes +
         FilterBytesFor(keys_.size() + 1, bloom_bits_per_key_) + kFooterSize;
}

std::vector<uint8_t> Builder::Finish() {
  assert(!finished_);
  finished_ = true;
  CutBlock();
  std::vector<uint8_t> file = std::move(data_);
  Footer footer;
  footer.index_offset = file.size();
  for (const IndexEntry& ie : index_) {
    PutU16(&file, static_cast<uint16_t>(ie.last_key.size()));
    file.insert(file.end(), ie.last_key.begin(), ie.last_key.end());
    PutU64(&file, ie.offset);
  }
  footer.index_length = file.size() - footer.index_offset;
  footer.filter_offset = file.size();
  std::vector<std::string_view> key_views(keys_.begin(), keys_.end());
  BloomFilter bloom = BloomFilter::Build(key_views, bloom_bits_per_key_);
  file.insert(file.end(), bloom.bits().begin(), bloom.bits().end());
  footer.filter_length = file.size() - footer.filter_offset;
  footer.entry_count = static_cast<uint32_t>(entry_count_);
  PutU64(&file, footer.index_offset);
  PutU64(&file, footer.index_length);
  PutU64(&file, footer.filter_offset);
  PutU64(&file, footer.filter_length);
  PutU32(&file, footer.entry_count);
  return file;
}

Status View::Parse(std::span<const uint8_t> file, View* out) {
  if (file.size() < kFooterSize) return Status::IoError("sst too short");
  const uint8_t* f = file.data() + file.size() - kFooterSize;
  out->footer_.index_offset = GetU64(f);
  out->footer_.index_length = GetU64(f + 8);
  out->footer_.filter_offset = GetU64(f + 16);
  out->footer_.filter_length = GetU64(f + 24);
  out->footer_.entry_count = GetU32(f + 32);
  const Footer& ft = out->footer_;
  if (ft.index_offset + ft.index_length > file.size() ||
      ft.filter_offset + ft.filter_length > file.size() ||
      ft.filter_offset != ft.index_offset + ft.index_length) {
    return Status::IoError("sst footer offsets out of range");
  }
  if (ft.index_offset % kBlockSize != 0) {
    return Status::IoError("data region not block aligned");
  }
  out->data_bytes_ = ft.index_offset;
  out->index_.clear();
  size_t pos = ft.index_offset;
  size_t end = ft.index_offset + ft.index_length;
  uint64_t prev_offset = 0;
  bool first = true;
  while (pos < end) {
    if (pos + 2 > end) return Status::IoError("truncated index entry");
    uint16_t klen = GetU16(file.data() + pos);
    pos += 2;
    if (pos + klen + 8 > end) return Status::IoError("truncated index entry");
    IndexEntry ie;
    ie.last_key.assign(reinterpret_cast<const char*>(file.data() + pos), klen);
    pos += klen;
    ie.offset = GetU64(file.data() + pos);
    pos += 8;
    if (!first && ie.offset <= prev_offset) {
      return Status::IoError("index offsets not strictly increasing");
    }
    prev_offset = ie.offset;
    first = false;
    out->index_.push_back(std::move(ie));
  }
  std::vector<uint8_t> bloom_bits(file.begin() + ft.filter_offset,
                                  file.begin() + ft.filter_offset + ft.filter_length);
  return BloomFilter::FromBits(std::move(bloom_bits), &out->bloom_);
}

std::optional<uint64_t> View::FindBlock(std::string_view key) const {
  // first block whose last key >= key
  auto it = std::lower_bound(
      index_.begin(), index_.end(), key,
      [](const IndexEntry& ie, std::string_view k) { return ie.last_key < k; });
  if (it == index_.end()) return std::nullopt;
  return it->offset;
}

std::vector<Entry> View::DecodeBlock(std::span<const uint8_t> block) {
  std::vector<Entry> entries;
  size_t pos = 0;
  while (pos < block.size()) {
    Entry e;
    size_t n = DecodeEntry(block.subspan(pos), &e);
    if (n == 0) break;
    entries.push_back(std::move(e));
    pos += n;
  }
  return entries;
}

}  // namespace sst
}  // namespace hzkv
