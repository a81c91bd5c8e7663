#include <map>
#include <random>

#include "doctest.h"
#include "hzkv/sst.h"

using namespace hzkv;
using namespace hzkv::sst;

namespace {
Entry MakeEntry(const std::string& k, const std::string& v, uint64_t seq) {
  Entry e;
  e.key = k;
  e.value = v;
  e.seqno = seq;
  return e;
}
}  // namespace

TEST_CASE("entry codec round-trips, little-endian layout") {
  Entry e = MakeEntry("key1", "value-bytes", 0x1122334455667788ull);
  std::vector<uint8_t> buf;
  AppendEntry(&buf, e);
  CHECK(buf.size() == EncodedSize(e));
  // u16 key length little-endian
  CHECK(buf[0] == 4);
  CHECK(buf[1] == 0);
  // u32 value length after the key
  CHECK(buf[6] == 11);
  // seqno trailing little-endian
  CHECK(buf[buf.size() - 8] == 0x88);
  CHECK(buf[buf.size() - 1] == 0x11);
  Entry d;
  CHECK(DecodeEntry(buf, &d) == buf.size());
  CHECK(d.key == e.key);
  CHECK(d.value == e.value);
  CHECK(d.seqno == e.seqno);
  CHECK_FALSE(d.tombstone);
}

TEST_CASE("tombstones carry no value bytes") {
  Entry e;
  e.key = "gone";
  e.tombstone = true;
  e.seqno = 5;
  std::vector<uint8_t> buf;
  AppendEntry(&buf, e);
  CHECK(buf.size() == 2 + 4 + 4 + 8);
  Entry d;
  CHECK(DecodeEntry(buf, &d) == buf.size());
  CHECK(d.tombstone);
  CHECK(d.key == "gone");
}

TEST_CASE("builder produces parseable files with sorted blocks and exact footer") {
  Builder b(10);
  std::map<std::string, Entry> expect;
  for (int i = 0; i < 2000; i++) {
    char key[32];
    snprintf(key, sizeof(key), "key%06d", i);
    Entry e = MakeEntry(key, std::string(100, 'a' + (i % 26)), 1000 + i);
    REQUIRE(b.Add(e).ok());
    expect[e.key] = e;
  }
  CHECK(b.entry_count() == 2000);
  CHECK(b.min_key() == "key000000");
  CHECK(b.max_key() == "key001999");
  std::vector<uint8_t> file = b.Finish();

  View view;
  REQUIRE(View::Parse(file, &view).ok());
  CHECK(view.entry_count() == 2000);
  CHECK(view.data_bytes() % kBlockSize == 0);
  CHECK(view.footer().index_offset == view.data_bytes());
  CHECK(view.footer().filter_offset ==
        view.footer().index_offset + view.footer().index_length);
  // index offsets strictly increase
  for (size_t i = 1; i < view.index().size(); i++) {
    CHECK(view.index()[i].offset > view.index()[i - 1].offset);
  }

  // every key is findable through index + block decode
  uint64_t found = 0;
  for (const auto& [key, e] : expect) {
    REQUIRE(view.MayContain(key));  // zero false negatives
    auto off = view.FindBlock(key);
    REQUIRE(off.has_value());
    std::span<const uint8_t> block(file.data() + *off, kBlockSize);
    for (const Entry& d : View::DecodeBlock(block)) {
      if (d.key == key) {
        CHECK(d.value == e.value);
        CHECK(d.seqno == e.seqno);
        found++;
        break;
      }
    }
  }
  CHECK(found == expect.size());
}

TEST_CASE("builder rejects out-of-order and oversized entries") {
  Builder b(10);
  REQUIRE(b.Add(MakeEntry("b", "1", 1)).ok());
  CHECK(b.Add(MakeEntry("a", "2", 2)).code() == StatusCode::kInvalidArgument);
  CHECK(b.Add(MakeEntry("b", "2", 2)).code() == StatusCode::kInvalidArgument);
  CHECK(b.Add(MakeEntry("", "2", 2)).code() == StatusCode::kInvalidArgument);
  Entry big = MakeEntry("c", std::string(kBlockSize, 'x'), 3);
  CHECK(b.Add(big).code() == StatusCode::kInvalidArgument);
}

TEST_CASE("entries never split across 4 KiB block boundaries") {
  Builder b(10);
  // 1 KiB-ish entries: three per block, as in the desk object size
  for (int i = 0; i < 100; i++) {
    char key[32];
    snprintf(key, sizeof(key), "k%022d", i);
    REQUIRE(b.Add(MakeEntry(key, std::string(1000, 'v'), i + 1)).ok());
  }
  std::vector<uint8_t> file = b.Finish();
  View view;
  REQUIRE(View::Parse(file, &view).ok());
  size_t total = 0;
  for (uint64_t off = 0; off < view.data_bytes(); off += kBlockSize) {
    std::span<const uint8_t> block(file.data() + off, kBlockSize);
    std::vector<Entry> entries = View::DecodeBlock(block);
    CHECK(entries.size() <= 3);
    total += entries.size();
  }
  CHECK(total == 100);
}

TEST_CASE("bloom filter has no false negatives and few false positives") {
  std::vector<std::string> keys;
  std::vector<std::string_view> views;
  for (int i = 0; i < 5000; i++) {
    keys.push_back("present" + std::to_string(i * 7919));
  }
  for (const std::string& k : keys) views.push_back(k);
  BloomFilter f = BloomFilter::Build(views, 10);
  for (const std::string& k : keys) CHECK(f.MayContain(k));
  int fp = 0;
  for (int i = 0; i < 5000; i++) {
    if (f.MayContain("absent" + std::to_string(i))) fp++;
  }
  CHECK(fp < 200);  // ~1-2% expected at 10 bits/key
}

TEST_CASE("projected size matches the finished file size") {
  std::mt19937_64 rng(3);
  Builder b(10);
  uint64_t projected = 0;
  for (int i = 0; i < 500; i++) {
    char key[32];
    snprintf(key, sizeof(key), "k%08d", i);
    Entry e = MakeEntry(key, std::string(1 + rng() % 900, 'q'), i + 1);
    projected = b.ProjectedSizeWith(e);
    REQUIRE(b.Add(e).ok());
    CHECK(b.ProjectedSize() == projected);
  }
  std::vector<uint8_t> file = b.Finish();
  CHECK(file.size() == projected);
}
