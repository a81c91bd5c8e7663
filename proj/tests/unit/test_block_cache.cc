#include "doctest.h"
#include "hzkv/block_cache.h"

using namespace hzkv;

namespace {
std::vector<uint8_t> Block(uint8_t fill, size_t n = 4096) {
  return std::vector<uint8_t>(n, fill);
}
}  // namespace

TEST_CASE("LRU with capacity for one block evicts the older insert") {
  std::vector<std::pair<uint64_t, uint64_t>> evicted;
  BlockCache cache(4096, [&](uint64_t sst, uint64_t off, std::vector<uint8_t>) {
    evicted.emplace_back(sst, off);
  });
  cache.Insert(1, 0, Block(0xaa));
  cache.Insert(2, 0, Block(0xbb));
  REQUIRE(evicted.size() == 1);
  CHECK(evicted[0] == std::pair<uint64_t, uint64_t>{1, 0});
  CHECK(cache.Get(1, 0) == nullptr);
  REQUIRE(cache.Get(2, 0) != nullptr);
}

TEST_CASE("recency: a touched block survives the next eviction") {
  std::vector<std::pair<uint64_t, uint64_t>> evicted;
  BlockCache cache(8192, [&](uint64_t sst, uint64_t off, std::vector<uint8_t>) {
    evicted.emplace_back(sst, off);
  });
  cache.Insert(1, 0, Block(1));
  cache.Insert(2, 0, Block(2));
  CHECK(cache.Get(1, 0) != nullptr);  // 1 becomes most recent
  cache.Insert(3, 0, Block(3));
  REQUIRE(evicted.size() == 1);
  CHECK(evicted[0].first == 2);
}

TEST_CASE("eviction hands back the exact block bytes") {
  std::vector<uint8_t> payload;
  BlockCache cache(4096, [&](uint64_t, uint64_t, std::vector<uint8_t> b) {
    payload = std::move(b);
  });
  cache.Insert(1, 4096, Block(0x7e));
  cache.Insert(1, 8192, Block(0x11));
  REQUIRE(payload.size() == 4096);
  CHECK(payload[0] == 0x7e);
  CHECK(payload[4095] == 0x7e);
}

TEST_CASE("oversized blocks are not cached and emit no eviction") {
  int evictions = 0;
  BlockCache cache(1024, [&](uint64_t, uint64_t, std::vector<uint8_t>) {
    evictions++;
  });
  cache.Insert(1, 0, Block(1, 4096));
  CHECK(cache.entry_count() == 0);
  CHECK(evictions == 0);
}

TEST_CASE("hit and miss counters") {
  BlockCache cache(8192);
  cache.Insert(1, 0, Block(1));
  CHECK(cache.Get(1, 0) != nullptr);
  CHECK(cache.Get(1, 4096) == nullptr);
  CHECK(cache.hits() == 1);
  CHECK(cache.misses() == 1);
}
