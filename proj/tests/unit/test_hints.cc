#include "doctest.h"
#include "hzkv/hints.h"

using namespace hzkv;

namespace {
struct Recorder : HintSubscriber {
  std::vector<Hint> seen;
  void OnHint(const Hint& h) override { seen.push_back(h); }
};
}  // namespace

TEST_CASE("delivery order equals emission order across subscribers") {
  HintBus bus;
  Recorder a, b;
  bus.Subscribe(&a);
  bus.Subscribe(&b);
  REQUIRE(bus.Publish(Hint{FlushHint{7}}).ok());
  REQUIRE(bus.Publish(Hint{CompactionBeginHint{1, {1, 2}, 2}}).ok());
  REQUIRE(bus.Publish(Hint{CompactionOutputHint{1, 10, 2}}).ok());
  REQUIRE(bus.Publish(Hint{CompactionEndHint{1, 2, {10}}}).ok());
  REQUIRE(a.seen.size() == 4);
  REQUIRE(b.seen.size() == 4);
  CHECK(std::get<FlushHint>(a.seen[0]).sst_id == 7);
  CHECK(std::get<CompactionBeginHint>(a.seen[1]).selected_sst_ids.size() == 2);
  CHECK(std::get<CompactionOutputHint>(a.seen[2]).sst_id == 10);
  CHECK(std::get<CompactionEndHint>(a.seen[3]).produced_sst_ids.size() == 1);
}

TEST_CASE("output before begin is a protocol violation") {
  HintBus bus;
  Recorder r;
  bus.Subscribe(&r);
  Status st = bus.Publish(Hint{CompactionOutputHint{5, 1, 1}});
  CHECK(st.code() == StatusCode::kProtocolViolation);
  CHECK(r.seen.empty());  // invalid hints are not delivered
}

TEST_CASE("end before begin and double begin are violations") {
  HintBus bus;
  CHECK(bus.Publish(Hint{CompactionEndHint{9, 1, {}}}).code() ==
        StatusCode::kProtocolViolation);
  REQUIRE(bus.Publish(Hint{CompactionBeginHint{3, {4}, 1}}).ok());
  CHECK(bus.Publish(Hint{CompactionBeginHint{3, {5}, 1}}).code() ==
        StatusCode::kProtocolViolation);
  REQUIRE(bus.Publish(Hint{CompactionEndHint{3, 1, {}}}).ok());
  // a finished id cannot restart
  CHECK(bus.Publish(Hint{CompactionBeginHint{3, {6}, 1}}).code() ==
        StatusCode::kProtocolViolation);
}

TEST_CASE("end must match the begin selection count and the outputs seen") {
  HintBus bus;
  REQUIRE(bus.Publish(Hint{CompactionBeginHint{1, {1, 2, 3}, 2}}).ok());
  REQUIRE(bus.Publish(Hint{CompactionOutputHint{1, 11, 2}}).ok());
  CHECK(bus.Publish(Hint{CompactionEndHint{1, 2, {11}}}).code() ==
        StatusCode::kProtocolViolation);
  CHECK(bus.Publish(Hint{CompactionEndHint{1, 3, {11, 12}}}).code() ==
        StatusCode::kProtocolViolation);
  REQUIRE(bus.Publish(Hint{CompactionEndHint{1, 3, {11}}}).ok());
}

TEST_CASE("a compaction cannot produce more SSTs than it selected") {
  HintBus bus;
  REQUIRE(bus.Publish(Hint{CompactionBeginHint{1, {1}, 1}}).ok());
  REQUIRE(bus.Publish(Hint{CompactionOutputHint{1, 2, 1}}).ok());
  CHECK(bus.Publish(Hint{CompactionOutputHint{1, 3, 1}}).code() ==
        StatusCode::kProtocolViolation);
}

TEST_CASE("concurrent compactions interleave freely when ids differ") {
  HintBus bus;
  REQUIRE(bus.Publish(Hint{CompactionBeginHint{1, {1, 2}, 2}}).ok());
  REQUIRE(bus.Publish(Hint{CompactionBeginHint{2, {3, 4, 5, 6}, 2}}).ok());
  REQUIRE(bus.Publish(Hint{CompactionOutputHint{2, 20, 2}}).ok());
  REQUIRE(bus.Publish(Hint{CompactionOutputHint{1, 10, 2}}).ok());
  REQUIRE(bus.Publish(Hint{CompactionEndHint{1, 2, {10}}}).ok());
  REQUIRE(bus.Publish(Hint{CompactionEndHint{2, 4, {20}}}).ok());
}

TEST_CASE("hints render as one-line trace records") {
  CHECK(HintToString(Hint{FlushHint{3}}) == "flush sst=3");
  CHECK(HintToString(Hint{CompactionBeginHint{1, {4, 5}, 2}}) ==
        "compaction_begin cid=1 selected=[4,5] output_level=2");
  CacheEvictHint ev;
  ev.sst_id = 9;
  ev.block_offset = 4096;
  ev.block_payload = {1, 2, 3};
  CHECK(HintToString(Hint{ev}) == "cache_evict sst=9 offset=4096 bytes=3");
}
