#include <vector>

#include "doctest.h"
#include "hzkv/event_loop.h"

using namespace hzkv;

TEST_CASE("events run in time order with FIFO ties") {
  EventLoop loop;
  std::vector<int> order;
  loop.Schedule(2.0, [&] { order.push_back(3); });
  loop.Schedule(1.0, [&] { order.push_back(1); });
  loop.Schedule(1.0, [&] { order.push_back(2); });
  loop.RunAll();
  CHECK(order == std::vector<int>{1, 2, 3});
  CHECK(loop.Now() == 2.0);
}

TEST_CASE("RunUntil runs due events, including ones they schedule") {
  EventLoop loop;
  std::vector<int> order;
  loop.Schedule(1.0, [&] {
    order.push_back(1);
    loop.Schedule(1.5, [&] { order.push_back(2); });
    loop.Schedule(3.0, [&] { order.push_back(9); });
  });
  loop.RunUntil(2.0);
  CHECK(order == std::vector<int>{1, 2});
  CHECK(loop.Now() == 2.0);
  CHECK(loop.pending() == 1);
}

TEST_CASE("scheduling in the past clamps to now") {
  EventLoop loop;
  loop.RunUntil(5.0);
  bool ran = false;
  loop.Schedule(1.0, [&] {
    ran = true;
    CHECK(loop.Now() == 5.0);
  });
  loop.RunAll();
  CHECK(ran);
}

TEST_CASE("RunUntilCondition stops as soon as the predicate holds") {
  EventLoop loop;
  int count = 0;
  for (int i = 1; i <= 10; i++) {
    loop.Schedule(i, [&count] { count++; });
  }
  bool ok = loop.RunUntilCondition([&] { return count == 3; });
  CHECK(ok);
  CHECK(count == 3);
  CHECK(loop.pending() == 7);
  ok = loop.RunUntilCondition([&] { return count == 100; });
  CHECK_FALSE(ok);
  CHECK(count == 10);
}
