#pragma once

// Single-owner discrete-event loop. All simulation state is mutated from
// events running on this loop; ties at equal timestamps run in schedule order.

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

namespace hzkv {

// Simulated time in seconds.
using SimTime = double;

class EventLoop {
 public:
  void Schedule(SimTime at, std::function<void()> fn) {
    if (at < now_) at = now_;
    queue_.push(Event{at, next_seq_++, std::move(fn)});
  }

  void ScheduleAfter(SimTime delay, std::function<void()> fn) {
    Schedule(now_ + delay, std::move(fn));
  }

  // Runs every event with timestamp <= t (including events they schedule),
  // then advances the clock to t.
  void RunUntil(SimTime t) {
    while (!queue_.empty() && queue_.top().at <= t) {
      RunNext();
    }
    if (t > now_) now_ = t;
  }

  // Runs events in order until pred() holds. Returns false if the queue
  // drained first.
  bool RunUntilCondition(const std::function<bool()>& pred) {
    while (!pred()) {
      if (!RunNext()) return false;
    }
    return true;
  }

  void RunAll() {
    while (RunNext()) {
    }
  }

  bool RunNext() {
    if (queue_.empty()) return false;
    Event ev = queue_.top();
    queue_.pop();
    if (ev.at > now_) now_ = ev.at;
    ev.fn();
    return true;
  }

  SimTime Now() const { return now_; }
  bool empty() const { return queue_.empty(); }
  size_t pending() const { return queue_.size(); }

 private:
  struct Event {
    SimTime at;
    uint64_t seq;
    std::function<void()> fn;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.at != b.at) return a.at > b.at;
      return a.seq > b.seq;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  SimTime now_ = 0;
  uint64_t next_seq_ = 0;
};

}  // namespace hzkv
