#pragma once

// Min-heap of timed events. Ties on time are broken by insertion order, so
// equal-time events run first-in first-out.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "vanet/types.hpp"

namespace vanet {

class CausalityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

template <typename Payload>
class EventQueue {
 public:
  struct Entry {
    SimTime time;
    std::uint64_t seq;
    Payload payload;
  };

  /// Current simulation time: the time of the last popped event.
  SimTime now() const { return now_; }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

  /// Throws CausalityError for times earlier than now().
  void push(SimTime time, Payload payload) {
    if (!(time >= now_)) throw CausalityError("event scheduled in the past");
    heap_.push_back(Entry{time, next_seq_++, std::move(payload)});
    std::push_heap(heap_.begin(), heap_.end(), later);
  }

  Entry pop() {
    std::pop_heap(heap_.begin(), heap_.end(), later);
    Entry e = std::move(heap_.back());
    heap_.pop_back();
    now_ = e.time;
    return e;
  }

  /// Visits pending entries in unspecified order.
  template <typename F>
  void for_each(F&& f) const {
    for (const Entry& e : heap_) f(e);
  }

 private:
  static bool later(const Entry& a, const Entry& b) {
    return a.time != b.time ? a.time > b.time : a.seq > b.seq;
  }

  std::vector<Entry> heap_;
  std::uint64_t next_seq_ = 0;
  SimTime now_ = 0.0;
};

}  // namespace vanet
