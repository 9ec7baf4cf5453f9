#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "blackchain/sim/clock.hpp"

namespace blackchain::sim {

struct PastTickError : std::logic_error {
    explicit PastTickError(Tick at, Tick now)
        : std::logic_error("schedule at tick " + std::to_string(at) + " before current tick " +
                           std::to_string(now)) {}
};

// Single-threaded discrete-event queue. Events at the same tick run in
// insertion order; an event scheduled for the current tick while that tick
// is being processed runs this tick, after everything already queued.
class EventLoop {
  public:
    using Event = std::function<void()>;

    Tick now() const { return now_; }

    void schedule(Tick at, Event ev) {
        if (at < now_) throw PastTickError(at, now_);
        queue_.push(Entry{at, next_seq_++, std::move(ev)});
    }

    // Advances the clock to `t` and runs every event due at or before it.
    void run_until(Tick t) {
        while (!queue_.empty() && queue_.top().at <= t) {
            Entry e = std::move(const_cast<Entry&>(queue_.top()));
            queue_.pop();
            now_ = e.at;
            e.fn();
        }
        now_ = t;
    }

    std::size_t pending() const { return queue_.size(); }

  private:
    struct Entry {
        Tick at;
        std::uint64_t seq;
        Event fn;
    };
    struct Later {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.at != b.at) return a.at > b.at;
            return a.seq > b.seq;
        }
    };

    Tick now_ = 0;
    std::uint64_t next_seq_ = 0;
    std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
};

} // namespace blackchain::sim
