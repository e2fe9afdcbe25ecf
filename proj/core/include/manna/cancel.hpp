#pragma once

#include <atomic>
#include <chrono>
#include <optional>
#include <stdexcept>

namespace manna {

/// Thrown by long-running operations that observe a cancelled token.
class CancelledError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cooperative cancellation: an explicit flag plus an optional deadline.
/// Safe to cancel from another thread.
class CancelToken {
 public:
  using Clock = std::chrono::steady_clock;

  CancelToken() = default;
  explicit CancelToken(Clock::duration budget) : deadline_(Clock::now() + budget) {}

  void cancel() { flag_.store(true, std::memory_order_relaxed); }

  bool cancelled() const {
    if (flag_.load(std::memory_order_relaxed)) return true;
    return deadline_ && Clock::now() >= *deadline_;
  }

 private:
  std::atomic<bool> flag_{false};
  std::optional<Clock::time_point> deadline_;
};

inline bool is_cancelled(const CancelToken* token) { return token != nullptr && token->cancelled(); }

}  // namespace manna
