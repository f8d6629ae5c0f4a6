#pragma once

#include <atomic>
#include <chrono>
#include <optional>
#include <stdexcept>

namespace pfpath {

/// Raised when a step or wall-clock budget trips. Deliberately distinct from
/// mathematical failures so callers can tell "gave up" from "impossible".
struct BudgetExceeded : std::runtime_error {
  double elapsed_s;
  explicit BudgetExceeded(double elapsed)
      : std::runtime_error("budget exceeded"), elapsed_s(elapsed) {}
};

struct Cancelled : std::runtime_error {
  Cancelled() : std::runtime_error("cancelled") {}
};

/// Cooperative cost meter checked at iteration boundaries of the exact-algebra
/// loops. Steps always count; the clock is polled every 64 ticks.
class CostMeter {
public:
  CostMeter() = default;  // unlimited

  CostMeter(double seconds, long step_limit, const std::atomic<bool>* cancel = nullptr)
      : step_limit_(step_limit), cancel_(cancel) {
    if (seconds > 0) deadline_ = start_ + std::chrono::duration_cast<clock::duration>(
                                              std::chrono::duration<double>(seconds));
  }

  void tick(long n = 1) {
    steps_ += n;
    if (step_limit_ > 0 && steps_ > step_limit_) throw BudgetExceeded(elapsed());
    if (cancel_ && ((++polls_ & 15) == 0) && cancel_->load(std::memory_order_relaxed))
      throw Cancelled();
    if (deadline_ && clock::now() > *deadline_) throw BudgetExceeded(elapsed());
  }

  double elapsed() const {
    return std::chrono::duration<double>(clock::now() - start_).count();
  }
  long steps() const { return steps_; }

private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_ = clock::now();
  std::optional<clock::time_point> deadline_;
  long step_limit_ = -1;
  long steps_ = 0;
  long polls_ = 0;
  const std::atomic<bool>* cancel_ = nullptr;
};

/// Thread-local meter consulted by the low-level arithmetic loops, so a
/// budget stays responsive even when a single coefficient operation is huge.
CostMeter*& active_meter();

inline void tick_active_meter() {
  if (CostMeter* m = active_meter()) m->tick();
}

/// Installs a meter as the thread's active one for the current scope.
class MeterScope {
public:
  explicit MeterScope(CostMeter* m) : prev_(active_meter()) { active_meter() = m; }
  ~MeterScope() { active_meter() = prev_; }
  MeterScope(const MeterScope&) = delete;
  MeterScope& operator=(const MeterScope&) = delete;

private:
  CostMeter* prev_;
};

}  // namespace pfpath
