#include "pfpath/budget.hpp"

namespace pfpath {

CostMeter*& active_meter() {
  thread_local CostMeter* meter = nullptr;
  return meter;
}

}  // namespace pfpath
