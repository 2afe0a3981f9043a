#include "nvcache/obp.hpp"

#include <cmath>

namespace nvcache {

void ObpWindow::advance(double now) {
  const auto target = static_cast<std::int64_t>(std::floor(now / epoch_seconds_));
  if (target <= epoch_) {
    return;
  }
  const double factor = std::pow(decay_, static_cast<double>(target - epoch_));
  history_.inserted = (history_.inserted + current_.inserted) * factor;
  history_.removed = (history_.removed + current_.removed) * factor;
  history_.looked_up = (history_.looked_up + current_.looked_up) * factor;
  current_ = {};
  epoch_ = target;
}

}  // namespace nvcache
