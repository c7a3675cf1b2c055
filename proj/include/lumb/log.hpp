#ifndef LUMB_LOG_HPP
#define LUMB_LOG_HPP

#include <atomic>
#include <iostream>
#include <string_view>

namespace lumb {

// Writes a warning to std::clog. Each distinct `counter` emits at most `limit`
// messages per process; hot loops pass their own static counter.
inline void warn_limited(std::atomic<int>& counter, std::string_view message, int limit = 5) {
  const int seen = counter.fetch_add(1, std::memory_order_relaxed);
  if (seen < limit) {
    std::clog << "warning: " << message << '\n';
  } else if (seen == limit) {
    std::clog << "warning: further occurrences suppressed\n";
  }
}

}  // namespace lumb

#endif  // LUMB_LOG_HPP
