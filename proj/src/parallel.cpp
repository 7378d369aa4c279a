#include "qtel/parallel.hpp"

#include <cstdlib>
#include <string>

namespace qtel {

int worker_count() {
  if (const char* env = std::getenv("QTEL_WORKERS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (...) {
      // fall through to the default on unparsable values
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace qtel
