#include "ccplan/parallel.hpp"

#include <cstdlib>
#include <string>

namespace ccplan {

unsigned default_workers() {
  if (const char* env = std::getenv("CCPLAN_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return static_cast<unsigned>(n);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace ccplan
