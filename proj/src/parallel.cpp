#include "pipdim/parallel.hpp"

#include <omp.h>

#include <charconv>
#include <cstdlib>
#include <cstring>

#include "pipdim/error.hpp"

namespace pipdim {

int configure_threads_from_env() {
  if (const char* value = std::getenv("PIPDIM_THREADS"); value != nullptr && *value != '\0') {
    int n = 0;
    const char* end = value + std::strlen(value);
    const auto [ptr, ec] = std::from_chars(value, end, n);
    if (ec != std::errc{} || ptr != end || n < 1) {
      fail(ErrorKind::invalid_argument, "PIPDIM_THREADS must be a positive integer, got '" +
                                            std::string(value) + "'");
    }
    set_thread_count(n);
  }
  return max_threads();
}

void set_thread_count(int n) {
  require(n >= 1, "thread count must be >= 1");
  omp_set_num_threads(n);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace pipdim
