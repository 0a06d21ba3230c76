#include "domlab/parallel.hpp"

#include "domlab/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace domlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_point: return "invalid-point";
    case ErrorKind::singular_path: return "singular-path";
    case ErrorKind::undersampled_path: return "undersampled-path";
    case ErrorKind::mismatched_surface: return "mismatched-surface";
    case ErrorKind::out_of_range: return "out-of-range";
    case ErrorKind::invalid_data: return "invalid-data";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::hypothesis_violation: return "hypothesis-violation";
    case ErrorKind::solver_failure: return "solver-failure";
    case ErrorKind::invalid_problem: return "invalid-problem";
    case ErrorKind::inconsistent_data: return "inconsistent-data";
    case ErrorKind::degenerate_lattice: return "degenerate-lattice";
    case ErrorKind::singular_lift: return "singular-lift";
    case ErrorKind::start_mismatch: return "start-mismatch";
    case ErrorKind::contraction_violated: return "contraction-violated";
    case ErrorKind::not_applicable: return "not-applicable";
    case ErrorKind::grid_too_small: return "grid-too-small";
    case ErrorKind::invalid_input: return "invalid-input";
  }
  return "unknown";
}

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DOMLAB_THREADS")) {
    try {
      long cap = std::stol(env);
      if (cap >= 1) return std::min<unsigned>(hw, static_cast<unsigned>(cap));
    } catch (const std::exception&) {
      // unparsable value: fall back to hardware concurrency
    }
  }
  return hw;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk) {
  unsigned workers = worker_count();
  if (workers <= 1 || count < 2 * min_chunk) {
    body(0, count);
    return;
  }
  std::size_t chunks = std::min<std::size_t>(workers, count / min_chunk);
  std::size_t step = (count + chunks - 1) / chunks;
  std::vector<std::thread> pool;
  pool.reserve(chunks);
  for (std::size_t begin = 0; begin < count; begin += step) {
    std::size_t end = std::min(count, begin + step);
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace domlab
