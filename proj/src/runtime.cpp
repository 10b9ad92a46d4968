#include "mel/runtime.hpp"

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "mel/errors.hpp"

namespace mel {

namespace {
std::atomic<int> g_default_jobs{1};

int env_jobs() {
  const char* raw = std::getenv(kThreadsEnvVar);
  if (raw == nullptr || *raw == '\0') return 0;
  char* end = nullptr;
  long v = std::strtol(raw, &end, 10);
  if (end == raw || v < 1) return 0;
  return static_cast<int>(v);
}
}  // namespace

double max_norm(const Matrix& m) {
  if (m.size() == 0) throw InvalidMatrix("max_norm: empty matrix");
  return m.cwiseAbs().maxCoeff();
}

void set_default_jobs(int jobs) { g_default_jobs.store(jobs < 1 ? 1 : jobs); }

int effective_jobs() {
  int from_env = env_jobs();
  return from_env > 0 ? from_env : g_default_jobs.load();
}

void parallel_for(Index count, const std::function<void(Index)>& fn) {
  if (count <= 0) return;
  int jobs = effective_jobs();
  if (jobs <= 1 || count == 1) {
    for (Index i = 0; i < count; ++i) fn(i);
    return;
  }
  int workers = static_cast<int>(std::min<Index>(jobs, count));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w) {
    Index begin = count * w / workers;
    Index end = count * (w + 1) / workers;
    pool.emplace_back([&, begin, end] {
      try {
        for (Index i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace mel
