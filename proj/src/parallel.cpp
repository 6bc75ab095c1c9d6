#include "clme/parallel.hpp"

#include <atomic>

namespace clme {

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int n) { g_threads.store(n > 0 ? n : 1); }

int thread_count() { return g_threads.load(); }

}  // namespace clme
