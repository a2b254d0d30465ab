#include "logschroed/parallel.hpp"

namespace logschroed {

namespace {
std::atomic<int> g_default_threads{0};
}

void set_default_threads(int n) { g_default_threads = std::max(n, 0); }

int default_threads() { return g_default_threads; }

int resolve_threads(int requested) {
    if (requested <= 0) requested = g_default_threads;
    if (requested <= 0) requested = static_cast<int>(std::thread::hardware_concurrency());
    return std::max(requested, 1);
}

}  // namespace logschroed
