#include "iset/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "iset/errors.hpp"

namespace iset::kernels {
namespace {

const Kernels* pick(const std::string& want) {
    if (want == "scalar") return &scalar();
    if (want == "avx2") return avx2();
    if (want == "neon") return neon();
    // auto: best available
    if (const Kernels* k = avx2()) return k;
    if (const Kernels* k = neon()) return k;
    return &scalar();
}

std::atomic<const Kernels*> g_active{nullptr};

} // namespace

const Kernels& active() {
    const Kernels* k = g_active.load(std::memory_order_acquire);
    if (k) return *k;
    std::string want = "auto";
    if (const char* env = std::getenv("ISET_KERNELS")) want = env;
    k = pick(want);
    if (!k) k = &scalar(); // requested backend unavailable on this CPU
    g_active.store(k, std::memory_order_release);
    return *k;
}

void force_backend(const char* name) {
    std::string want = name ? name : "auto";
    if (want == "auto") {
        g_active.store(pick(want), std::memory_order_release);
        return;
    }
    const Kernels* k = pick(want);
    if (!k) throw InputError("kernel backend not available: " + want);
    g_active.store(k, std::memory_order_release);
}

} // namespace iset::kernels
