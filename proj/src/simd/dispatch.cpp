#include "scca/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace scca::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(SCCA_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* table_for(Level level) noexcept {
    if (level == Level::Avx2 && cpu_has_avx2()) return avx2_table();
    return &scalar_table();
}

Level initial_level() noexcept {
    Level level = detected_level();
    if (const char* env = std::getenv("SCCA_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) level = Level::Scalar;
    }
    return level;
}

std::atomic<const KernelTable*>& current() noexcept {
    static std::atomic<const KernelTable*> table{table_for(initial_level())};
    return table;
}

}  // namespace

const char* to_string(Level level) noexcept {
    switch (level) {
        case Level::Scalar: return "scalar";
        case Level::Avx2: return "avx2";
    }
    return "unknown";
}

Level detected_level() noexcept { return cpu_has_avx2() ? Level::Avx2 : Level::Scalar; }

Level active_level() noexcept {
    return current().load(std::memory_order_acquire) == &scalar_table() ? Level::Scalar
                                                                        : Level::Avx2;
}

Level set_level(Level level) noexcept {
    const KernelTable* table = table_for(level);
    current().store(table, std::memory_order_release);
    return table == &scalar_table() ? Level::Scalar : Level::Avx2;
}

const KernelTable& active_table() noexcept { return *current().load(std::memory_order_acquire); }

}  // namespace scca::simd
