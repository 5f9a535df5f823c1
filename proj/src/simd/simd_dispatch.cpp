#include "kpcanet/simd.hpp"

namespace kpcanet::simd {

bool has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
#if defined(__GNUC__) || defined(__clang__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
#else
    return false;
#endif
}

const Ops &active() {
#if defined(__x86_64__) || defined(_M_X64)
    static const Ops &selected = has_avx2() ? avx2::ops : scalar::ops;
#else
    static const Ops &selected = scalar::ops;
#endif
    return selected;
}

const char *backend_name() { return active().name; }

}  // namespace kpcanet::simd
