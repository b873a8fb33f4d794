// AVX2 variants of the shared inner loops. Compiled with -mavx2 -mfma on
// x86-64; on other targets (or AVX2-less CPUs) available() reports false and
// the dispatcher never routes here, but the fallback definitions keep the
// link intact.

#include "sigid/kernels.hpp"

#if defined(SIGID_COMPILE_AVX2)

#include <immintrin.h>

#include <bit>
#include <cmath>

namespace sigid::kernels::avx2 {

bool available() {
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok;
}

namespace {

inline double hsum_pd(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

double weighted_sqdev_sum(std::span<const double> a, std::span<const double> b,
                          std::span<const double> w) {
    const std::size_t n = a.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        const __m256d va = _mm256_loadu_pd(a.data() + i);
        const __m256d vb = _mm256_loadu_pd(b.data() + i);
        const __m256d vw = _mm256_loadu_pd(w.data() + i);
        const __m256d d = _mm256_sub_pd(va, vb);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(vw, d), d, acc);
    }
    double sum = hsum_pd(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        sum += w[i] * d * d;
    }
    return sum;
}

std::size_t band_count(std::span<const double> a, std::span<const double> b,
                       std::span<const double> s, double k) {
    const std::size_t n = a.size();
    std::size_t i = 0, count = 0;
    const __m256d vk = _mm256_set1_pd(k);
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    for (; i + 4 <= n; i += 4) {
        const __m256d va = _mm256_loadu_pd(a.data() + i);
        const __m256d vb = _mm256_loadu_pd(b.data() + i);
        const __m256d vs = _mm256_loadu_pd(s.data() + i);
        const __m256d d = _mm256_and_pd(_mm256_sub_pd(va, vb), abs_mask);
        const __m256d cmp = _mm256_cmp_pd(d, _mm256_mul_pd(vk, vs), _CMP_LE_OQ);
        count += std::popcount(static_cast<unsigned>(_mm256_movemask_pd(cmp)));
    }
    for (; i < n; ++i) {
        if (std::abs(a[i] - b[i]) <= k * s[i]) ++count;
    }
    return count;
}

void threshold_le(std::span<const std::uint8_t> px, std::uint8_t t,
                  std::span<std::uint8_t> out) {
    const std::size_t n = px.size();
    std::size_t i = 0;
    const __m256i vt = _mm256_set1_epi8(static_cast<char>(t));
    const __m256i ones = _mm256_set1_epi8(1);
    for (; i + 32 <= n; i += 32) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(px.data() + i));
        // unsigned v <= t  <=>  max(v, t) == t
        const __m256i le = _mm256_cmpeq_epi8(_mm256_max_epu8(v, vt), vt);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + i),
                            _mm256_and_si256(le, ones));
    }
    for (; i < n; ++i) out[i] = px[i] <= t ? 1 : 0;
}

std::size_t count_nonzero(std::span<const std::uint8_t> v) {
    const std::size_t n = v.size();
    std::size_t i = 0, count = 0;
    const __m256i zero = _mm256_setzero_si256();
    for (; i + 32 <= n; i += 32) {
        const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(v.data() + i));
        const __m256i eq0 = _mm256_cmpeq_epi8(x, zero);
        const auto mask = static_cast<unsigned>(_mm256_movemask_epi8(eq0));
        count += 32 - std::popcount(mask);
    }
    for (; i < n; ++i) count += v[i] != 0;
    return count;
}

void min_max_u8(std::span<const std::uint8_t> v, std::uint8_t& lo, std::uint8_t& hi) {
    const std::size_t n = v.size();
    std::size_t i = 0;
    std::uint8_t mn = v[0], mx = v[0];
    if (n >= 32) {
        __m256i vmin = _mm256_set1_epi8(static_cast<char>(0xff));
        __m256i vmax = _mm256_setzero_si256();
        for (; i + 32 <= n; i += 32) {
            const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(v.data() + i));
            vmin = _mm256_min_epu8(vmin, x);
            vmax = _mm256_max_epu8(vmax, x);
        }
        alignas(32) std::uint8_t buf[32];
        _mm256_store_si256(reinterpret_cast<__m256i*>(buf), vmin);
        for (const auto x : buf) mn = x < mn ? x : mn;
        _mm256_store_si256(reinterpret_cast<__m256i*>(buf), vmax);
        for (const auto x : buf) mx = x > mx ? x : mx;
    }
    for (; i < n; ++i) {
        if (v[i] < mn) mn = v[i];
        if (v[i] > mx) mx = v[i];
    }
    lo = mn;
    hi = mx;
}

void add_u8_to_u32(std::span<const std::uint8_t> src, std::span<std::uint32_t> dst) {
    const std::size_t n = src.size();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m128i v8 = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(src.data() + i));
        const __m256i v32 = _mm256_cvtepu8_epi32(v8);
        const __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst.data() + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst.data() + i),
                            _mm256_add_epi32(d, v32));
    }
    for (; i < n; ++i) dst[i] += src[i];
}

}  // namespace sigid::kernels::avx2

#else  // !SIGID_COMPILE_AVX2

namespace sigid::kernels::avx2 {

bool available() { return false; }

double weighted_sqdev_sum(std::span<const double> a, std::span<const double> b,
                          std::span<const double> w) {
    return scalar::weighted_sqdev_sum(a, b, w);
}

std::size_t band_count(std::span<const double> a, std::span<const double> b,
                       std::span<const double> s, double k) {
    return scalar::band_count(a, b, s, k);
}

void threshold_le(std::span<const std::uint8_t> px, std::uint8_t t,
                  std::span<std::uint8_t> out) {
    scalar::threshold_le(px, t, out);
}

std::size_t count_nonzero(std::span<const std::uint8_t> v) {
    return scalar::count_nonzero(v);
}

void min_max_u8(std::span<const std::uint8_t> v, std::uint8_t& lo, std::uint8_t& hi) {
    scalar::min_max_u8(v, lo, hi);
}

void add_u8_to_u32(std::span<const std::uint8_t> src, std::span<std::uint32_t> dst) {
    scalar::add_u8_to_u32(src, dst);
}

}  // namespace sigid::kernels::avx2

#endif
