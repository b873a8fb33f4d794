#include "sigid/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>

namespace sigid::kernels {

namespace scalar {

double weighted_sqdev_sum(std::span<const double> a, std::span<const double> b,
                          std::span<const double> w) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += w[i] * d * d;
    }
    return sum;
}

std::size_t band_count(std::span<const double> a, std::span<const double> b,
                       std::span<const double> s, double k) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) <= k * s[i]) ++count;
    }
    return count;
}

void threshold_le(std::span<const std::uint8_t> px, std::uint8_t t,
                  std::span<std::uint8_t> out) {
    for (std::size_t i = 0; i < px.size(); ++i) out[i] = px[i] <= t ? 1 : 0;
}

std::size_t count_nonzero(std::span<const std::uint8_t> v) {
    std::size_t count = 0;
    for (const auto x : v) count += x != 0;
    return count;
}

void min_max_u8(std::span<const std::uint8_t> v, std::uint8_t& lo, std::uint8_t& hi) {
    std::uint8_t mn = v[0], mx = v[0];
    for (const auto x : v) {
        if (x < mn) mn = x;
        if (x > mx) mx = x;
    }
    lo = mn;
    hi = mx;
}

void add_u8_to_u32(std::span<const std::uint8_t> src, std::span<std::uint32_t> dst) {
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] += src[i];
}

}  // namespace scalar

namespace {

Backend pick_default() {
    if (const char* env = std::getenv("SIGID_KERNEL_BACKEND")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && avx2::available()) return Backend::avx2;
    }
    return avx2::available() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& backend_slot() {
    static std::atomic<Backend> slot{pick_default()};
    return slot;
}

}  // namespace

std::string_view backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

bool backend_supported(Backend b) {
    return b == Backend::scalar || avx2::available();
}

Backend active_backend() { return backend_slot().load(std::memory_order_relaxed); }

bool set_backend(Backend b) {
    if (!backend_supported(b)) return false;
    backend_slot().store(b, std::memory_order_relaxed);
    return true;
}

double weighted_sqdev_sum(std::span<const double> a, std::span<const double> b,
                          std::span<const double> w) {
    if (active_backend() == Backend::avx2) return avx2::weighted_sqdev_sum(a, b, w);
    return scalar::weighted_sqdev_sum(a, b, w);
}

std::size_t band_count(std::span<const double> a, std::span<const double> b,
                       std::span<const double> s, double k) {
    if (active_backend() == Backend::avx2) return avx2::band_count(a, b, s, k);
    return scalar::band_count(a, b, s, k);
}

void threshold_le(std::span<const std::uint8_t> px, std::uint8_t t,
                  std::span<std::uint8_t> out) {
    if (active_backend() == Backend::avx2) return avx2::threshold_le(px, t, out);
    return scalar::threshold_le(px, t, out);
}

std::size_t count_nonzero(std::span<const std::uint8_t> v) {
    if (active_backend() == Backend::avx2) return avx2::count_nonzero(v);
    return scalar::count_nonzero(v);
}

void min_max_u8(std::span<const std::uint8_t> v, std::uint8_t& lo, std::uint8_t& hi) {
    if (active_backend() == Backend::avx2) return avx2::min_max_u8(v, lo, hi);
    return scalar::min_max_u8(v, lo, hi);
}

void add_u8_to_u32(std::span<const std::uint8_t> src, std::span<std::uint32_t> dst) {
    if (active_backend() == Backend::avx2) return avx2::add_u8_to_u32(src, dst);
    return scalar::add_u8_to_u32(src, dst);
}

}  // namespace sigid::kernels
