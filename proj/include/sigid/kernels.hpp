#pragma once

// Data-parallel inner loops shared by the imaging and matching stages.
//
// Each kernel exists in a scalar reference form and, on x86-64, an AVX2 form.
// The active variant is selected once at runtime (CPU probe, overridable via
// set_backend() or the SIGID_KERNEL_BACKEND environment variable) and the two
// must agree: bit-exactly for the integer/byte kernels, and up to summation
// reordering for the floating-point reductions. tests/test_kernels.cpp holds
// the equivalence suite.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace sigid::kernels {

enum class Backend { scalar, avx2 };

std::string_view backend_name(Backend b);
bool backend_supported(Backend b);
Backend active_backend();
// Returns false (keeping the current backend) if b is unsupported here.
bool set_backend(Backend b);

// sum of w[i] * (a[i] - b[i])^2
double weighted_sqdev_sum(std::span<const double> a, std::span<const double> b,
                          std::span<const double> w);

// number of indices with |a[i] - b[i]| <= k * s[i]
std::size_t band_count(std::span<const double> a, std::span<const double> b,
                       std::span<const double> s, double k);

// out[i] = (px[i] <= t) ? 1 : 0
void threshold_le(std::span<const std::uint8_t> px, std::uint8_t t,
                  std::span<std::uint8_t> out);

std::size_t count_nonzero(std::span<const std::uint8_t> v);

// min/max over v; v must be nonempty
void min_max_u8(std::span<const std::uint8_t> v, std::uint8_t& lo, std::uint8_t& hi);

// dst[i] += src[i]; accumulates column projections row by row
void add_u8_to_u32(std::span<const std::uint8_t> src, std::span<std::uint32_t> dst);

namespace scalar {
double weighted_sqdev_sum(std::span<const double> a, std::span<const double> b,
                          std::span<const double> w);
std::size_t band_count(std::span<const double> a, std::span<const double> b,
                       std::span<const double> s, double k);
void threshold_le(std::span<const std::uint8_t> px, std::uint8_t t,
                  std::span<std::uint8_t> out);
std::size_t count_nonzero(std::span<const std::uint8_t> v);
void min_max_u8(std::span<const std::uint8_t> v, std::uint8_t& lo, std::uint8_t& hi);
void add_u8_to_u32(std::span<const std::uint8_t> src, std::span<std::uint32_t> dst);
}  // namespace scalar

namespace avx2 {
// True when the AVX2 variants were compiled in and this CPU supports them.
bool available();
double weighted_sqdev_sum(std::span<const double> a, std::span<const double> b,
                          std::span<const double> w);
std::size_t band_count(std::span<const double> a, std::span<const double> b,
                       std::span<const double> s, double k);
void threshold_le(std::span<const std::uint8_t> px, std::uint8_t t,
                  std::span<std::uint8_t> out);
std::size_t count_nonzero(std::span<const std::uint8_t> v);
void min_max_u8(std::span<const std::uint8_t> v, std::uint8_t& lo, std::uint8_t& hi);
void add_u8_to_u32(std::span<const std::uint8_t> src, std::span<std::uint32_t> dst);
}  // namespace avx2

}  // namespace sigid::kernels
