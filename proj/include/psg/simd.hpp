#pragma once

// Data-parallel inner loops used by the solvers.
//
// Every kernel has a portable scalar reference implementation and, on x86-64,
// an AVX2/FMA variant. The variant is picked once at first use from the CPU
// feature flags; tests force each backend and check they agree.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace psg::simd {

enum class Backend { scalar, avx2 };

Backend active_backend();
bool backend_available(Backend backend);
/// Switches the process-wide backend. Returns false if the CPU lacks it.
bool set_backend(Backend backend);
std::string_view backend_name(Backend backend);

/// Sum of a[i] * b[i]. Spans must have equal length.
double dot(std::span<const double> a, std::span<const double> b);
/// y += alpha * x.
void axpy(double alpha, std::span<const double> x, std::span<double> y);
/// max_i |a[i] - b[i]|, 0 for empty input.
double max_abs_diff(std::span<const double> a, std::span<const double> b);
/// dst |= src, word by word.
void or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);
/// dst &= src, word by word.
void and_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
void or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);
void and_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);
}  // namespace scalar

#if defined(PSG_HAVE_AVX2)
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
void or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);
void and_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);
}  // namespace avx2
#endif

}  // namespace psg::simd
