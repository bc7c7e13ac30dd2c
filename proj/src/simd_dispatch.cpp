#include <atomic>

#include "psg/simd.hpp"

namespace psg::simd {

namespace {

struct KernelTable {
  double (*dot)(std::span<const double>, std::span<const double>);
  void (*axpy)(double, std::span<const double>, std::span<double>);
  double (*max_abs_diff)(std::span<const double>, std::span<const double>);
  void (*or_into)(std::span<std::uint64_t>, std::span<const std::uint64_t>);
  void (*and_into)(std::span<std::uint64_t>, std::span<const std::uint64_t>);
  Backend backend;
};

constexpr KernelTable kScalar{&scalar::dot, &scalar::axpy, &scalar::max_abs_diff,
                              &scalar::or_into, &scalar::and_into, Backend::scalar};
#if defined(PSG_HAVE_AVX2)
constexpr KernelTable kAvx2{&avx2::dot, &avx2::axpy, &avx2::max_abs_diff,
                            &avx2::or_into, &avx2::and_into, Backend::avx2};
#endif

bool cpu_has_avx2() {
#if defined(PSG_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* detect() {
#if defined(PSG_HAVE_AVX2)
  if (cpu_has_avx2()) return &kAvx2;
#endif
  return &kScalar;
}

std::atomic<const KernelTable*>& table() {
  static std::atomic<const KernelTable*> current{detect()};
  return current;
}

inline const KernelTable& kernels() { return *table().load(std::memory_order_relaxed); }

}  // namespace

Backend active_backend() { return kernels().backend; }

bool backend_available(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
      return cpu_has_avx2();
  }
  return false;
}

bool set_backend(Backend backend) {
  if (!backend_available(backend)) return false;
#if defined(PSG_HAVE_AVX2)
  table().store(backend == Backend::avx2 ? &kAvx2 : &kScalar);
#else
  table().store(&kScalar);
#endif
  return true;
}

std::string_view backend_name(Backend backend) {
  return backend == Backend::avx2 ? "avx2" : "scalar";
}

double dot(std::span<const double> a, std::span<const double> b) { return kernels().dot(a, b); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  kernels().axpy(alpha, x, y);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  return kernels().max_abs_diff(a, b);
}

void or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
  kernels().or_into(dst, src);
}

void and_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
  kernels().and_into(dst, src);
}

}  // namespace psg::simd
