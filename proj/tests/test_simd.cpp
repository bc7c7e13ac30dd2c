#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "psg/simd.hpp"
#include "support.hpp"

using namespace psg;

TEST_CASE("backend selection") {
  CHECK(simd::backend_available(simd::Backend::scalar));
  CHECK(simd::set_backend(simd::Backend::scalar));
  CHECK(simd::active_backend() == simd::Backend::scalar);
  if (simd::backend_available(simd::Backend::avx2)) {
    CHECK(simd::set_backend(simd::Backend::avx2));
    CHECK(simd::active_backend() == simd::Backend::avx2);
  }
}

#if defined(PSG_HAVE_AVX2)
TEST_CASE("avx2 kernels agree with the scalar reference") {
  if (!simd::backend_available(simd::Backend::avx2)) return;
  test::Rng rng(1);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 17u, 63u, 64u, 100u, 517u}) {
    std::vector<double> a(n), b(n);
    for (auto& v : a) v = test::uniform(rng, -1, 1);
    for (auto& v : b) v = test::uniform(rng, -1, 1);
    double mag = 0.0;
    for (std::size_t i = 0; i < n; ++i) mag += std::fabs(a[i] * b[i]);
    CHECK(std::fabs(simd::avx2::dot(a, b) - simd::scalar::dot(a, b)) <= 1e-15 * (mag + 1));
    CHECK(simd::avx2::max_abs_diff(a, b) == simd::scalar::max_abs_diff(a, b));

    std::vector<double> y1 = b, y2 = b;
    simd::avx2::axpy(0.37, a, y1);
    simd::scalar::axpy(0.37, a, y2);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(y1[i] - y2[i]) <= 1e-15);

    std::vector<std::uint64_t> w1(n), w2(n), src(n);
    for (std::size_t i = 0; i < n; ++i) {
      w1[i] = w2[i] = rng();
      src[i] = rng();
    }
    simd::avx2::or_into(w1, src);
    simd::scalar::or_into(w2, src);
    CHECK(w1 == w2);
    simd::avx2::and_into(w1, src);
    simd::scalar::and_into(w2, src);
    CHECK(w1 == w2);
  }
}
#endif

TEST_CASE("dispatching front end matches the scalar reference") {
  test::Rng rng(2);
  std::vector<double> a(33), b(33);
  for (auto& v : a) v = test::uniform(rng);
  for (auto& v : b) v = test::uniform(rng);
  for (auto be : {simd::Backend::scalar, simd::Backend::avx2}) {
    if (!simd::set_backend(be)) continue;
    CHECK(simd::dot(a, b) == doctest::Approx(simd::scalar::dot(a, b)).epsilon(1e-14));
    CHECK(simd::max_abs_diff(a, b) == simd::scalar::max_abs_diff(a, b));
  }
}
