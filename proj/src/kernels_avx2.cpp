// AVX2/FMA kernel variants. Built only on x86_64; callers go through the
// runtime dispatch in kernels.cpp, which checks cpu support first.

#include <immintrin.h>

#include <cstddef>

namespace clwe::kernels::avx2 {

namespace {

inline float reduce_add(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  lo = _mm_add_ps(lo, hi);
  lo = _mm_hadd_ps(lo, lo);
  lo = _mm_hadd_ps(lo, lo);
  return _mm_cvtss_f32(lo);
}

}  // namespace

float dot(const float* a, const float* b, size_t n) {
  __m256 acc0 = _mm256_setzero_ps();
  __m256 acc1 = _mm256_setzero_ps();
  size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
    acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 8), _mm256_loadu_ps(b + i + 8), acc1);
  }
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
  }
  float res = reduce_add(_mm256_add_ps(acc0, acc1));
  for (; i < n; ++i) res += a[i] * b[i];
  return res;
}

void axpy(float alpha, const float* x, float* y, size_t n) {
  const __m256 va = _mm256_set1_ps(alpha);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 vy = _mm256_loadu_ps(y + i);
    vy = _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i), vy);
    _mm256_storeu_ps(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale(float* x, float alpha, size_t n) {
  const __m256 va = _mm256_set1_ps(alpha);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(x + i, _mm256_mul_ps(_mm256_loadu_ps(x + i), va));
  }
  for (; i < n; ++i) x[i] *= alpha;
}

float sum(const float* x, size_t n) {
  __m256 acc = _mm256_setzero_ps();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) acc = _mm256_add_ps(acc, _mm256_loadu_ps(x + i));
  float res = reduce_add(acc);
  for (; i < n; ++i) res += x[i];
  return res;
}

void matmul_nt(const float* a, size_t m, const float* b, size_t n, size_t k,
               float* c) {
  // Four B rows per pass so each A load feeds four accumulators.
  for (size_t i = 0; i < m; ++i) {
    const float* ai = a + i * k;
    float* ci = c + i * n;
    size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      const float* b0 = b + j * k;
      const float* b1 = b0 + k;
      const float* b2 = b1 + k;
      const float* b3 = b2 + k;
      __m256 s0 = _mm256_setzero_ps();
      __m256 s1 = _mm256_setzero_ps();
      __m256 s2 = _mm256_setzero_ps();
      __m256 s3 = _mm256_setzero_ps();
      size_t p = 0;
      for (; p + 8 <= k; p += 8) {
        const __m256 va = _mm256_loadu_ps(ai + p);
        s0 = _mm256_fmadd_ps(va, _mm256_loadu_ps(b0 + p), s0);
        s1 = _mm256_fmadd_ps(va, _mm256_loadu_ps(b1 + p), s1);
        s2 = _mm256_fmadd_ps(va, _mm256_loadu_ps(b2 + p), s2);
        s3 = _mm256_fmadd_ps(va, _mm256_loadu_ps(b3 + p), s3);
      }
      float r0 = reduce_add(s0);
      float r1 = reduce_add(s1);
      float r2 = reduce_add(s2);
      float r3 = reduce_add(s3);
      for (; p < k; ++p) {
        const float av = ai[p];
        r0 += av * b0[p];
        r1 += av * b1[p];
        r2 += av * b2[p];
        r3 += av * b3[p];
      }
      ci[j] = r0;
      ci[j + 1] = r1;
      ci[j + 2] = r2;
      ci[j + 3] = r3;
    }
    for (; j < n; ++j) ci[j] = dot(ai, b + j * k, k);
  }
}

}  // namespace clwe::kernels::avx2
