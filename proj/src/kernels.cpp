#include "clwe/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace clwe::kernels {

namespace scalar {

float dot(const float* a, const float* b, size_t n) {
  float acc = 0.0f;
  for (size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(float alpha, const float* x, float* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale(float* x, float alpha, size_t n) {
  for (size_t i = 0; i < n; ++i) x[i] *= alpha;
}

float sum(const float* x, size_t n) {
  float acc = 0.0f;
  for (size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

void matmul_nt(const float* a, size_t m, const float* b, size_t n, size_t k,
               float* c) {
  for (size_t i = 0; i < m; ++i) {
    const float* ai = a + i * k;
    float* ci = c + i * n;
    for (size_t j = 0; j < n; ++j) ci[j] = dot(ai, b + j * k, k);
  }
}

}  // namespace scalar

#ifdef CLWE_KERNELS_AVX2
namespace avx2 {
float dot(const float* a, const float* b, size_t n);
void axpy(float alpha, const float* x, float* y, size_t n);
void scale(float* x, float alpha, size_t n);
float sum(const float* x, size_t n);
void matmul_nt(const float* a, size_t m, const float* b, size_t n, size_t k,
               float* c);
}  // namespace avx2
#endif

namespace {

struct Vtable {
  float (*dot)(const float*, const float*, size_t);
  void (*axpy)(float, const float*, float*, size_t);
  void (*scale)(float*, float, size_t);
  float (*sum)(const float*, size_t);
  void (*matmul_nt)(const float*, size_t, const float*, size_t, size_t,
                    float*);
};

constexpr Vtable kScalarVtable = {scalar::dot, scalar::axpy, scalar::scale,
                                  scalar::sum, scalar::matmul_nt};

#ifdef CLWE_KERNELS_AVX2
constexpr Vtable kAvx2Vtable = {avx2::dot, avx2::axpy, avx2::scale, avx2::sum,
                                avx2::matmul_nt};
#endif

std::atomic<const Vtable*> g_vtable{nullptr};
std::atomic<Backend> g_backend{Backend::kScalar};

const Vtable* resolve() {
  const Vtable* v = g_vtable.load(std::memory_order_acquire);
  if (v) return v;
  init_from_environment();
  return g_vtable.load(std::memory_order_acquire);
}

}  // namespace

bool avx2_supported() {
#ifdef CLWE_KERNELS_AVX2
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

bool set_backend(Backend backend) {
  if (backend == Backend::kAvx2) {
#ifdef CLWE_KERNELS_AVX2
    if (!avx2_supported()) return false;
    g_vtable.store(&kAvx2Vtable, std::memory_order_release);
    g_backend.store(backend);
    return true;
#else
    return false;
#endif
  }
  g_vtable.store(&kScalarVtable, std::memory_order_release);
  g_backend.store(backend);
  return true;
}

void init_from_environment() {
  const char* env = std::getenv("CLWE_SIMD");
  if (env && std::strcmp(env, "scalar") == 0) {
    set_backend(Backend::kScalar);
    return;
  }
  if (env && std::strcmp(env, "avx2") == 0 && set_backend(Backend::kAvx2)) {
    return;
  }
  if (!set_backend(Backend::kAvx2)) set_backend(Backend::kScalar);
}

Backend active_backend() {
  resolve();
  return g_backend.load();
}

const char* backend_name() {
  return active_backend() == Backend::kAvx2 ? "avx2" : "scalar";
}

float dot(const float* a, const float* b, size_t n) {
  return resolve()->dot(a, b, n);
}

void axpy(float alpha, const float* x, float* y, size_t n) {
  resolve()->axpy(alpha, x, y, n);
}

void scale(float* x, float alpha, size_t n) { resolve()->scale(x, alpha, n); }

float sum(const float* x, size_t n) { return resolve()->sum(x, n); }

void matmul_nt(const float* a, size_t m, const float* b, size_t n, size_t k,
               float* c) {
  resolve()->matmul_nt(a, m, b, n, k, c);
}

}  // namespace clwe::kernels
