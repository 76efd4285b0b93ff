#pragma once

#include <cstddef>
#include <string>

// Data-parallel inner loops shared by the embedding trainer, the mapping
// solver and all retrieval code. Scalar reference implementations always
// exist; an AVX2 variant is selected at runtime when the CPU supports it.
// The two variants are equivalence-tested against each other.

namespace clwe::kernels {

// y_i accumulated in float; deterministic for a fixed backend.
float dot(const float* a, const float* b, size_t n);

// y += alpha * x
void axpy(float alpha, const float* x, float* y, size_t n);

// x *= alpha
void scale(float* x, float alpha, size_t n);

float sum(const float* x, size_t n);

// C = A * B^T, row-major. A is m x k, B is n x k, C is m x n.
// Each C entry is an independent dot product, so results do not depend on
// how callers partition rows across threads.
void matmul_nt(const float* a, size_t m, const float* b, size_t n, size_t k,
               float* c);

enum class Backend { kScalar, kAvx2 };

Backend active_backend();
const char* backend_name();

// Returns false if the requested backend is not available on this CPU.
bool set_backend(Backend backend);

// Honors the CLWE_SIMD environment variable ("scalar" or "avx2") on first
// use; otherwise picks the widest supported backend.
void init_from_environment();

bool avx2_supported();

}  // namespace clwe::kernels
