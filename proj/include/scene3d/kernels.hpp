#pragma once

#include <cstddef>
#include <cstdint>

namespace scene3d::kernels {

// Data-parallel inner loops used by the Monte-Carlo sampling path and the
// token-fusion simulator. Each kernel has a scalar reference implementation
// and an AVX2 variant selected at runtime; the two are equivalence-tested
// (bit-exact for fill/count/add, 1e-12 relative for gemv reductions).

enum class Backend { scalar, avx2 };

// Detected once per process. SCENE3D_FORCE_SCALAR=1 in the environment
// pins the scalar path.
Backend active_backend();
const char* backend_name(Backend b);

// Four interleaved xoshiro256+ streams: step k emits one value per stream
// into out[4k + lane]. The scalar and AVX2 paths produce identical bits.
struct QuadRng {
    uint64_t s[4][4];  // s[word][lane]
    explicit QuadRng(uint64_t seed);
};

// Fills out[0..n) with uniform doubles in [0, 1).
void fill_uniform(QuadRng& rng, double* out, size_t n);

// Counts points with |M p + d| <= half componentwise, for M row-major 3x3.
// This is the oriented-box membership test with the box-frame transform
// folded into one affine map.
size_t count_inside_affine(const double* xs, const double* ys, const double* zs, size_t n,
                           const double m[9], const double d[3], const double half[3]);

// out = a + b elementwise.
void add_arrays(const double* a, const double* b, double* out, size_t n);

// y[r] = bias[r] + sum_j w[r*cols + j] * x[j].
void gemv(const double* w, size_t rows, size_t cols, const double* x, const double* bias,
          double* y);

namespace detail {
void fill_uniform_scalar(QuadRng& rng, double* out, size_t n);
size_t count_inside_affine_scalar(const double* xs, const double* ys, const double* zs, size_t n,
                                  const double m[9], const double d[3], const double half[3]);
void add_arrays_scalar(const double* a, const double* b, double* out, size_t n);
void gemv_scalar(const double* w, size_t rows, size_t cols, const double* x, const double* bias,
                 double* y);

#if defined(__x86_64__) || defined(__i386__)
void fill_uniform_avx2(QuadRng& rng, double* out, size_t n);
size_t count_inside_affine_avx2(const double* xs, const double* ys, const double* zs, size_t n,
                                const double m[9], const double d[3], const double half[3]);
void add_arrays_avx2(const double* a, const double* b, double* out, size_t n);
void gemv_avx2(const double* w, size_t rows, size_t cols, const double* x, const double* bias,
               double* y);
#endif
}  // namespace detail

}  // namespace scene3d::kernels
