#include "scene3d/kernels.hpp"

#include <cmath>
#include <cstdlib>

#include "scene3d/rng.hpp"

#if defined(__x86_64__) || defined(__i386__)
#define SCENE3D_X86 1
#include <immintrin.h>
#else
#define SCENE3D_X86 0
#endif

namespace scene3d::kernels {

QuadRng::QuadRng(uint64_t seed) {
    uint64_t sm = seed;
    for (int lane = 0; lane < 4; ++lane)
        for (int word = 0; word < 4; ++word) s[word][lane] = splitmix64(sm);
}

Backend active_backend() {
    static const Backend backend = [] {
        if (const char* force = std::getenv("SCENE3D_FORCE_SCALAR");
            force != nullptr && force[0] == '1')
            return Backend::scalar;
#if SCENE3D_X86
        if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
            return Backend::avx2;
#endif
        return Backend::scalar;
    }();
    return backend;
}

const char* backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

// ---------------------------------------------------------------------------
// Scalar reference kernels
// ---------------------------------------------------------------------------

namespace detail {

namespace {
inline uint64_t rotl64(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

// One xoshiro256+ step for lane `lane`; identical update order to the
// vector path so outputs match bit for bit.
inline uint64_t quad_step(QuadRng& rng, int lane) {
    uint64_t& s0 = rng.s[0][lane];
    uint64_t& s1 = rng.s[1][lane];
    uint64_t& s2 = rng.s[2][lane];
    uint64_t& s3 = rng.s[3][lane];
    const uint64_t result = s0 + s3;
    const uint64_t t = s1 << 17;
    s2 ^= s0;
    s3 ^= s1;
    s1 ^= s2;
    s0 ^= s3;
    s2 ^= t;
    s3 = rotl64(s3, 45);
    return result;
}

inline double to_unit(uint64_t v) { return static_cast<double>(v >> 12) * 0x1.0p-52; }
}  // namespace

void fill_uniform_scalar(QuadRng& rng, double* out, size_t n) {
    size_t i = 0;
    while (i < n) {
        uint64_t step[4];
        for (int lane = 0; lane < 4; ++lane) step[lane] = quad_step(rng, lane);
        for (int lane = 0; lane < 4 && i < n; ++lane) out[i++] = to_unit(step[lane]);
    }
}

size_t count_inside_affine_scalar(const double* xs, const double* ys, const double* zs, size_t n,
                                  const double m[9], const double d[3], const double half[3]) {
    size_t count = 0;
    for (size_t i = 0; i < n; ++i) {
        const double x = xs[i], y = ys[i], z = zs[i];
        // fma chains mirror the vector path exactly
        const double r0 = std::fma(m[0], x, std::fma(m[1], y, std::fma(m[2], z, d[0])));
        const double r1 = std::fma(m[3], x, std::fma(m[4], y, std::fma(m[5], z, d[1])));
        const double r2 = std::fma(m[6], x, std::fma(m[7], y, std::fma(m[8], z, d[2])));
        if (std::abs(r0) <= half[0] && std::abs(r1) <= half[1] && std::abs(r2) <= half[2])
            ++count;
    }
    return count;
}

void add_arrays_scalar(const double* a, const double* b, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void gemv_scalar(const double* w, size_t rows, size_t cols, const double* x, const double* bias,
                 double* y) {
    for (size_t r = 0; r < rows; ++r) {
        double acc = 0.0;
        const double* wr = w + r * cols;
        for (size_t j = 0; j < cols; ++j) acc += wr[j] * x[j];
        y[r] = acc + (bias != nullptr ? bias[r] : 0.0);
    }
}

// ---------------------------------------------------------------------------
// AVX2 kernels (compiled for all x86 builds, executed only when the CPU
// reports avx2+fma)
// ---------------------------------------------------------------------------

#if SCENE3D_X86

__attribute__((target("avx2,fma"))) void fill_uniform_avx2(QuadRng& rng, double* out, size_t n) {
    __m256i s0 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(rng.s[0]));
    __m256i s1 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(rng.s[1]));
    __m256i s2 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(rng.s[2]));
    __m256i s3 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(rng.s[3]));

    const __m256i magic_bits = _mm256_set1_epi64x(0x4330000000000000LL);  // 2^52
    const __m256d magic = _mm256_set1_pd(0x1.0p52);
    const __m256d scale = _mm256_set1_pd(0x1.0p-52);

    size_t i = 0;
    while (i < n) {
        const __m256i result = _mm256_add_epi64(s0, s3);
        const __m256i t = _mm256_slli_epi64(s1, 17);
        s2 = _mm256_xor_si256(s2, s0);
        s3 = _mm256_xor_si256(s3, s1);
        s1 = _mm256_xor_si256(s1, s2);
        s0 = _mm256_xor_si256(s0, s3);
        s2 = _mm256_xor_si256(s2, t);
        s3 = _mm256_or_si256(_mm256_slli_epi64(s3, 45), _mm256_srli_epi64(s3, 64 - 45));

        // (result >> 12) has 52 bits; the 2^52 bias trick converts exactly.
        const __m256i mant = _mm256_srli_epi64(result, 12);
        const __m256d asdbl =
            _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(mant, magic_bits)), magic);
        const __m256d unit = _mm256_mul_pd(asdbl, scale);

        if (i + 4 <= n) {
            _mm256_storeu_pd(out + i, unit);
            i += 4;
        } else {
            alignas(32) double tmp[4];
            _mm256_store_pd(tmp, unit);
            for (int lane = 0; lane < 4 && i < n; ++lane) out[i++] = tmp[lane];
        }
    }

    _mm256_storeu_si256(reinterpret_cast<__m256i*>(rng.s[0]), s0);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(rng.s[1]), s1);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(rng.s[2]), s2);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(rng.s[3]), s3);
}

__attribute__((target("avx2,fma"))) size_t count_inside_affine_avx2(
    const double* xs, const double* ys, const double* zs, size_t n, const double m[9],
    const double d[3], const double half[3]) {
    const __m256d m00 = _mm256_set1_pd(m[0]), m01 = _mm256_set1_pd(m[1]),
                  m02 = _mm256_set1_pd(m[2]);
    const __m256d m10 = _mm256_set1_pd(m[3]), m11 = _mm256_set1_pd(m[4]),
                  m12 = _mm256_set1_pd(m[5]);
    const __m256d m20 = _mm256_set1_pd(m[6]), m21 = _mm256_set1_pd(m[7]),
                  m22 = _mm256_set1_pd(m[8]);
    const __m256d d0 = _mm256_set1_pd(d[0]), d1 = _mm256_set1_pd(d[1]), d2 = _mm256_set1_pd(d[2]);
    const __m256d h0 = _mm256_set1_pd(half[0]), h1 = _mm256_set1_pd(half[1]),
                  h2 = _mm256_set1_pd(half[2]);
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFLL));

    size_t count = 0;
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(xs + i);
        const __m256d y = _mm256_loadu_pd(ys + i);
        const __m256d z = _mm256_loadu_pd(zs + i);
        const __m256d r0 = _mm256_fmadd_pd(m00, x, _mm256_fmadd_pd(m01, y, _mm256_fmadd_pd(m02, z, d0)));
        const __m256d r1 = _mm256_fmadd_pd(m10, x, _mm256_fmadd_pd(m11, y, _mm256_fmadd_pd(m12, z, d1)));
        const __m256d r2 = _mm256_fmadd_pd(m20, x, _mm256_fmadd_pd(m21, y, _mm256_fmadd_pd(m22, z, d2)));
        __m256d in0 = _mm256_cmp_pd(_mm256_and_pd(r0, absmask), h0, _CMP_LE_OQ);
        __m256d in1 = _mm256_cmp_pd(_mm256_and_pd(r1, absmask), h1, _CMP_LE_OQ);
        __m256d in2 = _mm256_cmp_pd(_mm256_and_pd(r2, absmask), h2, _CMP_LE_OQ);
        const int mask = _mm256_movemask_pd(_mm256_and_pd(in0, _mm256_and_pd(in1, in2)));
        count += static_cast<size_t>(__builtin_popcount(static_cast<unsigned>(mask)));
    }
    if (i < n) count += count_inside_affine_scalar(xs + i, ys + i, zs + i, n - i, m, d, half);
    return count;
}

__attribute__((target("avx2,fma"))) void add_arrays_avx2(const double* a, const double* b,
                                                         double* out, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] + b[i];
}

__attribute__((target("avx2,fma"))) void gemv_avx2(const double* w, size_t rows, size_t cols,
                                                   const double* x, const double* bias,
                                                   double* y) {
    for (size_t r = 0; r < rows; ++r) {
        const double* wr = w + r * cols;
        __m256d acc = _mm256_setzero_pd();
        size_t j = 0;
        for (; j + 4 <= cols; j += 4)
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(wr + j), _mm256_loadu_pd(x + j), acc);
        alignas(32) double lanes[4];
        _mm256_store_pd(lanes, acc);
        double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
        for (; j < cols; ++j) sum += wr[j] * x[j];
        y[r] = sum + (bias != nullptr ? bias[r] : 0.0);
    }
}

#endif  // SCENE3D_X86

}  // namespace detail

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

void fill_uniform(QuadRng& rng, double* out, size_t n) {
#if SCENE3D_X86
    if (active_backend() == Backend::avx2) return detail::fill_uniform_avx2(rng, out, n);
#endif
    detail::fill_uniform_scalar(rng, out, n);
}

size_t count_inside_affine(const double* xs, const double* ys, const double* zs, size_t n,
                           const double m[9], const double d[3], const double half[3]) {
#if SCENE3D_X86
    if (active_backend() == Backend::avx2)
        return detail::count_inside_affine_avx2(xs, ys, zs, n, m, d, half);
#endif
    return detail::count_inside_affine_scalar(xs, ys, zs, n, m, d, half);
}

void add_arrays(const double* a, const double* b, double* out, size_t n) {
#if SCENE3D_X86
    if (active_backend() == Backend::avx2) return detail::add_arrays_avx2(a, b, out, n);
#endif
    detail::add_arrays_scalar(a, b, out, n);
}

void gemv(const double* w, size_t rows, size_t cols, const double* x, const double* bias,
          double* y) {
#if SCENE3D_X86
    if (active_backend() == Backend::avx2) return detail::gemv_avx2(w, rows, cols, x, bias, y);
#endif
    detail::gemv_scalar(w, rows, cols, x, bias, y);
}

}  // namespace scene3d::kernels
