// AVX2 variants of the vector kernels. This translation unit is the only one
// built with -mavx2; callers reach it through the runtime dispatch in
// kernels.cpp. The pointwise kernels (waxpby, soft_threshold) use mul+add
// rather than FMA so they round identically to the scalar reference.

#include "homfem/kernels.hpp"

#if defined(HOMFEM_WITH_AVX2)

#include <immintrin.h>

#include <cmath>

namespace homfem::kernels {

namespace {

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xv = _mm256_loadu_pd(x + i);
        __m256d yv = _mm256_loadu_pd(y + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(xv, yv));
    }
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d s2 = _mm_add_pd(lo, hi);
    __m128d s1 = _mm_add_sd(s2, _mm_unpackhi_pd(s2, s2));
    double s = _mm_cvtsd_f64(s1);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void waxpby_avx2(double a, const double* x, double b, const double* y,
                 double* w, std::size_t n) {
    __m256d av = _mm256_set1_pd(a);
    __m256d bv = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xv = _mm256_loadu_pd(x + i);
        __m256d yv = _mm256_loadu_pd(y + i);
        __m256d r = _mm256_add_pd(_mm256_mul_pd(av, xv), _mm256_mul_pd(bv, yv));
        _mm256_storeu_pd(w + i, r);
    }
    for (; i < n; ++i) w[i] = a * x[i] + b * y[i];
}

void spmv_avx2(const std::int32_t* row_ptr, const std::int32_t* col,
               const double* val, const double* x, double* y,
               std::size_t n_rows) {
    for (std::size_t r = 0; r < n_rows; ++r) {
        std::int32_t k = row_ptr[r];
        const std::int32_t end = row_ptr[r + 1];
        __m256d acc = _mm256_setzero_pd();
        for (; k + 4 <= end; k += 4) {
            __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(col + k));
            __m256d xv = _mm256_i32gather_pd(x, idx, 8);
            __m256d vv = _mm256_loadu_pd(val + k);
            acc = _mm256_add_pd(acc, _mm256_mul_pd(vv, xv));
        }
        __m128d lo = _mm256_castpd256_pd128(acc);
        __m128d hi = _mm256_extractf128_pd(acc, 1);
        __m128d s2 = _mm_add_pd(lo, hi);
        __m128d s1 = _mm_add_sd(s2, _mm_unpackhi_pd(s2, s2));
        double s = _mm_cvtsd_f64(s1);
        for (; k < end; ++k) s += val[k] * x[col[k]];
        y[r] = s;
    }
}

void soft_threshold_avx2(const double* z, const double* tau, double* out,
                         std::size_t n) {
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d zv = _mm256_loadu_pd(z + i);
        __m256d tv = _mm256_loadu_pd(tau + i);
        __m256d sign = _mm256_and_pd(zv, sign_mask);
        __m256d mag = _mm256_sub_pd(_mm256_andnot_pd(sign_mask, zv), tv);
        mag = _mm256_max_pd(mag, zero);
        // Clamp to +0.0 like the scalar reference instead of -0.0.
        __m256d pos = _mm256_cmp_pd(mag, zero, _CMP_GT_OQ);
        _mm256_storeu_pd(out + i, _mm256_or_pd(mag, _mm256_and_pd(sign, pos)));
    }
    for (; i < n; ++i) {
        double m = std::fabs(z[i]) - tau[i];
        out[i] = m > 0.0 ? std::copysign(m, z[i]) : 0.0;
    }
}

const Backend kAvx2{"avx2", dot_avx2, waxpby_avx2, spmv_avx2,
                    soft_threshold_avx2};

}  // namespace

const Backend& avx2_backend_impl() { return kAvx2; }

}  // namespace homfem::kernels

#endif  // HOMFEM_WITH_AVX2
