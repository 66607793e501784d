// Compiled with -mavx2 -mfma; only called after a runtime CPU check.
#include <immintrin.h>

#include "crofton/panel_kernels.hpp"

namespace crofton::simd::detail {

namespace {

constexpr int kGroups = 4;  // independent 4-line groups per pass

inline __m256d side_mask(double x, double y, __m256d c, __m256d s, __m256d p) {
    const __m256d t = _mm256_fmsub_pd(_mm256_set1_pd(y), s, p);
    return _mm256_cmp_pd(_mm256_fmadd_pd(_mm256_set1_pd(x), c, t), _mm256_setzero_pd(), _CMP_GT_OQ);
}

}  // namespace

PanelSums count_avx2(const PanelView& panel, const PolylineView& polylines, std::int32_t* counts) {
    static_assert(kPanelPadding % (4 * kGroups) == 0);
    const std::size_t lines = polylines.starts.empty() ? 0 : polylines.starts.size() - 1;
    const double* xs = polylines.xs.data();
    const double* ys = polylines.ys.data();
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    const __m256d cx = _mm256_set1_pd(polylines.cx);
    const __m256d cy = _mm256_set1_pd(polylines.cy);
    const __m256d reach = _mm256_set1_pd(polylines.radius + kSkipMargin);
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFLL));
    for (std::size_t j = 0; j < panel.padded_size; j += 4 * kGroups) {
        __m256d c[kGroups], s[kGroups], p[kGroups], n[kGroups];
        bool near = false;
        for (int g = 0; g < kGroups; ++g) {
            c[g] = _mm256_loadu_pd(panel.cos + j + 4 * g);
            s[g] = _mm256_loadu_pd(panel.sin + j + 4 * g);
            p[g] = _mm256_loadu_pd(panel.offset + j + 4 * g);
            n[g] = _mm256_setzero_pd();
            const __m256d d = _mm256_fmadd_pd(cx, c[g], _mm256_fmsub_pd(cy, s[g], p[g]));
            near = near || _mm256_movemask_pd(_mm256_cmp_pd(_mm256_and_pd(d, abs_mask), reach, _CMP_LE_OQ)) != 0;
        }
        for (std::size_t k = 0; near && k < lines; ++k) {
            const std::uint32_t begin = polylines.starts[k];
            const std::uint32_t end = polylines.starts[k + 1];
            if (end - begin < 2) continue;
            __m256d prev[kGroups];
            for (int g = 0; g < kGroups; ++g) prev[g] = side_mask(xs[begin], ys[begin], c[g], s[g], p[g]);
            for (std::uint32_t i = begin + 1; i < end; ++i) {
                for (int g = 0; g < kGroups; ++g) {
                    const __m256d side = side_mask(xs[i], ys[i], c[g], s[g], p[g]);
                    n[g] = _mm256_add_pd(n[g], _mm256_and_pd(_mm256_xor_pd(side, prev[g]), one));
                    prev[g] = side;
                }
            }
        }
        for (int g = 0; g < kGroups; ++g) {
            if (counts) _mm_storeu_si128(reinterpret_cast<__m128i*>(counts + j + 4 * g), _mm256_cvtpd_epi32(n[g]));
            acc1 = _mm256_add_pd(acc1, n[g]);
            acc2 = _mm256_fmadd_pd(n[g], n[g], acc2);
        }
    }
    alignas(32) double l1[4], l2[4];
    _mm256_store_pd(l1, acc1);
    _mm256_store_pd(l2, acc2);
    return {l1[0] + l1[1] + l1[2] + l1[3], l2[0] + l2[1] + l2[2] + l2[3]};
}

}  // namespace crofton::simd::detail
