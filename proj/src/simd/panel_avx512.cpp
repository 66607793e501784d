// Compiled with -mavx512f; only called after a runtime CPU check.
#include <immintrin.h>

#include "crofton/panel_kernels.hpp"

namespace crofton::simd::detail {

namespace {

constexpr int kGroups = 4;  // independent 8-line groups per pass

inline __mmask8 side_mask(double x, double y, __m512d c, __m512d s, __m512d p) {
    const __m512d t = _mm512_fmsub_pd(_mm512_set1_pd(y), s, p);
    return _mm512_cmp_pd_mask(_mm512_fmadd_pd(_mm512_set1_pd(x), c, t), _mm512_setzero_pd(), _CMP_GT_OQ);
}

}  // namespace

PanelSums count_avx512(const PanelView& panel, const PolylineView& polylines, std::int32_t* counts) {
    static_assert(kPanelPadding % (8 * kGroups) == 0);
    const std::size_t lines = polylines.starts.empty() ? 0 : polylines.starts.size() - 1;
    const double* xs = polylines.xs.data();
    const double* ys = polylines.ys.data();
    const __m512d one = _mm512_set1_pd(1.0);
    __m512d acc1 = _mm512_setzero_pd();
    __m512d acc2 = _mm512_setzero_pd();
    const __m512d cx = _mm512_set1_pd(polylines.cx);
    const __m512d cy = _mm512_set1_pd(polylines.cy);
    const __m512d reach = _mm512_set1_pd(polylines.radius + kSkipMargin);
    for (std::size_t j = 0; j < panel.padded_size; j += 8 * kGroups) {
        __m512d c[kGroups], s[kGroups], p[kGroups], n[kGroups];
        bool near = false;
        for (int g = 0; g < kGroups; ++g) {
            c[g] = _mm512_loadu_pd(panel.cos + j + 8 * g);
            s[g] = _mm512_loadu_pd(panel.sin + j + 8 * g);
            p[g] = _mm512_loadu_pd(panel.offset + j + 8 * g);
            n[g] = _mm512_setzero_pd();
            const __m512d d = _mm512_fmadd_pd(cx, c[g], _mm512_fmsub_pd(cy, s[g], p[g]));
            near = near || _mm512_cmp_pd_mask(_mm512_abs_pd(d), reach, _CMP_LE_OQ) != 0;
        }
        for (std::size_t k = 0; near && k < lines; ++k) {
            const std::uint32_t begin = polylines.starts[k];
            const std::uint32_t end = polylines.starts[k + 1];
            if (end - begin < 2) continue;
            __mmask8 prev[kGroups];
            for (int g = 0; g < kGroups; ++g) prev[g] = side_mask(xs[begin], ys[begin], c[g], s[g], p[g]);
            for (std::uint32_t i = begin + 1; i < end; ++i) {
                for (int g = 0; g < kGroups; ++g) {
                    const __mmask8 side = side_mask(xs[i], ys[i], c[g], s[g], p[g]);
                    n[g] = _mm512_mask_add_pd(n[g], static_cast<__mmask8>(side ^ prev[g]), n[g], one);
                    prev[g] = side;
                }
            }
        }
        for (int g = 0; g < kGroups; ++g) {
            if (counts) _mm256_storeu_si256(reinterpret_cast<__m256i*>(counts + j + 8 * g), _mm512_cvtpd_epi32(n[g]));
            acc1 = _mm512_add_pd(acc1, n[g]);
            acc2 = _mm512_fmadd_pd(n[g], n[g], acc2);
        }
    }
    return {_mm512_reduce_add_pd(acc1), _mm512_reduce_add_pd(acc2)};
}

}  // namespace crofton::simd::detail
