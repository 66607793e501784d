#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>

#include "crofton/errors.hpp"
#include "crofton/panel_kernels.hpp"

namespace crofton::simd {

namespace detail {

PanelSums count_scalar(const PanelView& panel, const PolylineView& polylines, std::int32_t* counts) {
    PanelSums sums;
    const std::size_t lines = polylines.starts.empty() ? 0 : polylines.starts.size() - 1;
    for (std::size_t j = 0; j < panel.padded_size; ++j) {
        const double c = panel.cos[j];
        const double s = panel.sin[j];
        const double p = panel.offset[j];
        std::int32_t n = 0;
        for (std::size_t k = 0; k < lines; ++k) {
            const std::uint32_t begin = polylines.starts[k];
            const std::uint32_t end = polylines.starts[k + 1];
            if (end - begin < 2) continue;
            bool prev = std::fma(polylines.xs[begin], c, std::fma(polylines.ys[begin], s, -p)) > 0.0;
            for (std::uint32_t i = begin + 1; i < end; ++i) {
                const bool side = std::fma(polylines.xs[i], c, std::fma(polylines.ys[i], s, -p)) > 0.0;
                n += side != prev;
                prev = side;
            }
        }
        if (counts) counts[j] = n;
        sums.s1 += n;
        sums.s2 += static_cast<double>(n) * n;
    }
    return sums;
}

}  // namespace detail

void set_bounds(PolylineView& view) {
    if (view.xs.empty()) return;
    const auto [xlo, xhi] = std::minmax_element(view.xs.begin(), view.xs.end());
    const auto [ylo, yhi] = std::minmax_element(view.ys.begin(), view.ys.end());
    view.cx = 0.5 * (*xlo + *xhi);
    view.cy = 0.5 * (*ylo + *yhi);
    double r2 = 0.0;
    for (std::size_t i = 0; i < view.xs.size(); ++i) {
        const double dx = view.xs[i] - view.cx, dy = view.ys[i] - view.cy;
        r2 = std::max(r2, dx * dx + dy * dy);
    }
    view.radius = std::sqrt(r2) * (1.0 + 1e-12);
}

std::string_view level_name(Level level) {
    switch (level) {
        case Level::Scalar: return "scalar";
        case Level::Avx2: return "avx2";
        case Level::Avx512: return "avx512";
    }
    return "unknown";
}

bool level_available(Level level) {
    switch (level) {
        case Level::Scalar: return true;
        case Level::Avx2:
#if defined(CROFTON_HAVE_AVX2)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Level::Avx512:
#if defined(CROFTON_HAVE_AVX512)
            return __builtin_cpu_supports("avx512f");
#else
            return false;
#endif
    }
    return false;
}

std::vector<Level> available_levels() {
    std::vector<Level> out;
    for (Level l : {Level::Scalar, Level::Avx2, Level::Avx512}) {
        if (level_available(l)) out.push_back(l);
    }
    return out;
}

namespace {
std::atomic<int> g_forced{-1};
}  // namespace

void force_level(std::optional<Level> level) {
    if (level && !level_available(*level)) throw InternalError("SIMD level not available on this machine");
    g_forced.store(level ? static_cast<int>(*level) : -1, std::memory_order_relaxed);
}

Level active_level() {
    if (const int forced = g_forced.load(std::memory_order_relaxed); forced >= 0) return static_cast<Level>(forced);
    static const Level level = [] {
        if (const char* env = std::getenv("CROFTON_SIMD")) {
            const std::string want(env);
            for (Level l : available_levels()) {
                if (level_name(l) == want) return l;
            }
        }
        return available_levels().back();
    }();
    return level;
}

PanelSums count_crossings(Level level, const PanelView& panel, const PolylineView& polylines, std::int32_t* counts) {
    if (panel.padded_size % kPanelPadding != 0) throw InternalError("panel size is not padded");
    if (!level_available(level)) throw InternalError("SIMD level not available on this machine");
    switch (level) {
#if defined(CROFTON_HAVE_AVX2)
        case Level::Avx2: return detail::count_avx2(panel, polylines, counts);
#endif
#if defined(CROFTON_HAVE_AVX512)
        case Level::Avx512: return detail::count_avx512(panel, polylines, counts);
#endif
        default: return detail::count_scalar(panel, polylines, counts);
    }
}

}  // namespace crofton::simd
