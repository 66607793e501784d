#pragma once

// Crossing counts of polylines against a fixed panel of lines.
//
// This is the optimizer's inner loop: every annealing step counts, for each
// panel line, how many polyline edges it crosses. A vertex v is on the
// positive side of line (c, s, p) when fma(x, c, fma(y, s, -p)) > 0, and an
// edge crosses the line when its two vertices are on different sides. The
// scalar kernel is the reference; the AVX2 and AVX-512 kernels perform the
// same fused operations lane-wise and must agree with it bit for bit.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace crofton::simd {

/// Panel lines are padded to a multiple of this lane count.
inline constexpr std::size_t kPanelPadding = 32;

/// Structure-of-arrays panel. Padding lines (cos = sin = 0, p = -1) keep every
/// vertex on one side and therefore never cross anything.
struct PanelView {
    const double* cos = nullptr;
    const double* sin = nullptr;
    const double* offset = nullptr;
    std::size_t padded_size = 0;  ///< multiple of kPanelPadding
};

/// Flat vertex arrays; polyline k spans [starts[k], starts[k+1]).
///
/// When `radius` is finite, every vertex lies within `radius` of (cx, cy), and
/// the vectorized kernels skip any block of kPanelPadding lines that all pass
/// farther than radius + kSkipMargin from that center: no edge can cross them.
struct PolylineView {
    std::span<const double> xs;
    std::span<const double> ys;
    std::span<const std::uint32_t> starts;
    double cx = 0.0;
    double cy = 0.0;
    double radius = std::numeric_limits<double>::infinity();
};

/// Slack on the bounding-disk test, far above the rounding of the side test.
inline constexpr double kSkipMargin = 1e-9;

/// Bounding disk of all vertices (centered at the box midpoint).
void set_bounds(PolylineView& view);

/// Exact integer sums of n and n^2 over the panel (stored as doubles).
struct PanelSums {
    double s1 = 0.0;
    double s2 = 0.0;
};

enum class Level { Scalar, Avx2, Avx512 };

std::string_view level_name(Level level);
bool level_available(Level level);
/// Every level compiled in and supported by this CPU, Scalar first.
std::vector<Level> available_levels();
/// Best available level, or the one named by CROFTON_SIMD (scalar, avx2,
/// avx512) when that is available.
Level active_level();
/// Overrides active_level() process-wide; nullopt restores the default.
void force_level(std::optional<Level> level);

/// Writes per-line counts when `counts` is non-null (padded_size entries) and
/// returns the sums over all panel lines.
PanelSums count_crossings(Level level, const PanelView& panel, const PolylineView& polylines,
                          std::int32_t* counts = nullptr);

inline PanelSums count_crossings(const PanelView& panel, const PolylineView& polylines,
                                 std::int32_t* counts = nullptr) {
    return count_crossings(active_level(), panel, polylines, counts);
}

namespace detail {
PanelSums count_scalar(const PanelView& panel, const PolylineView& polylines, std::int32_t* counts);
#if defined(CROFTON_HAVE_AVX2)
PanelSums count_avx2(const PanelView& panel, const PolylineView& polylines, std::int32_t* counts);
#endif
#if defined(CROFTON_HAVE_AVX512)
PanelSums count_avx512(const PanelView& panel, const PolylineView& polylines, std::int32_t* counts);
#endif
}  // namespace detail

}  // namespace crofton::simd
