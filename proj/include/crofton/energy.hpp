#pragma once

// Self-projection energy
//
//   E(L) = int_L int_L |<n(x), y - x> <y - x, n(y)>| / |x - y|^3 dsigma(x) dsigma(y)
//
// evaluated piece pair by piece pair with adaptive product Gauss-Legendre
// quadrature on the arclength rectangle.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "crofton/geometry.hpp"

namespace crofton {

struct QuadratureSpec {
    double rel_tol = 1e-6;
    int max_depth = 40;
    /// Cells whose sub-pieces come closer than this are split until smaller than
    /// it before the error estimate is trusted. Defaults to 1e-3 times the
    /// longer piece of the pair.
    std::optional<double> singularity_split_radius;
    /// Upper bound on cells per pair; exceeding it degrades accuracy.
    std::size_t max_cells = 4'000'000;

    /// Throws ValidationError unless rel_tol is in (0, 1) and max_depth >= 4.
    void validate() const;
};

/// |(nx . (y - x)) ((y - x) . ny)| / |x - y|^3. Throws SingularityError when
/// |x - y| <= 1e-14.
double pair_kernel(Vec2 x, Vec2 nx, Vec2 y, Vec2 ny);

struct PairEnergy {
    double value = 0.0;
    double error_estimate = 0.0;
    bool accurate = true;
    std::size_t cells = 0;
};

/// Double integral of the kernel over piece A x piece B in arclength, without
/// multiplicities. Pass `self_pair` when A and B are the same piece; the
/// integrand is then extended by 0 on the diagonal.
PairEnergy energy_pair(const CurvePiece& a, const CurvePiece& b, const QuadratureSpec& spec = {},
                       bool self_pair = false);

struct PairRecord {
    std::size_t i = 0;
    std::size_t j = 0;
    double value = 0.0;  ///< energy_pair(i, j), multiplicities excluded
    bool accurate = true;
};

struct EnergyReport {
    double value = 0.0;
    bool accurate = true;
    std::vector<PairRecord> pairs;  ///< unordered pairs i <= j
};

/// Sum over ordered pairs (i, j), diagonal included, of m_i m_j energy_pair(i, j).
/// Throws ValidationError when two pieces overlap along a curve of positive
/// length (multiplicity must be used instead).
EnergyReport energy(const RectSet& set, const QuadratureSpec& spec = {});

/// Pieces i < j whose geometry overlaps with positive length.
std::vector<std::pair<std::size_t, std::size_t>> overlapping_pieces(const RectSet& set);

struct EnergyIdentity {
    double residual = 0.0;   ///< (Q - L) - E / 2
    double tolerance = 0.0;  ///< max(3 * MC standard error, 10 * rel_tol * E)
    double quarter_second_moment_mu = 0.0;
    double std_err = 0.0;
    double total_length = 0.0;
    double energy = 0.0;
    bool energy_accurate = true;
    bool passed() const { return std::abs(residual) <= tolerance; }
};

/// Compares the Monte Carlo quadratic Crofton functional with the quadrature
/// energy through (1/4) int n^2 dmu - L = E / 2.
EnergyIdentity energy_identity_check(const RectSet& set, const ConvexDomain& domain, std::uint64_t samples,
                                     std::uint64_t seed, const QuadratureSpec& spec = {});

}  // namespace crofton
