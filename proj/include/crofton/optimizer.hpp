#pragma once

// Simulated annealing over polyline sets of fixed total length inside a convex
// domain, minimizing the variance of the intersection count over a fixed
// panel of hitting lines (common random numbers).

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "crofton/geometry.hpp"
#include "crofton/kinematic.hpp"
#include "crofton/panel_kernels.hpp"

namespace crofton {

struct Configuration {
    std::vector<std::vector<Vec2>> polylines;  ///< open polylines, >= 2 vertices each
    double target_length = 0.0;
};

double polyline_length(const Configuration& config);
std::size_t vertex_count(const Configuration& config);
RectSet to_rect_set(const Configuration& config);

/// Throws ValidationError unless every polyline has >= 2 vertices, all
/// vertices lie in the closed domain and the length matches the target to
/// 1e-9 relative.
void validate_configuration(const Configuration& config, const ConvexDomain& domain);

/// Fixed set of hitting lines, stored for the SIMD kernels.
class LinePanel {
public:
    /// The lines sample_hitting_line(space, i), i in [0, count), stored sorted
    /// into angular bands for the kernels; line(i) follows the stored order.
    LinePanel(const HittingLineSpace& space, std::size_t count);

    std::size_t size() const noexcept { return size_; }
    LineCoords line(std::size_t i) const;
    simd::PanelView view() const;

private:
    std::size_t size_;
    std::vector<double> cos_, sin_, offset_, phi_;
};

struct PanelStats {
    std::size_t lines = 0;
    double mean = 0.0;
    double variance = 0.0;  ///< E[n^2] - E[n]^2 over the panel
    double std_err_variance = 0.0;
};

/// Variance of the crossing count of the configuration over the panel.
double objective(const Configuration& config, const LinePanel& panel);
PanelStats panel_statistics(const Configuration& config, const LinePanel& panel);
/// Same statistics for a general set (arcs allowed), via exact piece counting.
PanelStats panel_statistics(const RectSet& set, const LinePanel& panel);

struct AnnealSchedule {
    std::uint64_t steps = 100'000;
    double initial_temp = 1e-3;
    double final_temp = 1e-6;
    std::size_t panel_size = 10'000;
    /// Vertex steps are Gaussian with deviation move_scale * temperature.
    double move_scale = 50.0;
    std::uint64_t seed = 42;
    /// Hard cap on vertices; splits also stop at vertex_budget().
    std::size_t max_vertices = 32;

    /// Throws ValidationError unless final < initial temperature, panel_size >= 10^4,
    /// steps >= 1 and move_scale > 0.
    void validate() const;
};

struct HistoryRecord {
    std::uint64_t step = 0;
    double temp = 0.0;
    double objective = 0.0;  ///< current objective after the step
    bool accepted = false;
};

struct AnnealResult {
    Configuration best;
    double best_panel_objective = 0.0;
    /// Best configuration re-evaluated on an independent panel 10x larger.
    PanelStats validation;
    double best_objective() const { return validation.variance; }
    std::vector<HistoryRecord> history;
    std::uint64_t accepted_moves = 0;
    std::uint64_t infeasible_moves = 0;
};

/// Vertices a split may grow a configuration to: 4 + ceil(24 L / P), at most
/// max_vertices. Short sets get few degrees of freedom to fit panel noise with.
std::size_t vertex_budget(const ConvexDomain& domain, double length, std::size_t max_vertices);

/// Projects every vertex into the domain, then scales each polyline about its
/// arc-length centroid by a common factor, solved so that the length after
/// clamping equals the target. Repeats up to `rounds` times; returns false when
/// the length could not be restored within 1e-12 relative.
bool restore_length(Configuration& config, const ConvexDomain& domain, int rounds = 8);

/// Runs one annealing chain. The panel depends on schedule.seed only; `chain`
/// selects an independent move stream so restarts share the panel.
AnnealResult anneal(const ConvexDomain& domain, double length, const Configuration& init,
                    const AnnealSchedule& schedule, std::uint64_t chain = 0);

using InitFactory = std::function<Configuration(std::uint64_t chain)>;

/// Independent restarts (run in parallel); returns the chain with the lowest
/// panel objective.
AnnealResult optimize(const ConvexDomain& domain, double length, const AnnealSchedule& schedule, int restarts,
                      const InitFactory& init);

/// Open polyline through `vertices_per_loop` points per turn of the boundary
/// (pulled toward the center by `inset`), continued until it has length L.
Configuration boundary_walk_configuration(const ConvexDomain& domain, double length, int vertices_per_loop,
                                          double inset = 1.0);

/// Random polyline with the given number of vertices, rescaled to length L.
/// Throws ValidationError if no feasible draw is found.
Configuration random_polyline_configuration(const ConvexDomain& domain, double length, int vertices,
                                            std::uint64_t seed);

/// Random 3-vertex polyline for short lengths, a boundary walk otherwise.
Configuration default_initial_configuration(const ConvexDomain& domain, double length, std::uint64_t seed);

struct SweepRow {
    double length = 0.0;
    double best_objective = 0.0;  ///< validated nu-variance
    double std_err = 0.0;         ///< standard error of best_objective
    double nu_lower = 0.0;        ///< {2L/P} - {2L/P}^2
    double nu_upper = 0.5;
    double best_panel_objective = 0.0;
};

SweepRow sweep_point(const ConvexDomain& domain, double length, const AnnealSchedule& schedule, int restarts);
std::vector<SweepRow> sweep(const ConvexDomain& domain, const std::vector<double>& lengths,
                            const AnnealSchedule& schedule, int restarts);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_history_csv(std::ostream& out, const std::vector<HistoryRecord>& history);

}  // namespace crofton
