#include "crofton/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <random>

#include "crofton/bounds.hpp"
#include "crofton/errors.hpp"
#include "crofton/parallel.hpp"
#include "crofton/rng.hpp"

namespace crofton {

namespace {

constexpr double kLengthTol = 1e-12;  // relative length error accepted after restoration
constexpr int kTournament = 3;
constexpr double kVerticesPerLoop = 24.0;  // split budget per boundary length of polyline
constexpr std::size_t kSortBand = 8 * simd::kPanelPadding;  // lines per angular band of a panel  // candidates compared by split and delete moves
constexpr std::uint64_t kPanelLabel = 0x70616e656cULL;       // "panel"
constexpr std::uint64_t kValidationLabel = 0x76616c6964ULL;  // "valid"
constexpr std::uint64_t kChainLabel = 0x636861696eULL;       // "chain"

// Flattened working copy used inside the annealing loop.
struct FlatConfig {
    std::vector<double> xs, ys;
    std::vector<std::uint32_t> starts;  // polyline k spans [starts[k], starts[k+1])

    static FlatConfig from(const Configuration& c) {
        FlatConfig f;
        f.starts.push_back(0);
        for (const auto& line : c.polylines) {
            for (const auto& v : line) {
                f.xs.push_back(v.x);
                f.ys.push_back(v.y);
            }
            f.starts.push_back(static_cast<std::uint32_t>(f.xs.size()));
        }
        return f;
    }

    Configuration to(double target) const {
        Configuration c;
        c.target_length = target;
        for (std::size_t k = 0; k + 1 < starts.size(); ++k) {
            std::vector<Vec2> line;
            for (std::uint32_t i = starts[k]; i < starts[k + 1]; ++i) line.push_back({xs[i], ys[i]});
            c.polylines.push_back(std::move(line));
        }
        return c;
    }

    std::size_t polylines() const { return starts.size() - 1; }
    std::size_t vertices() const { return xs.size(); }
    Vec2 vertex(std::size_t i) const { return {xs[i], ys[i]}; }
    void set(std::size_t i, Vec2 v) {
        xs[i] = v.x;
        ys[i] = v.y;
    }

    simd::PolylineView view() const {
        simd::PolylineView v{xs, ys, starts};
        simd::set_bounds(v);
        return v;
    }

    double length() const {
        double total = 0.0;
        for (std::size_t k = 0; k < polylines(); ++k) {
            for (std::uint32_t i = starts[k] + 1; i < starts[k + 1]; ++i) {
                total += std::hypot(xs[i] - xs[i - 1], ys[i] - ys[i - 1]);
            }
        }
        return total;
    }

    void insert(std::size_t at, Vec2 v, std::size_t polyline) {
        xs.insert(xs.begin() + static_cast<std::ptrdiff_t>(at), v.x);
        ys.insert(ys.begin() + static_cast<std::ptrdiff_t>(at), v.y);
        for (std::size_t k = polyline + 1; k < starts.size(); ++k) ++starts[k];
    }

    void erase(std::size_t at, std::size_t polyline) {
        xs.erase(xs.begin() + static_cast<std::ptrdiff_t>(at));
        ys.erase(ys.begin() + static_cast<std::ptrdiff_t>(at));
        for (std::size_t k = polyline + 1; k < starts.size(); ++k) --starts[k];
    }

    // Arc-length centroid of polyline k (vertex mean when it has zero length).
    Vec2 centroid(std::size_t k) const {
        const std::uint32_t b = starts[k], e = starts[k + 1];
        Vec2 weighted;
        double total = 0.0;
        for (std::uint32_t i = b + 1; i < e; ++i) {
            const double w = std::hypot(xs[i] - xs[i - 1], ys[i] - ys[i - 1]);
            weighted += (vertex(i) + vertex(i - 1)) * (0.5 * w);
            total += w;
        }
        if (total > 0.0) return weighted / total;
        Vec2 mean;
        for (std::uint32_t i = b; i < e; ++i) mean += vertex(i);
        return mean / static_cast<double>(e - b);
    }

    std::size_t polyline_of(std::size_t vertex) const {
        const auto it = std::upper_bound(starts.begin(), starts.end(), static_cast<std::uint32_t>(vertex));
        return static_cast<std::size_t>(it - starts.begin()) - 1;
    }
};

// One clamp-rescale round: with centroids fixed, finds the factor lambda for
// which the clamped, rescaled polylines have the target length. Returns false
// when no factor reaches it (the set is pinned against the boundary); the
// configuration is then left in its most stretched clamped state.
bool rescale_round(FlatConfig& f, const ConvexDomain& domain, double target) {
    std::vector<Vec2> centroids(f.polylines());
    for (std::size_t k = 0; k < f.polylines(); ++k) centroids[k] = f.centroid(k);
    FlatConfig trial = f;
    auto length_at = [&](double lambda) {
        for (std::size_t k = 0; k < f.polylines(); ++k) {
            for (std::uint32_t i = f.starts[k]; i < f.starts[k + 1]; ++i) {
                trial.set(i, project_to_domain(domain, centroids[k] + (f.vertex(i) - centroids[k]) * lambda));
            }
        }
        return trial.length() - target;
    };
    const double current = f.length();
    double lo = 1.0, glo = current - target;
    if (std::abs(glo) <= kLengthTol * target) return true;
    // The plain ratio is exact when no vertex gets clamped.
    double hi = target / current, ghi = length_at(hi);
    if (std::abs(ghi) <= kLengthTol * target) {
        f = trial;
        return true;
    }
    for (int i = 0; i < 6 && (ghi < 0.0) == (glo < 0.0); ++i) {
        const double step = 2.0 * (hi - lo);
        lo = hi;
        glo = ghi;
        hi = lo + step;
        if (!(hi > 0.0)) return false;
        ghi = length_at(hi);
    }
    if ((ghi < 0.0) == (glo < 0.0)) {
        // Keep the clamped state; the next round starts from new centroids.
        f = trial;
        return false;
    }
    // Illinois variant of regula falsi.
    int side = 0;
    for (int i = 0; i < 100 && std::abs(hi - lo) > 1e-15 * std::abs(hi); ++i) {
        const double mid = (lo * ghi - hi * glo) / (ghi - glo);
        const double g = length_at(mid);
        if (std::abs(g) <= kLengthTol * target) {
            f = trial;
            return true;
        }
        if ((g < 0.0) == (ghi < 0.0)) {
            hi = mid;
            ghi = g;
            if (side == -1) glo *= 0.5;
            side = -1;
        } else {
            lo = mid;
            glo = g;
            if (side == 1) ghi *= 0.5;
            side = 1;
        }
    }
    return false;
}

bool restore_flat(FlatConfig& f, const ConvexDomain& domain, double target, int rounds) {
    for (std::size_t i = 0; i < f.vertices(); ++i) f.set(i, project_to_domain(domain, f.vertex(i)));
    for (int round = 0; round < rounds; ++round) {
        if (!(f.length() > 0.0)) return false;
        if (rescale_round(f, domain, target)) return true;
    }
    return false;
}

PanelStats stats_from_counts(const std::int32_t* counts, std::size_t n) {
    std::map<std::int32_t, std::uint64_t> histogram;
    for (std::size_t j = 0; j < n; ++j) ++histogram[counts[j]];
    PanelStats s;
    s.lines = n;
    if (n == 0) return s;
    long double e1 = 0, e2 = 0, e3 = 0, e4 = 0;
    for (const auto& [value, freq] : histogram) {
        const long double v = value, w = static_cast<long double>(freq) / n;
        e1 += w * v;
        e2 += w * v * v;
        e3 += w * v * v * v;
        e4 += w * v * v * v * v;
    }
    s.mean = static_cast<double>(e1);
    s.variance = static_cast<double>(e2 - e1 * e1);
    const long double mu2 = e2 - e1 * e1;
    const long double mu4 = e4 - 4 * e1 * e3 + 6 * e1 * e1 * e2 - 3 * e1 * e1 * e1 * e1;
    s.std_err_variance = static_cast<double>(std::sqrt(std::max(0.0L, mu4 - mu2 * mu2) / n));
    return s;
}

Vec2 boundary_point(const ConvexDomain& domain, double fraction) {
    return std::visit(
        [&](const auto& d) -> Vec2 {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Disk>) {
                return d.center + unit_direction(kTwoPi * fraction) * d.radius;
            } else if constexpr (std::is_same_v<T, Ellipse>) {
                const double t = kTwoPi * fraction;
                const Vec2 e1 = unit_direction(d.rotation);
                return d.center + e1 * (d.semi_major * std::cos(t)) + perp(e1) * (d.semi_minor * std::sin(t));
            } else {
                const auto& v = d.vertices;
                double total = 0.0;
                for (std::size_t i = 0; i < v.size(); ++i) total += distance(v[i], v[(i + 1) % v.size()]);
                double s = (fraction - std::floor(fraction)) * total;
                for (std::size_t i = 0; i < v.size(); ++i) {
                    const double len = distance(v[i], v[(i + 1) % v.size()]);
                    if (s <= len) return v[i] + (v[(i + 1) % v.size()] - v[i]) * (s / len);
                    s -= len;
                }
                return v[0];
            }
        },
        domain.shape());
}

}  // namespace

std::size_t vertex_budget(const ConvexDomain& domain, double length, std::size_t max_vertices) {
    const double loops = length / domain_perimeter(domain);
    const auto wanted = static_cast<std::size_t>(4 + std::ceil(kVerticesPerLoop * loops));
    return std::min(max_vertices, wanted);
}

double polyline_length(const Configuration& config) { return FlatConfig::from(config).length(); }

std::size_t vertex_count(const Configuration& config) {
    std::size_t n = 0;
    for (const auto& line : config.polylines) n += line.size();
    return n;
}

RectSet to_rect_set(const Configuration& config) {
    std::vector<CurvePiece> pieces;
    for (const auto& line : config.polylines) {
        for (std::size_t i = 1; i < line.size(); ++i) {
            if (line[i] != line[i - 1]) pieces.push_back(CurvePiece::segment(line[i - 1], line[i]));
        }
    }
    return RectSet(std::move(pieces));
}

void validate_configuration(const Configuration& config, const ConvexDomain& domain) {
    if (!(config.target_length > 0.0)) throw ValidationError("target length must be positive");
    if (config.polylines.empty()) throw ValidationError("configuration has no polylines");
    for (std::size_t k = 0; k < config.polylines.size(); ++k) {
        const auto& line = config.polylines[k];
        if (line.size() < 2) throw ValidationError("polyline " + std::to_string(k) + " has fewer than 2 vertices");
        for (const auto& v : line) {
            if (!contains(domain, v, kGeometryEps)) {
                throw ValidationError("polyline " + std::to_string(k) + " leaves the domain");
            }
        }
    }
    const double len = polyline_length(config);
    if (std::abs(len - config.target_length) > 1e-9 * config.target_length) {
        throw ValidationError("configuration length " + std::to_string(len) + " differs from target " +
                              std::to_string(config.target_length));
    }
}

LinePanel::LinePanel(const HittingLineSpace& space, std::size_t count) : size_(count) {
    std::vector<LineCoords> drawn(count);
    for (std::size_t i = 0; i < count; ++i) drawn[i] = sample_hitting_line(space, i);
    // Blocks of nearby lines (close in angle, then in offset) let the kernels
    // skip whole blocks that miss a small configuration. Order does not change
    // any statistic.
    std::sort(drawn.begin(), drawn.end(), [](const LineCoords& a, const LineCoords& b) { return a.phi < b.phi; });
    for (std::size_t b = 0; b < count; b += kSortBand) {
        const auto end = drawn.begin() + static_cast<std::ptrdiff_t>(std::min(count, b + kSortBand));
        std::sort(drawn.begin() + static_cast<std::ptrdiff_t>(b), end,
                  [](const LineCoords& x, const LineCoords& y) { return x.p < y.p; });
    }
    const std::size_t padded = (count + simd::kPanelPadding - 1) / simd::kPanelPadding * simd::kPanelPadding;
    cos_.assign(padded, 0.0);
    sin_.assign(padded, 0.0);
    offset_.assign(padded, -1.0);
    phi_.assign(padded, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        cos_[i] = std::cos(drawn[i].phi);
        sin_[i] = std::sin(drawn[i].phi);
        offset_[i] = drawn[i].p;
        phi_[i] = drawn[i].phi;
    }
}

LineCoords LinePanel::line(std::size_t i) const { return {phi_.at(i), offset_.at(i)}; }

simd::PanelView LinePanel::view() const { return {cos_.data(), sin_.data(), offset_.data(), cos_.size()}; }

double objective(const Configuration& config, const LinePanel& panel) {
    const auto flat = FlatConfig::from(config);
    const auto sums = simd::count_crossings(panel.view(), flat.view());
    const double n = static_cast<double>(panel.size());
    const double mean = sums.s1 / n;
    return sums.s2 / n - mean * mean;
}

PanelStats panel_statistics(const Configuration& config, const LinePanel& panel) {
    const auto flat = FlatConfig::from(config);
    std::vector<std::int32_t> counts(panel.view().padded_size);
    simd::count_crossings(panel.view(), flat.view(), counts.data());
    return stats_from_counts(counts.data(), panel.size());
}

PanelStats panel_statistics(const RectSet& set, const LinePanel& panel) {
    std::vector<std::int32_t> counts(panel.size());
    for (std::size_t j = 0; j < panel.size(); ++j) counts[j] = count_intersections(panel.line(j), set);
    return stats_from_counts(counts.data(), counts.size());
}

void AnnealSchedule::validate() const {
    if (steps < 1) throw ValidationError("annealing needs at least one step");
    if (!(initial_temp > 0.0) || !(final_temp > 0.0)) throw ValidationError("temperatures must be positive");
    if (!(final_temp < initial_temp)) throw ValidationError("final temperature must be below the initial one");
    if (panel_size < 10'000) throw ValidationError("panel size must be at least 10^4");
    if (!(move_scale > 0.0)) throw ValidationError("move scale must be positive");
    if (max_vertices < 2) throw ValidationError("max_vertices must be at least 2");
}

bool restore_length(Configuration& config, const ConvexDomain& domain, int rounds) {
    auto flat = FlatConfig::from(config);
    const bool ok = restore_flat(flat, domain, config.target_length, rounds);
    config = flat.to(config.target_length);
    return ok;
}

AnnealResult anneal(const ConvexDomain& domain, double length, const Configuration& init,
                    const AnnealSchedule& schedule, std::uint64_t chain) {
    schedule.validate();
    if (std::abs(init.target_length - length) > 1e-12 * length) {
        throw ValidationError("initial configuration has a different target length");
    }
    validate_configuration(init, domain);

    const LinePanel panel(HittingLineSpace(domain, derive_seed(schedule.seed, kPanelLabel)), schedule.panel_size);
    const auto view = panel.view();
    const double lines = static_cast<double>(panel.size());
    auto evaluate = [&](const FlatConfig& f) {
        const auto sums = simd::count_crossings(view, f.view());
        const double mean = sums.s1 / lines;
        return sums.s2 / lines - mean * mean;
    };

    const std::size_t vertex_cap = vertex_budget(domain, length, schedule.max_vertices);
    SampleStream rng(derive_seed(schedule.seed, kChainLabel + chain), 0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    FlatConfig current = FlatConfig::from(init);
    FlatConfig candidate = current;
    double current_obj = evaluate(current);
    FlatConfig best = current;
    double best_obj = current_obj;

    AnnealResult result;
    result.history.reserve(schedule.steps);
    const double ratio = schedule.final_temp / schedule.initial_temp;
    for (std::uint64_t step = 0; step < schedule.steps; ++step) {
        const double frac = schedule.steps > 1 ? static_cast<double>(step) / static_cast<double>(schedule.steps - 1) : 1.0;
        const double temp = schedule.initial_temp * std::pow(ratio, frac);
        const double sigma = schedule.move_scale * temp;
        candidate = current;

        bool applicable = true;
        const double pick = rng.uniform();
        if (pick < 0.7) {
            const std::size_t i = rng() % candidate.vertices();
            candidate.set(i, candidate.vertex(i) + Vec2{sigma * gauss(rng), sigma * gauss(rng)});
        } else if (pick < 0.8) {
            // Split an edge at its midpoint: the longest of a few random edges.
            std::vector<std::size_t> edges;  // index of the edge's first vertex
            for (std::size_t k = 0; k < candidate.polylines(); ++k) {
                for (std::uint32_t i = candidate.starts[k]; i + 1 < candidate.starts[k + 1]; ++i) edges.push_back(i);
            }
            if (candidate.vertices() >= vertex_cap || edges.empty()) {
                applicable = false;
            } else {
                std::size_t a = edges[rng() % edges.size()];
                for (int t = 1; t < kTournament; ++t) {
                    const std::size_t b = edges[rng() % edges.size()];
                    if (distance(candidate.vertex(b), candidate.vertex(b + 1)) >
                        distance(candidate.vertex(a), candidate.vertex(a + 1))) {
                        a = b;
                    }
                }
                candidate.insert(a + 1, (candidate.vertex(a) + candidate.vertex(a + 1)) * 0.5, candidate.polyline_of(a));
            }
        } else if (pick < 0.9) {
            // Delete an interior vertex: the straightest of a few random ones.
            std::vector<std::size_t> interior;
            for (std::size_t k = 0; k < candidate.polylines(); ++k) {
                for (std::uint32_t i = candidate.starts[k] + 1; i + 1 < candidate.starts[k + 1]; ++i) interior.push_back(i);
            }
            if (interior.empty()) {
                applicable = false;
            } else {
                auto detour = [&](std::size_t i) {
                    const Vec2 a = candidate.vertex(i - 1), b = candidate.vertex(i), c = candidate.vertex(i + 1);
                    return distance(a, b) + distance(b, c) - distance(a, c);
                };
                std::size_t i = interior[rng() % interior.size()];
                for (int t = 1; t < kTournament; ++t) {
                    const std::size_t j = interior[rng() % interior.size()];
                    if (detour(j) < detour(i)) i = j;
                }
                candidate.erase(i, candidate.polyline_of(i));
            }
        } else {
            const std::size_t k = rng() % candidate.polylines();
            const Vec2 shift{sigma * gauss(rng), sigma * gauss(rng)};
            for (std::uint32_t i = candidate.starts[k]; i < candidate.starts[k + 1]; ++i) {
                candidate.set(i, candidate.vertex(i) + shift);
            }
        }

        bool accepted = false;
        if (applicable && restore_flat(candidate, domain, length, 8)) {
            const double obj = evaluate(candidate);
            const double u = rng.uniform();
            if (obj <= current_obj || u < std::exp(-(obj - current_obj) / temp)) {
                std::swap(current, candidate);
                current_obj = obj;
                accepted = true;
                ++result.accepted_moves;
                if (obj < best_obj) {
                    best_obj = obj;
                    best = current;
                }
            }
        } else {
            ++result.infeasible_moves;
        }
        result.history.push_back({step, temp, current_obj, accepted});
    }

    result.best = best.to(length);
    result.best_panel_objective = best_obj;
    const LinePanel validation(HittingLineSpace(domain, derive_seed(schedule.seed, kValidationLabel)),
                               10 * schedule.panel_size);
    result.validation = panel_statistics(result.best, validation);
    return result;
}

AnnealResult optimize(const ConvexDomain& domain, double length, const AnnealSchedule& schedule, int restarts,
                      const InitFactory& init) {
    if (restarts < 1) throw ValidationError("at least one restart is required");
    std::vector<AnnealResult> results(static_cast<std::size_t>(restarts));
    parallel_for(results.size(), [&](std::size_t r) { results[r] = anneal(domain, length, init(r), schedule, r); });
    std::size_t best = 0;
    for (std::size_t r = 1; r < results.size(); ++r) {
        if (results[r].best_panel_objective < results[best].best_panel_objective) best = r;
    }
    return std::move(results[best]);
}

Configuration boundary_walk_configuration(const ConvexDomain& domain, double length, int vertices_per_loop,
                                          double inset) {
    if (vertices_per_loop < 3) throw ValidationError("a boundary walk needs at least 3 vertices per loop");
    if (!(length > 0.0)) throw ValidationError("length must be positive");
    const Vec2 center = domain_center(domain);
    auto vertex = [&](long i) {
        const Vec2 q = boundary_point(domain, static_cast<double>(i) / vertices_per_loop);
        return center + (q - center) * inset;
    };
    std::vector<Vec2> line{vertex(0)};
    double walked = 0.0;
    for (long i = 1;; ++i) {
        const Vec2 next = vertex(i);
        const double edge = distance(line.back(), next);
        if (walked + edge >= length) {
            const double t = (length - walked) / edge;
            line.push_back(line.back() + (next - line.back()) * t);
            break;
        }
        walked += edge;
        line.push_back(next);
    }
    return {{std::move(line)}, length};
}

Configuration random_polyline_configuration(const ConvexDomain& domain, double length, int vertices,
                                            std::uint64_t seed) {
    if (vertices < 2) throw ValidationError("a polyline needs at least 2 vertices");
    const double r = max_radius(domain);
    for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
        SampleStream rng(seed, attempt);
        std::vector<Vec2> line;
        while (line.size() < static_cast<std::size_t>(vertices)) {
            const Vec2 q{rng.uniform(-r, r), rng.uniform(-r, r)};
            if (contains(domain, q, 0.0)) line.push_back(q);
        }
        Configuration c{{std::move(line)}, length};
        if (restore_length(c, domain)) return c;
    }
    throw ValidationError("could not draw a feasible random polyline of the requested length");
}

Configuration default_initial_configuration(const ConvexDomain& domain, double length, std::uint64_t seed) {
    if (length <= 0.9 * domain_diameter(domain)) return random_polyline_configuration(domain, length, 3, seed);
    return boundary_walk_configuration(domain, length, 12, 0.95);
}

SweepRow sweep_point(const ConvexDomain& domain, double length, const AnnealSchedule& schedule, int restarts) {
    SweepRow row;
    row.length = length;
    const auto b = theorem3_bounds(domain, length);
    row.nu_lower = b.nu_variance_lower();
    row.nu_upper = b.nu_variance_upper();
    if (length <= 0.0) return row;  // the empty set has zero variance
    const auto result = optimize(domain, length, schedule, restarts, [&](std::uint64_t chain) {
        return default_initial_configuration(domain, length, derive_seed(schedule.seed, chain));
    });
    row.best_objective = result.best_objective();
    row.std_err = result.validation.std_err_variance;
    row.best_panel_objective = result.best_panel_objective;
    return row;
}

std::vector<SweepRow> sweep(const ConvexDomain& domain, const std::vector<double>& lengths,
                            const AnnealSchedule& schedule, int restarts) {
    std::vector<SweepRow> rows;
    rows.reserve(lengths.size());
    for (double length : lengths) rows.push_back(sweep_point(domain, length, schedule, restarts));
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "length,best_objective,std_err,nu_lower,nu_upper,best_panel_objective\n";
    out.precision(17);
    for (const auto& r : rows) {
        out << r.length << ',' << r.best_objective << ',' << r.std_err << ',' << r.nu_lower << ',' << r.nu_upper << ','
            << r.best_panel_objective << '\n';
    }
}

void write_history_csv(std::ostream& out, const std::vector<HistoryRecord>& history) {
    out << "step,temp,objective,accepted\n";
    out.precision(17);
    for (const auto& h : history) out << h.step << ',' << h.temp << ',' << h.objective << ',' << (h.accepted ? 1 : 0) << '\n';
}

}  // namespace crofton
