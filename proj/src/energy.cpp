#include "crofton/energy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "crofton/errors.hpp"
#include "crofton/estimators.hpp"
#include "crofton/parallel.hpp"

namespace crofton {

namespace {

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kNodes = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                          0.9061798459386640};
constexpr std::array<double, 5> kWeights = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                            0.4786286704993665, 0.2369268850561891};

struct Rect {
    double s0, s1, t0, t1;
    Rect child(int k) const {
        const double sm = 0.5 * (s0 + s1);
        const double tm = 0.5 * (t0 + t1);
        switch (k) {
            case 0: return {s0, sm, t0, tm};
            case 1: return {sm, s1, t0, tm};
            case 2: return {s0, sm, tm, t1};
            default: return {sm, s1, tm, t1};
        }
    }
    double side() const { return std::max(s1 - s0, t1 - t0); }
};

class PairIntegrator {
public:
    PairIntegrator(const CurvePiece& a, const CurvePiece& b, const QuadratureSpec& spec, bool self_pair)
        : a_(a), b_(b), len_a_(piece_length(a)), len_b_(piece_length(b)), spec_(spec), self_(self_pair) {
        split_radius_ = spec.singularity_split_radius.value_or(1e-3 * std::max(len_a_, len_b_));
        diag_eps_ = 1e-14 * std::max(1.0, std::max(len_a_, len_b_));
    }

    PairEnergy run();

private:
    struct Cell {
        Rect rect;
        int depth;
        double fine;  // sum of the four children's rules
        double err;   // |coarse - fine|
        std::array<double, 4> child_rule;
        bool forced;  // must be split regardless of the error estimate
        bool terminal = false;
    };

    double rule(const Rect& r) const;
    bool near_contact(const Rect& r) const;
    std::size_t make_cell(const Rect& r, int depth, double coarse);

    // Integrand with the zero extension at coincident points. At a transversal
    // crossing the true integrand is unbounded, but a single node there is a
    // null set and the refinement around it controls the error.
    double integrand(const PointNormal& x, const PointNormal& y) const {
        const Vec2 d = y.point - x.point;
        const double r2 = dot(d, d);
        if (r2 <= diag_eps_ * diag_eps_) return 0.0;
        const double r = std::sqrt(r2);
        return std::abs(dot(x.normal, d) * dot(d, y.normal)) / (r2 * r);
    }

    const CurvePiece& a_;
    const CurvePiece& b_;
    double len_a_, len_b_;
    const QuadratureSpec& spec_;
    bool self_;
    double split_radius_;
    double diag_eps_;
    std::vector<Cell> cells_;
    std::size_t rule_calls_ = 0;
};

double PairIntegrator::rule(const Rect& r) const {
    std::array<PointNormal, 5> xs, ys;
    const double hs = 0.5 * (r.s1 - r.s0), ms = 0.5 * (r.s1 + r.s0);
    const double ht = 0.5 * (r.t1 - r.t0), mt = 0.5 * (r.t1 + r.t0);
    for (int i = 0; i < 5; ++i) {
        xs[i] = point_and_normal(a_, std::clamp(ms + hs * kNodes[i], 0.0, len_a_));
        ys[i] = point_and_normal(b_, std::clamp(mt + ht * kNodes[i], 0.0, len_b_));
    }
    double sum = 0.0;
    for (int i = 0; i < 5; ++i) {
        double row = 0.0;
        for (int j = 0; j < 5; ++j) row += kWeights[j] * integrand(xs[i], ys[j]);
        sum += kWeights[i] * row;
    }
    return sum * hs * ht;
}

bool PairIntegrator::near_contact(const Rect& r) const {
    // A unit-speed sub-curve of length h stays within h/2 of its midpoint.
    const Vec2 ma = point_and_normal(a_, 0.5 * (r.s0 + r.s1)).point;
    const Vec2 mb = point_and_normal(b_, 0.5 * (r.t0 + r.t1)).point;
    const double bound = distance(ma, mb) - 0.5 * ((r.s1 - r.s0) + (r.t1 - r.t0));
    return bound < split_radius_;
}

std::size_t PairIntegrator::make_cell(const Rect& r, int depth, double coarse) {
    Cell c{r, depth, 0.0, 0.0, {}, false};
    for (int k = 0; k < 4; ++k) {
        c.child_rule[k] = rule(r.child(k));
        c.fine += c.child_rule[k];
    }
    rule_calls_ += 4;
    c.err = std::abs(c.fine - coarse);
    c.forced = r.side() > split_radius_ && near_contact(r);
    cells_.push_back(c);
    return cells_.size() - 1;
}

PairEnergy PairIntegrator::run() {
    // Coarse start: a 4x4 grid keeps the first error estimates meaningful.
    constexpr int kGrid = 4;
    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry> queue;
    auto priority = [](const Cell& c) { return c.forced ? std::numeric_limits<double>::infinity() : c.err; };

    long double total = 0.0L, total_err = 0.0L;
    std::size_t forced_pending = 0;
    for (int i = 0; i < kGrid; ++i) {
        for (int j = 0; j < kGrid; ++j) {
            const Rect r{len_a_ * i / kGrid, len_a_ * (i + 1) / kGrid, len_b_ * j / kGrid, len_b_ * (j + 1) / kGrid};
            const std::size_t id = make_cell(r, 2, rule(r));
            total += cells_[id].fine;
            total_err += cells_[id].err;
            if (cells_[id].forced) ++forced_pending;
            queue.emplace(priority(cells_[id]), id);
        }
    }

    bool exhausted = false;
    std::size_t iterations = 0;
    auto converged = [&] {
        return forced_pending == 0 && total_err <= spec_.rel_tol * std::abs(total) + 1e-300L;
    };
    while (!queue.empty() && !converged()) {
        if (cells_.size() + 4 > spec_.max_cells) {
            exhausted = true;
            break;
        }
        const std::size_t id = queue.top().second;
        queue.pop();
        const Cell parent = cells_[id];
        if (parent.forced) --forced_pending;
        if (parent.depth >= spec_.max_depth) {
            cells_[id].terminal = true;  // keeps its contribution and error
            exhausted = exhausted || parent.err > 0.0;
            continue;
        }
        total -= parent.fine;
        total_err -= parent.err;
        cells_[id].terminal = true;
        cells_[id].fine = 0.0;
        cells_[id].err = 0.0;
        for (int k = 0; k < 4; ++k) {
            const std::size_t child = make_cell(parent.rect.child(k), parent.depth + 1, parent.child_rule[k]);
            total += cells_[child].fine;
            total_err += cells_[child].err;
            if (cells_[child].forced) ++forced_pending;
            queue.emplace(priority(cells_[child]), child);
        }
        // Running sums drift; refresh them from the leaves now and then.
        if (++iterations % 4096 == 0) {
            total = 0.0L;
            total_err = 0.0L;
            for (const auto& c : cells_) {
                total += c.fine;
                total_err += c.err;
            }
        }
    }

    PairEnergy out;
    long double sum = 0.0L, err = 0.0L;
    for (const auto& c : cells_) {
        sum += c.fine;
        err += c.err;
    }
    out.value = std::max(0.0, static_cast<double>(sum));
    out.error_estimate = static_cast<double>(err);
    out.cells = cells_.size();
    out.accurate = !exhausted && forced_pending == 0 && err <= spec_.rel_tol * std::abs(sum) + 1e-300L;
    return out;
}

bool segments_overlap(const Segment& p, const Segment& q) {
    const Vec2 d = p.b - p.a;
    const double len = norm(d);
    const Vec2 u = d / len;
    if (std::abs(cross(u, q.a - p.a)) > kGeometryEps || std::abs(cross(u, q.b - p.a)) > kGeometryEps) return false;
    const double t0 = dot(q.a - p.a, u);
    const double t1 = dot(q.b - p.a, u);
    const double lo = std::max(0.0, std::min(t0, t1));
    const double hi = std::min(len, std::max(t0, t1));
    return hi - lo > kGeometryEps;
}

bool arcs_overlap(const Arc& p, const Arc& q) {
    if (distance(p.center, q.center) > kGeometryEps || std::abs(p.radius - q.radius) > kGeometryEps) return false;
    auto interval = [](const Arc& a) {
        const double span = std::abs(a.sweep);
        const double lo = a.sweep >= 0.0 ? a.start : a.start + a.sweep;
        return std::pair{normalize_angle(lo), span};
    };
    const auto [lo_p, span_p] = interval(p);
    const auto [lo_q, span_q] = interval(q);
    const double tol = kGeometryEps / p.radius;
    if (span_p >= kTwoPi - tol || span_q >= kTwoPi - tol) return true;
    return normalize_angle(lo_q - lo_p) < span_p - tol || normalize_angle(lo_p - lo_q) < span_q - tol;
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw ValidationError("rel_tol must lie in (0, 1)");
    if (max_depth < 4) throw ValidationError("max_depth must be at least 4");
    if (singularity_split_radius && !(*singularity_split_radius > 0.0)) {
        throw ValidationError("singularity split radius must be positive");
    }
}

double pair_kernel(Vec2 x, Vec2 nx, Vec2 y, Vec2 ny) {
    const Vec2 d = y - x;
    const double r = norm(d);
    if (r <= 1e-14) throw SingularityError("pair kernel evaluated at coincident points");
    return std::abs(dot(nx, d) * dot(d, ny)) / (r * r * r);
}

PairEnergy energy_pair(const CurvePiece& a, const CurvePiece& b, const QuadratureSpec& spec, bool self_pair) {
    spec.validate();
    // Straight self-pairs vanish identically: y - x is tangent.
    if (self_pair && a.is_segment()) return {0.0, 0.0, true, 0};
    PairIntegrator integrator(a, b, spec, self_pair);
    return integrator.run();
}

std::vector<std::pair<std::size_t, std::size_t>> overlapping_pieces(const RectSet& set) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const auto pieces = set.pieces();
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        for (std::size_t j = i + 1; j < pieces.size(); ++j) {
            const auto& p = pieces[i];
            const auto& q = pieces[j];
            bool overlap = false;
            if (p.is_segment() && q.is_segment()) overlap = segments_overlap(p.as_segment(), q.as_segment());
            if (p.is_arc() && q.is_arc()) overlap = arcs_overlap(p.as_arc(), q.as_arc());
            if (overlap) out.emplace_back(i, j);
        }
    }
    return out;
}

EnergyReport energy(const RectSet& set, const QuadratureSpec& spec) {
    spec.validate();
    if (const auto dup = overlapping_pieces(set); !dup.empty()) {
        throw ValidationError("pieces " + std::to_string(dup.front().first) + " and " +
                              std::to_string(dup.front().second) +
                              " overlap; use the multiplicity field for repeated geometry");
    }
    EnergyReport report;
    const auto pieces = set.pieces();
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        for (std::size_t j = i; j < pieces.size(); ++j) report.pairs.push_back({i, j, 0.0, true});
    }
    parallel_for(report.pairs.size(), [&](std::size_t k) {
        auto& rec = report.pairs[k];
        const auto result = energy_pair(pieces[rec.i], pieces[rec.j], spec, rec.i == rec.j);
        rec.value = result.value;
        rec.accurate = result.accurate;
    });
    long double total = 0.0L;
    for (const auto& rec : report.pairs) {
        const double weight = (rec.i == rec.j ? 1.0 : 2.0) * pieces[rec.i].multiplicity() * pieces[rec.j].multiplicity();
        total += weight * rec.value;
        report.accurate = report.accurate && rec.accurate;
    }
    report.value = static_cast<double>(total);
    return report;
}

EnergyIdentity energy_identity_check(const RectSet& set, const ConvexDomain& domain, std::uint64_t samples,
                                     std::uint64_t seed, const QuadratureSpec& spec) {
    const auto moments = estimate_moments(set, domain, samples, seed);
    const auto e = energy(set, spec);
    EnergyIdentity out;
    out.quarter_second_moment_mu = moments.quarter_second_moment_mu;
    out.std_err = moments.std_err_quarter_second();
    out.total_length = set.total_length();
    out.energy = e.value;
    out.energy_accurate = e.accurate;
    out.residual = (out.quarter_second_moment_mu - out.total_length) - 0.5 * out.energy;
    out.tolerance = std::max(3.0 * out.std_err, 10.0 * spec.rel_tol * out.energy);
    return out;
}

}  // namespace crofton
