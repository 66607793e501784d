#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "crofton/bounds.hpp"
#include "crofton/energy.hpp"
#include "crofton/errors.hpp"
#include "crofton/estimators.hpp"
#include "crofton/optimizer.hpp"
#include "crofton/rng.hpp"
#include "crofton/scene.hpp"

namespace crofton::cli {

using nlohmann::json;

namespace {

constexpr double kCrossVarianceReference = 0.4;  // value quoted for the cross figure

struct Options {
    std::string scene_path;
    std::string domain_spec;
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 42;
    double rel_tol = 1e-6;
    int max_depth = 40;
    std::string format = "json";
    std::string svg_path;
    std::string out_path;
    std::string history_path;
    bool strict = false;
    bool deterministic = false;
    double length = 0.0;
    int parts = 64;
    std::uint64_t steps = 100'000;
    int restarts = 4;
    std::size_t panel = 10'000;
    std::vector<double> lengths;
    int points = 31;
    double from = 0.0;
    std::optional<double> to;
    int svg_lines = 0;
};

/// Thrown by handlers when --strict turns a degraded result into a failure.
struct Degraded {
    std::string what;
};

std::string timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::ostringstream s;
    s << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + path);
    f << content;
}

/// One flat CSV row (header + values) from the scalar fields of an object.
std::string to_csv(const json& doc) {
    std::ostringstream head, row;
    bool first = true;
    for (const auto& [key, value] : doc.items()) {
        if (value.is_structured()) continue;
        head << (first ? "" : ",") << key;
        row << (first ? "" : ",") << (value.is_string() ? value.get<std::string>() : value.dump());
        first = false;
    }
    return head.str() + "\n" + row.str() + "\n";
}

class Runner {
public:
    Runner(const Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {}

    void emit(json doc) {
        if (!o_.deterministic) doc["generated_at"] = timestamp();
        if (o_.format == "csv") {
            out_ << to_csv(doc);
        } else {
            out_ << doc.dump(2) << '\n';
        }
    }

    Scene scene() const {
        if (o_.scene_path.empty()) throw ValidationError("--scene is required");
        Scene s = load_scene(o_.scene_path);
        if (!o_.domain_spec.empty()) s.domain = parse_domain_spec(o_.domain_spec);
        if (!s.domain) throw ValidationError("no domain: pass --domain or add \"domain\" to the scene");
        return s;
    }

    ConvexDomain domain() const {
        if (o_.domain_spec.empty()) throw ValidationError("--domain is required");
        return parse_domain_spec(o_.domain_spec);
    }

    QuadratureSpec quadrature() const {
        QuadratureSpec spec;
        spec.rel_tol = o_.rel_tol;
        spec.max_depth = o_.max_depth;
        spec.validate();
        return spec;
    }

    void maybe_svg(const ConvexDomain& d, const RectSet& set) const {
        if (o_.svg_path.empty()) return;
        SvgOptions opts;
        opts.lines = o_.svg_lines;
        opts.seed = o_.seed;
        write_file(o_.svg_path, render_svg(d, set, opts));
    }

    void maybe_scene_out(const ConvexDomain& d, const RectSet& set) const {
        if (o_.out_path.empty()) return;
        write_file(o_.out_path, scene_to_json(Scene{d, set}).dump(2) + "\n");
    }

    static json moments_json(const MomentReport& r) {
        return {{"sample_count", r.sample_count},
                {"mean_count", r.mean_count},
                {"second_moment", r.second_moment},
                {"variance", r.variance},
                {"crofton_length", r.crofton_length},
                {"quarter_second_moment_mu", r.quarter_second_moment_mu},
                {"std_err_mean", r.std_err_mean},
                {"std_err_second", r.std_err_second},
                {"std_err_variance", r.std_err_variance},
                {"std_err_crofton_length", r.std_err_crofton_length()},
                {"std_err_quarter_second", r.std_err_quarter_second()},
                {"degenerate_events", r.degenerate_events},
                {"rejection_attempts", r.rejection_attempts},
                {"perimeter", r.perimeter},
                {"total_length", r.total_length}};
    }

    void moments() {
        const Scene s = scene();
        const auto r = estimate_moments(s.set, *s.domain, o_.samples, o_.seed);
        json doc = moments_json(r);
        doc["seed"] = o_.seed;
        maybe_svg(*s.domain, s.set);
        emit(doc);
    }

    void energy_cmd() {
        if (o_.scene_path.empty()) throw ValidationError("--scene is required");
        Scene s = load_scene(o_.scene_path);
        const auto report = energy(s.set, quadrature());
        json pairs = json::array();
        for (const auto& p : report.pairs) {
            pairs.push_back({{"i", p.i}, {"j", p.j}, {"value", p.value}, {"accurate", p.accurate}});
        }
        json doc = {{"energy", report.value},
                    {"accurate", report.accurate},
                    {"total_length", s.set.total_length()},
                    {"rel_tol", o_.rel_tol},
                    {"pairs", pairs}};
        if (s.domain) maybe_svg(*s.domain, s.set);
        emit(doc);
        if (!report.accurate && o_.strict) throw Degraded{"energy quadrature hit its depth or cell limit"};
    }

    void identity() {
        const Scene s = scene();
        const auto r = energy_identity_check(s.set, *s.domain, o_.samples, o_.seed, quadrature());
        json doc = {{"residual", r.residual},
                    {"tolerance", r.tolerance},
                    {"passed", r.passed()},
                    {"quarter_second_moment_mu", r.quarter_second_moment_mu},
                    {"std_err", r.std_err},
                    {"total_length", r.total_length},
                    {"energy", r.energy},
                    {"energy_accurate", r.energy_accurate},
                    {"samples", o_.samples},
                    {"seed", o_.seed}};
        emit(doc);
        if (!r.energy_accurate && o_.strict) throw Degraded{"energy quadrature hit its depth or cell limit"};
        if (!r.passed() && o_.strict) throw Degraded{"identity residual exceeds its tolerance"};
    }

    static json bounds_json(const BoundsReport& b) {
        json doc = {{"length", b.length},
                    {"perimeter", b.perimeter},
                    {"diameter", b.diameter},
                    {"fractional", b.fractional},
                    {"trivial_lower_linear", b.trivial_lower_linear},
                    {"trivial_lower_quadratic", b.trivial_lower_quadratic},
                    {"lower", b.thm3_lower},
                    {"upper", b.thm3_upper},
                    {"nu_variance_lower", b.nu_variance_lower()},
                    {"nu_variance_upper", b.nu_variance_upper()},
                    {"in_theorem_regime", b.in_theorem_regime}};
        if (b.in_theorem_regime) {
            doc["boundary_copies"] = b.boundary_copies;
            doc["segment_length"] = b.segment_length;
        }
        doc["extremal_value"] = b.extremal_value ? json(*b.extremal_value) : json(nullptr);
        return doc;
    }

    void bounds() { emit(bounds_json(theorem3_bounds(domain(), o_.length))); }

    void extremal() {
        const ConvexDomain d = domain();
        RectSet set;
        try {
            set = extremal_set(d, o_.length);
        } catch (const RegimeError& e) {
            err_ << "nearest admissible lengths: " << e.nearest_below() << " and " << e.nearest_above() << '\n';
            throw;
        }
        const auto b = theorem3_bounds(d, o_.length);
        const auto r = estimate_moments(set, d, o_.samples, o_.seed);
        json doc = {{"length", o_.length},
                    {"boundary_copies", b.boundary_copies},
                    {"segment_length", b.segment_length},
                    {"closed_form", *b.extremal_value},
                    {"quarter_second_moment_mu", r.quarter_second_moment_mu},
                    {"std_err", r.std_err_quarter_second()},
                    {"samples", o_.samples},
                    {"set", set_to_json(set)}};
        maybe_svg(d, set);
        maybe_scene_out(d, set);
        emit(doc);
    }

    void thin() {
        const ConvexDomain d = domain();
        const auto t = alpha_thinned_boundary(d, o_.length, o_.parts, o_.seed);
        const auto b = theorem3_bounds(d, o_.length);
        json doc = {{"length", o_.length},
                    {"full_copies", t.full_copies},
                    {"alpha", t.alpha},
                    {"parts", o_.parts},
                    {"included_parts", t.included_parts},
                    {"realized_length", t.realized_length},
                    {"upper", b.thm3_upper}};
        if (!t.set.empty()) {
            const auto r = estimate_moments(t.set, d, o_.samples, derive_seed(o_.seed, 1));
            doc["quarter_second_moment_mu"] = r.quarter_second_moment_mu;
            doc["std_err"] = r.std_err_quarter_second();
        } else {
            doc["quarter_second_moment_mu"] = 0.0;
            doc["std_err"] = 0.0;
        }
        maybe_svg(d, t.set);
        maybe_scene_out(d, t.set);
        emit(doc);
    }

    void opacity() {
        const Scene s = scene();
        const auto r = opacity_check(s.set, *s.domain, o_.samples, o_.seed);
        emit({{"coverage", r.coverage},
              {"opaque", r.opaque()},
              {"length_ratio", r.length_ratio},
              {"samples", r.samples},
              {"missed", r.missed},
              {"degenerate_events", r.degenerate_events}});
    }

    AnnealSchedule schedule() const {
        AnnealSchedule s;
        s.steps = o_.steps;
        s.seed = o_.seed;
        s.panel_size = o_.panel;
        s.validate();
        return s;
    }

    void optimize_cmd() {
        const ConvexDomain d = domain();
        if (!(o_.length > 0.0)) throw ValidationError("--length must be positive");
        const auto sched = schedule();
        const auto result = optimize(d, o_.length, sched, o_.restarts, [&](std::uint64_t chain) {
            return default_initial_configuration(d, o_.length, derive_seed(o_.seed, chain));
        });
        const auto set = to_rect_set(result.best);
        const auto b = theorem3_bounds(d, o_.length);
        json polylines = json::array();
        for (const auto& line : result.best.polylines) {
            json pts = json::array();
            for (const auto& v : line) pts.push_back({v.x, v.y});
            polylines.push_back(pts);
        }
        emit({{"length", o_.length},
              {"best_objective", result.best_objective()},
              {"std_err", result.validation.std_err_variance},
              {"best_panel_objective", result.best_panel_objective},
              {"validation_lines", result.validation.lines},
              {"nu_variance_lower", b.nu_variance_lower()},
              {"nu_variance_upper", b.nu_variance_upper()},
              {"vertices", vertex_count(result.best)},
              {"accepted_moves", result.accepted_moves},
              {"infeasible_moves", result.infeasible_moves},
              {"steps", o_.steps},
              {"restarts", o_.restarts},
              {"seed", o_.seed},
              {"polylines", polylines}});
        maybe_scene_out(d, set);
        maybe_svg(d, set);
        if (!o_.history_path.empty()) {
            std::ostringstream csv;
            write_history_csv(csv, result.history);
            write_file(o_.history_path, csv.str());
        }
    }

    void sweep_cmd() {
        const ConvexDomain d = domain();
        std::vector<double> grid = o_.lengths;
        if (grid.empty()) {
            if (o_.points < 2) throw ValidationError("--points must be at least 2");
            const double to = o_.to.value_or(domain_perimeter(d));
            if (!(to > o_.from) || o_.from < 0.0) throw ValidationError("need 0 <= --from < --to");
            for (int i = 0; i < o_.points; ++i) grid.push_back(o_.from + (to - o_.from) * i / (o_.points - 1));
        }
        const auto rows = sweep(d, grid, schedule(), o_.restarts);
        std::ostringstream csv;
        write_sweep_csv(csv, rows);
        if (!o_.out_path.empty()) write_file(o_.out_path, csv.str());
        if (o_.format == "csv") {
            out_ << csv.str();
            return;
        }
        json table = json::array();
        for (const auto& r : rows) {
            table.push_back({{"length", r.length},
                             {"best_objective", r.best_objective},
                             {"std_err", r.std_err},
                             {"nu_lower", r.nu_lower},
                             {"nu_upper", r.nu_upper},
                             {"best_panel_objective", r.best_panel_objective}});
        }
        json doc = {{"rows", table}, {"steps", o_.steps}, {"restarts", o_.restarts}, {"seed", o_.seed}};
        if (!o_.deterministic) doc["generated_at"] = timestamp();
        out_ << doc.dump(2) << '\n';
    }

    void figure1() {
        const ConvexDomain d = ConvexDomain::unit_disk();
        const RectSet cross({CurvePiece::segment({-1.0, 0.0}, {1.0, 0.0}), CurvePiece::segment({0.0, -1.0}, {0.0, 1.0})});
        const auto r = estimate_moments(cross, d, o_.samples, o_.seed);
        const auto b = theorem3_bounds(d, cross.total_length());
        const double pi = std::numbers::pi;
        const double q = 16.0 + 32.0 * (1.0 - std::numbers::sqrt2 / 2.0);
        const double analytic_variance = q / (4.0 * pi) - (4.0 / pi) * (4.0 / pi);
        maybe_svg(d, cross);
        emit({{"panel", "cross of two perpendicular diameters in the unit disk"},
              {"length", cross.total_length()},
              {"mean_count", r.mean_count},
              {"mean_count_exact", 4.0 / pi},
              {"variance", r.variance},
              {"std_err_variance", r.std_err_variance},
              {"variance_analytic", analytic_variance},
              {"variance_reference", kCrossVarianceReference},
              {"nu_variance_lower", b.nu_variance_lower()},
              {"samples", o_.samples},
              {"seed", o_.seed},
              {"notice", "only the cross panel is reproduced; the other two panels have no published coordinates"}});
    }

private:
    const Options& o_;
    std::ostream& out_;
    std::ostream& err_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Crofton-formula estimators, energies, bounds and variance optimization for planar sets"};
    app.name("crofton");
    app.require_subcommand(1, 1);

    auto scene_opt = [&](CLI::App* sub, bool required) {
        auto* opt = sub->add_option("--scene", o.scene_path, "Scene JSON file");
        if (required) opt->required();
    };
    auto domain_opt = [&](CLI::App* sub, bool required) {
        auto* opt = sub->add_option("--domain", o.domain_spec, "disk:R | square:S | polygon:x,y;... | ellipse:A:B[:ROT]");
        if (required) opt->required();
    };
    auto samples_opt = [&](CLI::App* sub) {
        sub->add_option("--samples", o.samples, "Monte Carlo line samples")->check(CLI::Range(std::uint64_t{1}, ~std::uint64_t{0}));
    };
    auto seed_opt = [&](CLI::App* sub) { sub->add_option("--seed", o.seed, "Random seed"); };
    auto quad_opts = [&](CLI::App* sub) {
        sub->add_option("--rel-tol", o.rel_tol, "Quadrature relative tolerance");
        sub->add_option("--max-depth", o.max_depth, "Quadrature subdivision depth limit");
        sub->add_flag("--strict", o.strict, "Exit 3 when accuracy is degraded");
    };
    auto common = [&](CLI::App* sub, bool csv) {
        sub->add_flag("--deterministic", o.deterministic, "Omit the timestamp");
        if (csv) sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    };
    auto svg_opts = [&](CLI::App* sub) {
        sub->add_option("--svg", o.svg_path, "Write an SVG rendering");
        sub->add_option("--svg-lines", o.svg_lines, "Sampled lines drawn in the SVG")->check(CLI::Range(0, 100000));
    };
    auto length_opt = [&](CLI::App* sub) { sub->add_option("--length", o.length, "Total length L")->required(); };

    auto* moments = app.add_subcommand("moments", "Monte Carlo moments of the intersection count");
    scene_opt(moments, true);
    domain_opt(moments, false);
    samples_opt(moments);
    seed_opt(moments);
    svg_opts(moments);
    common(moments, true);

    auto* energy_sub = app.add_subcommand("energy", "Self-projection energy by adaptive quadrature");
    scene_opt(energy_sub, true);
    quad_opts(energy_sub);
    svg_opts(energy_sub);
    common(energy_sub, true);

    auto* identity = app.add_subcommand("identity", "Check (1/4) int n^2 dmu - L = E / 2");
    scene_opt(identity, true);
    domain_opt(identity, false);
    samples_opt(identity);
    seed_opt(identity);
    quad_opts(identity);
    common(identity, true);

    auto* bounds = app.add_subcommand("bounds", "Lower and upper bounds for the quadratic functional");
    domain_opt(bounds, true);
    length_opt(bounds);
    common(bounds, true);

    auto* extremal = app.add_subcommand("extremal", "Boundary copies plus a chord of total length L");
    domain_opt(extremal, true);
    length_opt(extremal);
    samples_opt(extremal);
    seed_opt(extremal);
    svg_opts(extremal);
    extremal->add_option("--out", o.out_path, "Write the set as a scene file");
    common(extremal, false);

    auto* thin = app.add_subcommand("thin", "Randomly thinned boundary of expected length L");
    domain_opt(thin, true);
    length_opt(thin);
    thin->add_option("--parts", o.parts, "Boundary parts")->check(CLI::Range(8, 1'000'000));
    samples_opt(thin);
    seed_opt(thin);
    svg_opts(thin);
    thin->add_option("--out", o.out_path, "Write the set as a scene file");
    common(thin, true);

    auto* opacity = app.add_subcommand("opacity", "Fraction of hitting lines that meet the set");
    scene_opt(opacity, true);
    domain_opt(opacity, false);
    samples_opt(opacity);
    seed_opt(opacity);
    common(opacity, true);

    auto* optimize_sub = app.add_subcommand("optimize", "Anneal polylines of length L toward low count variance");
    domain_opt(optimize_sub, true);
    length_opt(optimize_sub);
    optimize_sub->add_option("--steps", o.steps, "Annealing steps")->check(CLI::Range(std::uint64_t{1}, ~std::uint64_t{0}));
    optimize_sub->add_option("--restarts", o.restarts, "Independent chains")->check(CLI::Range(1, 1024));
    optimize_sub->add_option("--panel", o.panel, "Evaluation lines")->check(CLI::Range(std::size_t{10'000}, std::size_t{100'000'000}));
    seed_opt(optimize_sub);
    optimize_sub->add_option("--history", o.history_path, "Write the history CSV of the best chain");
    optimize_sub->add_option("--out", o.out_path, "Write the best set as a scene file");
    svg_opts(optimize_sub);
    common(optimize_sub, false);

    auto* sweep_sub = app.add_subcommand("sweep", "Anneal over a grid of lengths");
    domain_opt(sweep_sub, true);
    sweep_sub->add_option("--lengths", o.lengths, "Explicit grid")->delimiter(',');
    sweep_sub->add_option("--from", o.from, "Grid start (default 0)");
    sweep_sub->add_option("--to", o.to, "Grid end (default: the perimeter)");
    sweep_sub->add_option("--points", o.points, "Grid points (default 31)");
    sweep_sub->add_option("--steps", o.steps, "Annealing steps")->check(CLI::Range(std::uint64_t{1}, ~std::uint64_t{0}));
    sweep_sub->add_option("--restarts", o.restarts, "Independent chains")->check(CLI::Range(1, 1024));
    sweep_sub->add_option("--panel", o.panel, "Evaluation lines")->check(CLI::Range(std::size_t{10'000}, std::size_t{100'000'000}));
    seed_opt(sweep_sub);
    sweep_sub->add_option("--out", o.out_path, "Write the table as CSV");
    common(sweep_sub, true);

    auto* figure1_sub = app.add_subcommand("figure1", "Reproduce the cross example");
    samples_opt(figure1_sub);
    seed_opt(figure1_sub);
    svg_opts(figure1_sub);
    common(figure1_sub, true);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    Runner runner(o, out, err);
    try {
        if (moments->parsed()) runner.moments();
        else if (energy_sub->parsed()) runner.energy_cmd();
        else if (identity->parsed()) runner.identity();
        else if (bounds->parsed()) runner.bounds();
        else if (extremal->parsed()) runner.extremal();
        else if (thin->parsed()) runner.thin();
        else if (opacity->parsed()) runner.opacity();
        else if (optimize_sub->parsed()) runner.optimize_cmd();
        else if (sweep_sub->parsed()) runner.sweep_cmd();
        else if (figure1_sub->parsed()) runner.figure1();
    } catch (const Degraded& d) {
        err << "degraded accuracy: " << d.what << '\n';
        return kExitDegraded;
    } catch (const ContainmentError& e) {
        err << "error: " << e.what() << '\n';
        for (std::size_t i : e.offending_pieces()) err << "  piece " << i << " is not inside the domain\n";
        return kExitValidation;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ParameterDomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const RegimeError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace crofton::cli
