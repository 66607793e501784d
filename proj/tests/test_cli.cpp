#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "crofton/scene.hpp"

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

std::string data(const std::string& name) { return std::string(CROFTON_TEST_DATA) + "/" + name; }

struct Result {
    int code;
    std::string out;
    std::string err;
    json doc() const { return json::parse(out); }
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = crofton::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("crofton_cli_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST(Cli, BoundsInTheoremRegime) {
    const auto r = run({"bounds", "--domain", "disk:1", "--length", "7.2832"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = r.doc();
    EXPECT_TRUE(doc["in_theorem_regime"].get<bool>());
    EXPECT_EQ(doc["boundary_copies"].get<int>(), 1);
    EXPECT_NEAR(doc["extremal_value"].get<double>(), 4 * kPi + 5, 1e-3);
    EXPECT_TRUE(doc.contains("generated_at"));
}

TEST(Cli, BoundsOutsideRegimeHasNullExtremalValue) {
    const auto doc = run({"bounds", "--domain", "disk:1", "--length", "4", "--deterministic"}).doc();
    EXPECT_FALSE(doc["in_theorem_regime"].get<bool>());
    EXPECT_TRUE(doc["extremal_value"].is_null());
    EXPECT_NEAR(doc["lower"].get<double>(), 5.7169, 1e-4);
    EXPECT_FALSE(doc.contains("generated_at"));
}

TEST(Cli, IdentityOnCross) {
    const auto r = run({"identity", "--scene", data("cross.json"), "--domain", "disk:1", "--samples", "200000", "--strict"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.doc()["passed"].get<bool>());
}

TEST(Cli, Figure1) {
    const auto r = run({"figure1", "--samples", "200000", "--deterministic"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = r.doc();
    EXPECT_EQ(doc["length"].get<double>(), 4.0);
    EXPECT_NEAR(doc["mean_count"].get<double>(), 4 / kPi, 0.01);
    EXPECT_NEAR(doc["variance"].get<double>(), 0.398, 0.01);
    EXPECT_NEAR(doc["nu_variance_lower"].get<double>(), 0.1986, 1e-4);
    EXPECT_TRUE(doc.contains("notice"));
}

TEST(Cli, DeterministicOutputIsByteIdentical) {
    const std::vector<std::vector<std::string>> invocations = {
        {"moments", "--scene", data("cross.json"), "--samples", "50000", "--deterministic"},
        {"opacity", "--scene", data("circle.json"), "--samples", "50000", "--deterministic"},
        {"thin", "--domain", "disk:1", "--length", "9.42477796", "--samples", "50000", "--deterministic"},
        {"extremal", "--domain", "square:1", "--length", "4.5", "--samples", "50000", "--deterministic"},
        {"optimize", "--domain", "disk:1", "--length", "2", "--steps", "500", "--restarts", "2", "--deterministic"},
    };
    for (const auto& args : invocations) {
        const auto a = run(args), b = run(args);
        ASSERT_EQ(a.code, 0) << args[0] << ": " << a.err;
        EXPECT_EQ(a.out, b.out) << args[0];
    }
}

TEST(Cli, SeedChangesOutput) {
    const auto a = run({"moments", "--scene", data("cross.json"), "--samples", "50000", "--seed", "1", "--deterministic"});
    const auto b = run({"moments", "--scene", data("cross.json"), "--samples", "50000", "--seed", "2", "--deterministic"});
    EXPECT_NE(a.out, b.out);
}

TEST(Cli, CsvFormat) {
    const auto r = run({"moments", "--scene", data("segment.json"), "--samples", "1000", "--format", "csv", "--deterministic"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto header = r.out.substr(0, r.out.find('\n'));
    EXPECT_NE(header.find("variance"), std::string::npos);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2);
}

TEST(Cli, ValidationErrorsExitTwo) {
    EXPECT_EQ(run({"moments", "--scene", data("unknown_field.json")}).code, 2);
    EXPECT_EQ(run({"moments", "--scene", data("cross_no_domain.json")}).code, 2);
    EXPECT_EQ(run({"moments", "--scene", data("does_not_exist.json")}).code, 2);
    EXPECT_EQ(run({"moments", "--scene", data("cross.json"), "--samples", "0"}).code, 2);
    EXPECT_EQ(run({"bounds", "--domain", "blob:1", "--length", "1"}).code, 2);
    EXPECT_EQ(run({"bounds", "--domain", "disk:1", "--length", "-1"}).code, 2);
    EXPECT_EQ(run({"bounds", "--domain", "disk:1"}).code, 2);
    EXPECT_EQ(run({"bounds", "--domain", "disk:1", "--length", "1", "--samples", "5"}).code, 2);
    EXPECT_EQ(run({"extremal", "--domain", "disk:1", "--length", "5"}).code, 2);
    EXPECT_EQ(run({"energy", "--scene", data("cross.json"), "--rel-tol", "2"}).code, 2);
    EXPECT_EQ(run({"optimize", "--domain", "disk:1", "--length", "1", "--panel", "100"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
}

TEST(Cli, UnknownFieldMessageNamesTheField) {
    const auto r = run({"moments", "--scene", data("unknown_field.json")});
    EXPECT_NE(r.err.find("set[0].weight"), std::string::npos) << r.err;
}

TEST(Cli, ContainmentViolationsListedPerPiece) {
    const auto r = run({"moments", "--scene", data("outside.json"), "--samples", "100"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("piece 1"), std::string::npos) << r.err;
    EXPECT_EQ(r.err.find("piece 0"), std::string::npos) << r.err;
}

TEST(Cli, StrictDegradedExitsThree) {
    const auto args = std::vector<std::string>{"energy", "--scene", data("circle.json"), "--max-depth", "4", "--deterministic"};
    const auto relaxed = run(args);
    EXPECT_EQ(relaxed.code, 0) << relaxed.err;
    EXPECT_FALSE(relaxed.doc()["accurate"].get<bool>());
    auto strict_args = args;
    strict_args.push_back("--strict");
    EXPECT_EQ(run(strict_args).code, 3);
}

TEST(Cli, EnergyOfCross) {
    const auto r = run({"energy", "--scene", data("cross.json"), "--strict"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(r.doc()["energy"].get<double>(), 16 * (1 - std::sqrt(2.0) / 2), 0.01 * 4.686);
}

TEST(Cli, SvgAndSceneSideFiles) {
    const auto svg = temp_path("extremal.svg");
    const auto scene = temp_path("extremal.json");
    const auto r = run({"extremal", "--domain", "disk:1", "--length", "7.2832", "--samples", "1000", "--svg", svg.string(),
                        "--out", scene.string(), "--svg-lines", "10"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto text = slurp(svg);
    EXPECT_NE(text.find("<svg"), std::string::npos);
    EXPECT_NE(text.find("class=\"sample\""), std::string::npos);
    const auto loaded = crofton::load_scene(scene.string());
    EXPECT_NEAR(loaded.set.total_length(), 7.2832, 1e-9);
    std::filesystem::remove(svg);
    std::filesystem::remove(scene);
}

TEST(Cli, OptimizeWritesHistory) {
    const auto history = temp_path("history.csv");
    const auto r = run({"optimize", "--domain", "disk:1", "--length", "1.5", "--steps", "200", "--restarts", "1",
                        "--history", history.string(), "--deterministic"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto text = slurp(history);
    EXPECT_EQ(text.substr(0, text.find('\n')), "step,temp,objective,accepted");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 201);
    const auto doc = r.doc();
    EXPECT_GE(doc["best_objective"].get<double>(), 0.0);
    EXPECT_FALSE(doc["polylines"].empty());
    std::filesystem::remove(history);
}

TEST(Cli, SweepCsv) {
    const auto r = run({"sweep", "--domain", "disk:1", "--lengths", "0,1", "--steps", "200", "--restarts", "1",
                        "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 3);
}

TEST(Cli, HelpExitsZero) {
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("figure1"), std::string::npos);
}
