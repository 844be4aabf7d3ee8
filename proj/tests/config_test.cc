#include "mgate/config.h"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "mgate/errors.h"

using namespace mgate;

namespace {

const char *kMinimal = R"({"drives": {"rabi_1": 0.08, "rabi_2": 2}})";

std::vector<Violation> violations_of(const std::string &text) {
    try {
        parse_config(text);
    } catch (const ConfigError &e) {
        return e.violations();
    }
    return {};
}

bool has_path(const std::vector<Violation> &v, const std::string &path) {
    for (const auto &x : v) {
        if (x.path == path) {
            return true;
        }
    }
    return false;
}

}  // namespace

TEST(Presets, ParseAndRoundTrip) {
    for (const auto &name : preset_names()) {
        RunConfig c = load_config("preset:" + name);
        EXPECT_EQ(parse_config(serialize_config(c)), c) << name;
        EXPECT_FALSE(c.comment.empty());
        ASSERT_TRUE(c.noise.has_value());
        EXPECT_EQ(c.noise->samples, 10000u);
    }
    EXPECT_THROW(load_config("preset:nope"), ConfigError);
}

TEST(Presets, QuantumFaceValues) {
    RunConfig c = load_config("preset:quantum");
    EXPECT_EQ(c.drives.rabi_1, cdouble(0.08));
    EXPECT_EQ(c.drives.rabi_2, cdouble(2));
    EXPECT_EQ(c.drives.rabi_3, cdouble(0.04));
    EXPECT_EQ(c.drives.rabi_4, cdouble(1));
    EXPECT_EQ(c.drives.detuning_3, 20.01);
    EXPECT_EQ(c.drives.detuning_4, 20);
    EXPECT_EQ(c.length, 1.8e-3);
    EXPECT_EQ(c.convention, IndexConvention::PaperLiteral);
    EXPECT_EQ(c.medium.atom_density, 3e19);
    ASSERT_TRUE(c.velocity_matching.has_value());
    EXPECT_EQ(c.velocity_matching->free_parameter, FreeParameter::Rabi1);
}

TEST(Presets, ClassicalFaceValues) {
    RunConfig c = load_config("preset:classical");
    EXPECT_EQ(c.drives.rabi_1, cdouble(1.4));
    EXPECT_EQ(c.drives.rabi_2, cdouble(7));
    EXPECT_EQ(c.drives.rabi_3, cdouble(0.16));
    EXPECT_FALSE(c.velocity_matching.has_value());
    EXPECT_EQ(c.effective_drives(), c.drives);
}

TEST(Presets, VelocityMatchingDirective) {
    RunConfig c = load_config("preset:quantum");
    DriveParams d = c.effective_drives();
    EXPECT_NEAR(std::abs(d.rabi_1), 0.1089, 1e-4);
    EXPECT_EQ(d.rabi_3, c.drives.rabi_3);
    c.velocity_matching->apply_before_run = false;
    EXPECT_EQ(c.effective_drives(), c.drives);
}

TEST(ParseConfig, Defaults) {
    RunConfig c = parse_config(kMinimal);
    EXPECT_EQ(c.medium, MediumParams::rubidium_d2());
    EXPECT_EQ(c.output.format, TableFormat::Csv);
    EXPECT_FALSE(c.noise);
    EXPECT_FALSE(c.sweep);
    EXPECT_DOUBLE_EQ(c.target_phase, phys::pi);
}

TEST(ParseConfig, ComplexRabi) {
    RunConfig c = parse_config(R"({"drives": {"rabi_4": [0.6, 0.8]}})");
    EXPECT_EQ(c.drives.rabi_4, cdouble(0.6, 0.8));
}

TEST(ParseConfig, PulsePeaks) {
    RunConfig c = parse_config(R"({"drives": {"rabi_1": 0.1, "rabi_3": 0.05},
        "pulses": {"probe": {"duration": 2e-6, "peak_rabi": 0.2}}})");
    PulsePair p = c.pulses_for(c.drives);
    EXPECT_EQ(p.probe.peak_rabi, 0.2);
    EXPECT_EQ(p.probe.duration, 2e-6);
    EXPECT_EQ(p.trigger.peak_rabi, 0.05);
}

TEST(ParseConfig, SyntaxErrorLocation) {
    auto v = violations_of("{\n  \"drives\": {\n    \"rabi_1\": ,\n  }\n}");
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].path, "<document>");
    EXPECT_EQ(v[0].message, "syntax error at line 3, column 15");
}

TEST(ParseConfig, CollectsEveryViolation) {
    auto v = violations_of(R"({
        "drives": {"rabi_1": "x", "bogus": 1},
        "medium": {"atom_density": -1},
        "length": -2,
        "index_convention": "gaussian",
        "noise": {"samples": 10},
        "output": {"format": "xml"}
    })");
    for (const char *p : {"drives.rabi_1", "drives.bogus", "medium.atom_density", "length", "index_convention",
                          "noise.samples", "output.format"}) {
        EXPECT_TRUE(has_path(v, p)) << p;
    }
}

TEST(ParseConfig, MissingDrives) {
    EXPECT_TRUE(has_path(violations_of("{}"), "drives"));
}

TEST(ParseConfig, UnknownTopLevelKey) {
    auto v = violations_of(R"({"drives": {}, "extra": 1})");
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].path, "extra");
    EXPECT_EQ(v[0].message, "unknown key");
}

TEST(ParseConfig, ErrorClassIsConfig) {
    try {
        parse_config("[");
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.error_class(), ErrorClass::Config);
    }
}

TEST(Sweep, Points) {
    SweepSpec lin{"length", 1, 3, 3, SweepScale::Linear};
    EXPECT_EQ(lin.points(), (std::vector<double>{1, 2, 3}));
    SweepSpec log{"length", 1e-4, 1e-2, 3, SweepScale::Log};
    auto p = log.points();
    ASSERT_EQ(p.size(), 3u);
    EXPECT_NEAR(p[1], 1e-3, 1e-15);
    EXPECT_EQ(p.front(), 1e-4);
    EXPECT_EQ(p.back(), 1e-2);
}

TEST(Sweep, ParsedAndValidated) {
    RunConfig c = parse_config(
        R"({"drives": {}, "sweep": {"parameter": "drives.detuning_1", "start": -0.1, "stop": 0.1, "count": 5}})");
    ASSERT_TRUE(c.sweep);
    EXPECT_EQ(c.sweep->count, 5);
    auto v = violations_of(R"({"drives": {}, "sweep": {"parameter": "drives.nope", "start": 0, "count": 1}})");
    EXPECT_TRUE(has_path(v, "sweep.parameter"));
    EXPECT_TRUE(has_path(v, "sweep.stop"));
    EXPECT_TRUE(has_path(v, "sweep.count"));
}

TEST(WithParameter, SetsPaths) {
    RunConfig c = parse_config(R"({"drives": {"rabi_4": [0, 1]}})");
    RunConfig d = with_parameter(c, "drives.rabi_4", 2);
    EXPECT_NEAR(std::abs(d.drives.rabi_4 - cdouble(0, 2)), 0, 1e-15);
    EXPECT_EQ(with_parameter(c, "length", 0.5).length, 0.5);
    EXPECT_NEAR(with_parameter(c, "drives.detuning_14", 0.2).drives.detuning_4, -0.2, 1e-15);
    EXPECT_EQ(with_parameter(c, "medium.atom_density", 1e18).medium.atom_density, 1e18);
    EXPECT_THROW(with_parameter(c, "nope", 1), ConfigError);
    for (const auto &p : sweep_parameters()) {
        EXPECT_NO_THROW(with_parameter(c, p, 1)) << p;
    }
}

TEST(LoadConfig, FileAndMissingFile) {
    std::string path = ::testing::TempDir() + "mgate_config_test.json";
    {
        std::ofstream out(path);
        out << kMinimal;
    }
    EXPECT_EQ(load_config(path), parse_config(kMinimal));
    std::remove(path.c_str());
    EXPECT_THROW(load_config(path), IoError);
}

TEST(SerializeConfig, RoundTripWithOptionalSections) {
    RunConfig c = parse_config(kMinimal);
    c.comment = "x";
    c.drives.rabi_4 = cdouble(0.3, -0.4);
    c.noise = NoiseModel{};
    c.noise->detuning_sigma[3] = 1e-5;
    c.sweep = SweepSpec{"length", 1e-4, 1e-2, 4, SweepScale::Log};
    c.output.format = TableFormat::Json;
    c.output.path = "out.json";
    c.velocity_matching = VelocityMatching{FreeParameter::Detuning14, false};
    c.convention = IndexConvention::SI;
    EXPECT_EQ(parse_config(serialize_config(c)), c);
}
