#ifndef MGATE_CONFIG_H
#define MGATE_CONFIG_H

#include <optional>
#include <string>
#include <vector>

#include "mgate/core.h"
#include "mgate/gate.h"
#include "mgate/propagation.h"
#include "mgate/table.h"

namespace mgate {

struct PulseSpec {
    double duration = 1e-6;  // s
    /// Peak Rabi frequency in gamma units; taken from the cw drive when absent.
    std::optional<double> peak_rabi;
    bool operator==(const PulseSpec &) const = default;
};

enum class SweepScale { Linear, Log };

struct SweepSpec {
    std::string parameter;  // dotted path, see sweep_parameters()
    double start = 0;
    double stop = 1;
    int count = 2;
    SweepScale scale = SweepScale::Linear;

    std::vector<double> points() const;
    bool operator==(const SweepSpec &) const = default;
};

struct OutputSpec {
    TableFormat format = TableFormat::Csv;
    std::optional<std::string> path;
    bool operator==(const OutputSpec &) const = default;
};

struct VelocityMatching {
    FreeParameter free_parameter = FreeParameter::Rabi1;
    /// Replace the drive by its velocity-matched version before any subcommand runs.
    bool apply_before_run = true;
    bool operator==(const VelocityMatching &) const = default;
};

struct RunConfig {
    std::string comment;
    MediumParams medium = MediumParams::rubidium_d2();
    DriveParams drives;
    PulseSpec probe_pulse;
    PulseSpec trigger_pulse;
    double length = 1e-3;  // m
    IndexConvention convention = IndexConvention::PaperLiteral;
    std::optional<NoiseModel> noise;
    std::optional<SweepSpec> sweep;
    OutputSpec output;
    double target_phase = phys::pi;
    std::optional<VelocityMatching> velocity_matching;

    /// Drive after the velocity-matching directive (if any, and if enabled).
    DriveParams effective_drives() const;
    /// Pulse pair for a given drive; peaks default to |Omega1| and |Omega3|.
    PulsePair pulses_for(const DriveParams &d) const;

    bool operator==(const RunConfig &) const = default;
};

/// Parses the JSON config document. Collects every violation into one
/// ConfigError; syntax errors report line and column.
RunConfig parse_config(const std::string &text);

/// Inverse of parse_config: parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig &c);

std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
const std::string &preset_text(const std::string &name);

/// "preset:NAME" or a file path. Throws IoError when the file cannot be read.
RunConfig load_config(const std::string &source);

/// Dotted paths accepted by sweeps, e.g. "drives.rabi_1" or "length".
std::vector<std::string> sweep_parameters();

/// Copy of c with one parameter set. Rabi magnitudes keep their phase.
/// Throws ConfigError for an unknown path.
RunConfig with_parameter(const RunConfig &c, const std::string &path, double value);

}  // namespace mgate

#endif
