#include "mgate/cli.h"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <thread>

#include "json.hpp"
#include "mgate/errors.h"
#include "mgate/gate.h"
#include "mgate/oracle.h"

namespace mgate {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Subcommand {
    const char *name;
    const char *help;
};

constexpr Subcommand kSubcommands[] = {
    {"evaluate", "susceptibilities, beta, group velocities and walk-off parameters"},
    {"truth-table", "four-row phase table, conditional phase and transmissions"},
    {"sweep", "evaluate over the config's sweep grid, one row per point"},
    {"match-velocities", "retune one parameter until both group velocities agree"},
    {"solve-length", "sample length giving the config's target conditional phase"},
    {"monte-carlo", "gate error under the config's laser noise"},
    {"oracle-check", "analytic susceptibilities against the exact steady state"},
    {"show-config", "print the parsed config as JSON"},
};

template <typename F>
void parallel_for(std::size_t n, unsigned threads, F &&body) {
    unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        for (std::size_t k = 0; k < n; ++k) {
            body(k);
        }
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t k = w; k < n; k += workers) {
                    body(k);
                }
            } catch (...) {
                failures[w] = std::current_exception();
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    for (auto &f : failures) {
        if (f) {
            std::rethrow_exception(f);
        }
    }
}

double ratio_or_nan(double num, double den) {
    return den == 0 ? kNaN : num / den;
}

std::string join_flags(const std::vector<std::string> &flags) {
    std::string s;
    for (const auto &f : flags) {
        s += (s.empty() ? "" : "; ") + f;
    }
    return s;
}

double complex_deviation(cdouble analytic, cdouble oracle) {
    double scale = std::abs(oracle);
    double diff = std::max(std::abs(analytic.real() - oracle.real()), std::abs(analytic.imag() - oracle.imag()));
    if (scale == 0) {
        return diff == 0 ? 0 : std::numeric_limits<double>::infinity();
    }
    return diff / scale;
}

// Largest |Delta12| (with Delta1 = Delta12) whose pump-dominance ratio stays at or above `ratio`.
double dominance_limited_detuning(double pump_rabi, double gamma_2, double ratio) {
    double b = pump_rabi * pump_rabi / ratio;
    double a = gamma_2 * gamma_2 / 4;
    return std::sqrt((-a + std::sqrt(a * a + 4 * b * b)) / 2);
}

void emit(const Table &t, const RunConfig &c, const std::optional<std::string> &out_path, std::ostream &out) {
    std::string text = emit_table(t, c.output.format);
    auto path = out_path ? out_path : c.output.path;
    if (!path) {
        out << text;
        return;
    }
    std::ofstream f(*path, std::ios::binary);
    if (!f || !(f << text) || !f.flush()) {
        throw IoError("cannot write output file '" + *path + "'");
    }
}

void report_error(std::ostream &err, const std::string &cls, int code, const std::string &message,
                  const std::vector<Violation> &violations = {}) {
    nlohmann::ordered_json j;
    j["error"]["class"] = cls;
    j["error"]["exit_code"] = code;
    j["error"]["message"] = message;
    if (!violations.empty()) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto &v : violations) {
            arr.push_back({{"path", v.path}, {"message", v.message}});
        }
        j["error"]["violations"] = arr;
    }
    err << j.dump() << "\n";
}

}  // namespace

std::vector<std::string> subcommand_names() {
    std::vector<std::string> out;
    for (const auto &s : kSubcommands) {
        out.emplace_back(s.name);
    }
    return out;
}

Table evaluate_table(const RunConfig &c) {
    DriveParams d = c.effective_drives();
    const MediumParams &m = c.medium;
    auto [d12, d13, d14] = derived_detunings(d);
    cdouble d4 = d4_denominator(m, d);
    cdouble chi3 = chi3_cross(m, d).value;
    GroupVelocity vp = group_velocity_probe(m, d, c.convention);
    GroupVelocity vt = group_velocity_trigger(m, d, c.convention);
    PulsePair pulses = c.pulses_for(d);
    ValidityReport v = validity_check(m, d);

    Table t;
    t.columns = {"index_convention", "rabi_1", "rabi_2", "rabi_3", "rabi_4", "delta_12", "delta_13", "delta_14",
                 "d4_re", "d4_im", "chi1", "chi3_re", "chi3_im", "chi3_im_over_re", "beta", "v_P", "v_T",
                 "zeta_P", "zeta_T", "pump_dominance_ratio", "probe_weakness", "trigger_weakness", "flags"};
    t.add_row({std::string(to_string(c.convention)), std::abs(d.rabi_1), std::abs(d.rabi_2), std::abs(d.rabi_3),
               std::abs(d.rabi_4), d12, d13, d14, d4.real(), d4.imag(), chi1_probe(m, d).value.real(), chi3.real(),
               chi3.imag(), ratio_or_nan(chi3.imag(), chi3.real()), beta(m, d), vp.value, vt.value,
               zeta(vp, vt, c.length, pulses.trigger.duration, PulseRole::Probe),
               zeta(vp, vt, c.length, pulses.probe.duration, PulseRole::Trigger), v.pump_dominance_ratio,
               v.probe_weakness, v.trigger_weakness, join_flags(v.flags)});
    return t;
}

Table truth_table_table(const RunConfig &c) {
    DriveParams d = c.effective_drives();
    PulsePair pulses = c.pulses_for(d);
    PhaseTable pt = truth_table(c.medium, d, pulses, c.length, c.convention);
    ConditionalPhase phi = conditional_phase(pt);
    TransmissionSummary s = transmission_summary(c.medium, d, pulses, c.length, c.convention);

    Table t;
    t.columns = {"length", "phi0_P", "phi0_T", "phiLambda_P", "phiPlus_P", "phiMinus_T", "zeta_P", "zeta_T"};
    std::vector<Cell> row = {c.length,        pt.phi0_P,     pt.phi0_T, pt.phiLambda_P,
                             pt.phiPlus_P,    pt.phiMinus_T, pt.zeta_P, pt.zeta_T};
    const char *labels[kRows] = {"pp", "pm", "mp", "mm"};
    for (int r = 0; r < kRows; ++r) {
        t.columns.push_back(std::string("transmission_P_") + labels[r]);
        t.columns.push_back(std::string("transmission_T_") + labels[r]);
        row.push_back(pt.transmission_P[r] * pt.transmission_P[r]);
        row.push_back(pt.transmission_T[r] * pt.transmission_T[r]);
    }
    for (const char *col : {"conditional_phase", "conditional_phase_unwrapped", "is_universal", "channel_mean",
                            "row_mean", "profile_mean", "coincidence", "coincidence_reduction", "gate_fidelity"}) {
        t.columns.emplace_back(col);
    }
    row.insert(row.end(), {phi.wrapped, phi.unwrapped, is_universal(phi.wrapped, 1e-6), s.channel_mean, s.row_mean,
                           s.profile_mean, s.coincidence, s.coincidence_reduction(),
                           gate_fidelity(pt, c.target_phase)});
    t.add_row(std::move(row));
    return t;
}

Table sweep_table(const RunConfig &c, unsigned threads) {
    if (!c.sweep) {
        throw ConfigError("sweep", "required for the sweep subcommand");
    }
    const SweepSpec &sw = c.sweep.value();
    std::vector<double> points = sw.points();

    Table t;
    t.columns = {sw.parameter,   "status",  "message", "v_P",    "v_T",    "chi3_re",           "chi3_im",
                 "chi3_im_over_re", "zeta_P", "zeta_T", "conditional_phase", "conditional_phase_unwrapped",
                 "channel_mean", "row_mean"};
    std::vector<std::vector<Cell>> rows(points.size());
    parallel_for(points.size(), threads, [&](std::size_t k) {
        std::vector<Cell> row(t.columns.size(), Cell(kNaN));
        row[0] = points[k];
        row[1] = std::string("ok");
        row[2] = std::string();
        try {
            RunConfig ck = with_parameter(c, sw.parameter, points[k]);
            DriveParams d = ck.effective_drives();
            PulsePair pulses = ck.pulses_for(d);
            cdouble chi3 = chi3_cross(ck.medium, d).value;
            row[3] = group_velocity_probe(ck.medium, d, ck.convention).value;
            row[4] = group_velocity_trigger(ck.medium, d, ck.convention).value;
            row[5] = chi3.real();
            row[6] = chi3.imag();
            row[7] = ratio_or_nan(chi3.imag(), chi3.real());
            PhaseTable pt = truth_table(ck.medium, d, pulses, ck.length, ck.convention);
            ConditionalPhase phi = conditional_phase(pt);
            row[8] = pt.zeta_P;
            row[9] = pt.zeta_T;
            row[10] = phi.wrapped;
            row[11] = phi.unwrapped;
            int pm = static_cast<int>(Row::PlusMinus);
            double tp = pt.transmission_P[pm] * pt.transmission_P[pm];
            double tt = pt.transmission_T[pm] * pt.transmission_T[pm];
            row[12] = (tp + tt) / 2;
            double row_mean = 0;
            for (int r = 0; r < kRows; ++r) {
                row_mean += pt.row_intensity_transmission(static_cast<Row>(r)) / kRows;
            }
            row[13] = row_mean;
        } catch (const Error &e) {
            row[1] = std::string(error_class_name(e.error_class()));
            row[2] = std::string(e.what());
        }
        rows[k] = std::move(row);
    });
    for (auto &r : rows) {
        t.add_row(std::move(r));
    }
    return t;
}

Table match_velocities_table(const RunConfig &c) {
    FreeParameter free = c.velocity_matching ? c.velocity_matching->free_parameter : FreeParameter::Rabi1;
    DriveParams after = match_group_velocities(c.medium, c.drives, free, c.convention);
    GroupVelocity vp = group_velocity_probe(c.medium, after, c.convention);
    GroupVelocity vt = group_velocity_trigger(c.medium, after, c.convention);
    Table t;
    t.columns = {"free_parameter", "value_before", "value_after", "v_P", "v_T", "velocity_ratio", "beta",
                 "rabi_1", "rabi_3", "rabi_4", "detuning_4", "delta_14"};
    t.add_row({std::string(to_string(free)), free_parameter_value(c.drives, free), free_parameter_value(after, free),
               vp.value, vt.value, vp.value / vt.value, beta(c.medium, after), std::abs(after.rabi_1),
               std::abs(after.rabi_3), std::abs(after.rabi_4), after.detuning_4, derived_detunings(after).d14});
    return t;
}

Table solve_length_table(const RunConfig &c) {
    DriveParams d = c.effective_drives();
    PulsePair pulses = c.pulses_for(d);
    double l = solve_length_for_target_phase(c.medium, d, pulses, c.target_phase, c.convention);
    PhaseTable pt = truth_table(c.medium, d, pulses, l, c.convention);
    ConditionalPhase phi = conditional_phase(pt);
    TransmissionSummary s = transmission_summary(c.medium, d, pulses, l, c.convention);
    Table t;
    t.columns = {"target_phase", "length", "conditional_phase", "conditional_phase_unwrapped", "zeta_P", "zeta_T",
                 "channel_mean", "row_mean", "profile_mean", "coincidence"};
    t.add_row({c.target_phase, l, phi.wrapped, phi.unwrapped, pt.zeta_P, pt.zeta_T, s.channel_mean, s.row_mean,
               s.profile_mean, s.coincidence});
    return t;
}

Table monte_carlo_table(const RunConfig &c, unsigned threads) {
    if (!c.noise) {
        throw ConfigError("noise", "required for the monte-carlo subcommand");
    }
    DriveParams d = c.effective_drives();
    PulsePair pulses = c.pulses_for(d);
    const NoiseModel &n = *c.noise;
    MonteCarloStats st = monte_carlo_error(c.medium, d, pulses, c.length, n, c.convention, threads);
    Table t;
    t.columns = {"samples", "seed", "mean_error", "standard_error"};
    std::vector<Cell> row = {static_cast<std::int64_t>(st.samples), std::to_string(n.seed), st.mean_error,
                             st.standard_error};
    const char *beams[4] = {"probe", "pump", "trigger", "tuner"};
    for (int b = 0; b < 4; ++b) {
        t.columns.push_back(std::string("intensity_sigma_") + beams[b]);
        row.push_back(n.intensity_sigma[b]);
    }
    for (int b = 0; b < 4; ++b) {
        t.columns.push_back(std::string("detuning_sigma_") + beams[b]);
        row.push_back(n.detuning_sigma[b]);
    }
    t.add_row(std::move(row));
    return t;
}

std::vector<OracleCheckRow> oracle_check(const RunConfig &c) {
    const MediumParams &m = c.medium;
    DriveParams base = c.effective_drives();
    std::vector<OracleCheckRow> out;

    // Grid over Delta12 and Omega3; Delta3 compensates so Delta13 and Delta14 stay put.
    double d12_max = std::min(0.2, dominance_limited_detuning(std::abs(base.rabi_2), m.decay_2, 1.01e3));
    double o3_max = std::min(0.05, 0.25 * std::abs(base.rabi_2));
    double d12_0 = derived_detunings(base).d12;
    OracleCheckRow grid{"linear_plus_cross_grid", 0, 0, 0.02};
    for (int i = 0; i < 10; ++i) {
        double d12 = -d12_max + 2 * d12_max * i / 9.0;
        for (int j = 0; j < 10; ++j) {
            DriveParams d = base;
            d.detuning_2 = 0;
            d.detuning_1 = d12;
            d.detuning_3 = base.detuning_3 + d12_0 - d12;
            d.rabi_3 = o3_max * j / 9.0;
            double e_t = field_from_rabi(std::abs(d.rabi_3), m.gamma, m.dipole_34);
            cdouble analytic = chi1_probe(m, d).value + chi3_cross(m, d).value * e_t * e_t;
            cdouble oracle = oracle_susceptibilities(m, d, false).probe;
            grid.max_relative_deviation = std::max(grid.max_relative_deviation, complex_deviation(analytic, oracle));
            ++grid.points;
        }
    }
    out.push_back(grid);

    auto oracle = oracle_susceptibilities(m, base, false);
    cdouble chi3 = chi3_cross(m, base).value;
    if (std::abs(base.rabi_3) > 0) {
        double e_t = field_from_rabi(std::abs(base.rabi_3), m.gamma, m.dipole_34);
        cdouble per_field = (oracle.probe - chi1_probe(m, base).value) / (e_t * e_t);
        out.push_back({"cross_kerr_probe", 1, complex_deviation(chi3, per_field), 0.02});
    }
    if (std::abs(base.rabi_1) > 0) {
        double e_p = field_from_rabi(std::abs(base.rabi_1), m.gamma, m.dipole_12);
        out.push_back({"cross_kerr_trigger", 1, complex_deviation(chi3, oracle.trigger / (e_p * e_p)), 0.02});
    }

    DriveParams n_scheme = base;
    n_scheme.rabi_4 = 0;
    if (std::abs(n_scheme.rabi_1) == 0) {
        n_scheme.rabi_1 = 1e-3;
    }
    double e_p = field_from_rabi(std::abs(n_scheme.rabi_1), m.gamma, m.dipole_12);
    cdouble n_oracle = oracle_susceptibilities(m, n_scheme, false).trigger / (e_p * e_p);
    out.push_back({"n_scheme_limit", 1, complex_deviation(chi3_cross(m, n_scheme).value, n_oracle), 0.01});
    return out;
}

Table oracle_check_table(const std::vector<OracleCheckRow> &rows) {
    Table t;
    t.columns = {"check", "points", "max_relative_deviation", "tolerance", "pass"};
    for (const auto &r : rows) {
        t.add_row({r.check, static_cast<std::int64_t>(r.points), r.max_relative_deviation, r.tolerance, r.pass()});
    }
    return t;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Cross-Kerr polarization phase gate in a five-level atomic medium"};
    app.name("mgate");
    app.require_subcommand(1, 1);

    std::string config_source;
    std::optional<std::string> out_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> format;
    for (const auto &s : kSubcommands) {
        auto *sub = app.add_subcommand(s.name, s.help);
        sub->add_option("--config", config_source, "config file or preset:NAME")->required();
        sub->add_option("--out", out_path, "output path (default: stdout)");
        sub->add_option("--seed", seed, "override noise.seed");
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError &e) {
        report_error(err, "config", static_cast<int>(ErrorClass::Config), e.what());
        return static_cast<int>(ErrorClass::Config);
    }

    std::string name = app.get_subcommands().front()->get_name();
    try {
        RunConfig c = load_config(config_source);
        if (format) {
            c.output.format = *parse_table_format(*format);
        }
        if (seed) {
            if (!c.noise) {
                c.noise = NoiseModel{};
            }
            c.noise->seed = *seed;
        }

        if (name == "show-config") {
            std::string text = serialize_config(c);
            if (out_path) {
                std::ofstream f(*out_path, std::ios::binary);
                if (!f || !(f << text) || !f.flush()) {
                    throw IoError("cannot write output file '" + *out_path + "'");
                }
            } else {
                out << text;
            }
            return 0;
        }
        if (name == "oracle-check") {
            auto rows = oracle_check(c);
            emit(oracle_check_table(rows), c, out_path, out);
            for (const auto &r : rows) {
                if (!r.pass()) {
                    throw NumericalError("oracle check '" + r.check + "' exceeds its tolerance");
                }
            }
            return 0;
        }

        Table t;
        if (name == "evaluate") {
            t = evaluate_table(c);
        } else if (name == "truth-table") {
            t = truth_table_table(c);
        } else if (name == "sweep") {
            t = sweep_table(c);
        } else if (name == "match-velocities") {
            t = match_velocities_table(c);
        } else if (name == "solve-length") {
            t = solve_length_table(c);
        } else {
            t = monte_carlo_table(c);
        }
        emit(t, c, out_path, out);
        return 0;
    } catch (const ConfigError &e) {
        report_error(err, "config", static_cast<int>(e.error_class()), e.what(), e.violations());
        return static_cast<int>(e.error_class());
    } catch (const Error &e) {
        report_error(err, error_class_name(e.error_class()), static_cast<int>(e.error_class()), e.what());
        return static_cast<int>(e.error_class());
    } catch (const std::exception &e) {
        report_error(err, "internal", 1, e.what());
        return 1;
    }
}

}  // namespace mgate
