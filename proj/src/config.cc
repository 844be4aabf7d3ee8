#include "mgate/config.h"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mgate/errors.h"

namespace mgate {

namespace detail {
extern const char *const kQuantumPreset;
extern const char *const kClassicalPreset;
}  // namespace detail

namespace {

using json = nlohmann::ordered_json;

constexpr const char *kBeams[4] = {"probe", "pump", "trigger", "tuner"};

// Walks a parsed document, recording every problem instead of stopping at the first.
class Reader {
   public:
    std::vector<Violation> violations;

    void fail(const std::string &path, const std::string &msg) { violations.push_back({path, msg}); }

    bool object(const json &j, const std::string &path, std::initializer_list<const char *> allowed) {
        if (!j.is_object()) {
            fail(path, "expected an object");
            return false;
        }
        std::set<std::string> keys(allowed.begin(), allowed.end());
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!keys.count(it.key())) {
                fail(join(path, it.key()), "unknown key");
            }
        }
        return true;
    }

    std::optional<double> number(const json &obj, const std::string &path, const char *key) {
        if (!obj.contains(key)) {
            return std::nullopt;
        }
        const json &v = obj.at(key);
        if (!v.is_number()) {
            fail(join(path, key), "expected a number");
            return std::nullopt;
        }
        return v.get<double>();
    }

    void read(const json &obj, const std::string &path, const char *key, double &out) {
        if (auto v = number(obj, path, key)) {
            out = *v;
        }
    }

    void read_rabi(const json &obj, const std::string &path, const char *key, cdouble &out) {
        if (!obj.contains(key)) {
            return;
        }
        const json &v = obj.at(key);
        if (v.is_number()) {
            out = cdouble(v.get<double>(), 0);
        } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
            out = cdouble(v[0].get<double>(), v[1].get<double>());
        } else {
            fail(join(path, key), "expected a number or [re, im]");
            return;
        }
        if (!(std::isfinite(out.real()) && std::isfinite(out.imag()))) {
            fail(join(path, key), "must be finite");
        }
    }

    std::optional<std::string> string(const json &obj, const std::string &path, const char *key) {
        if (!obj.contains(key)) {
            return std::nullopt;
        }
        const json &v = obj.at(key);
        if (!v.is_string()) {
            fail(join(path, key), "expected a string");
            return std::nullopt;
        }
        return v.get<std::string>();
    }

    std::optional<bool> boolean(const json &obj, const std::string &path, const char *key) {
        if (!obj.contains(key)) {
            return std::nullopt;
        }
        const json &v = obj.at(key);
        if (!v.is_boolean()) {
            fail(join(path, key), "expected true or false");
            return std::nullopt;
        }
        return v.get<bool>();
    }

    std::optional<std::uint64_t> unsigned_integer(const json &obj, const std::string &path, const char *key) {
        if (!obj.contains(key)) {
            return std::nullopt;
        }
        const json &v = obj.at(key);
        if (!v.is_number_unsigned()) {
            fail(join(path, key), "expected a non-negative integer");
            return std::nullopt;
        }
        return v.get<std::uint64_t>();
    }

    static std::string join(const std::string &path, const std::string &key) {
        return path.empty() ? key : path + "." + key;
    }
};

void read_medium(Reader &r, const json &j, MediumParams &m) {
    const std::string p = "medium";
    if (!r.object(j, p,
                  {"atom_density", "gamma", "dipole_12", "dipole_34", "wavelength_P", "wavelength_T", "decay_2",
                   "decay_4"})) {
        return;
    }
    r.read(j, p, "atom_density", m.atom_density);
    r.read(j, p, "gamma", m.gamma);
    r.read(j, p, "wavelength_P", m.wavelength_P);
    r.read(j, p, "wavelength_T", m.wavelength_T);
    r.read(j, p, "decay_2", m.decay_2);
    r.read(j, p, "decay_4", m.decay_4);
    // Unspecified dipoles follow the spontaneous-emission relation for this gamma and wavelength.
    m.dipole_12 = 0;
    m.dipole_34 = 0;
    r.read(j, p, "dipole_12", m.dipole_12);
    r.read(j, p, "dipole_34", m.dipole_34);
    bool can_derive = m.gamma > 0 && std::isfinite(m.gamma);
    if (!j.contains("dipole_12") && can_derive && m.wavelength_P > 0) {
        m.dipole_12 = dipole_from_decay(m.gamma, m.wavelength_P);
    }
    if (!j.contains("dipole_34") && can_derive && m.wavelength_T > 0) {
        m.dipole_34 = dipole_from_decay(m.gamma, m.wavelength_T);
    }
}

void read_drives(Reader &r, const json &j, DriveParams &d) {
    const std::string p = "drives";
    if (!r.object(j, p,
                  {"rabi_1", "rabi_2", "rabi_3", "rabi_4", "detuning_1", "detuning_2", "detuning_3", "detuning_4"})) {
        return;
    }
    r.read_rabi(j, p, "rabi_1", d.rabi_1);
    r.read_rabi(j, p, "rabi_2", d.rabi_2);
    r.read_rabi(j, p, "rabi_3", d.rabi_3);
    r.read_rabi(j, p, "rabi_4", d.rabi_4);
    r.read(j, p, "detuning_1", d.detuning_1);
    r.read(j, p, "detuning_2", d.detuning_2);
    r.read(j, p, "detuning_3", d.detuning_3);
    r.read(j, p, "detuning_4", d.detuning_4);
    for (double v : {d.detuning_1, d.detuning_2, d.detuning_3, d.detuning_4}) {
        if (!std::isfinite(v)) {
            r.fail(p, "detunings must be finite");
            break;
        }
    }
}

void read_pulse(Reader &r, const json &j, const std::string &p, PulseSpec &s) {
    if (!r.object(j, p, {"duration", "peak_rabi"})) {
        return;
    }
    r.read(j, p, "duration", s.duration);
    if (!(std::isfinite(s.duration) && s.duration > 0)) {
        r.fail(p + ".duration", "must be finite and > 0");
    }
    if (auto v = r.number(j, p, "peak_rabi")) {
        s.peak_rabi = *v;
        if (!(std::isfinite(*v) && *v >= 0)) {
            r.fail(p + ".peak_rabi", "must be finite and >= 0");
        }
    }
}

void read_beam_array(Reader &r, const json &j, const std::string &p, std::array<double, 4> &out) {
    if (!r.object(j, p, {"probe", "pump", "trigger", "tuner"})) {
        return;
    }
    for (int b = 0; b < 4; ++b) {
        r.read(j, p, kBeams[b], out[b]);
        if (!(std::isfinite(out[b]) && out[b] >= 0)) {
            r.fail(p + "." + kBeams[b], "must be finite and >= 0");
        }
    }
}

NoiseModel read_noise(Reader &r, const json &j) {
    NoiseModel n;
    const std::string p = "noise";
    if (!r.object(j, p, {"intensity_sigma", "detuning_sigma", "samples", "seed"})) {
        return n;
    }
    if (j.contains("intensity_sigma")) {
        read_beam_array(r, j.at("intensity_sigma"), p + ".intensity_sigma", n.intensity_sigma);
    }
    if (j.contains("detuning_sigma")) {
        read_beam_array(r, j.at("detuning_sigma"), p + ".detuning_sigma", n.detuning_sigma);
    }
    if (auto v = r.unsigned_integer(j, p, "samples")) {
        n.samples = *v;
    }
    if (n.samples < 100) {
        r.fail(p + ".samples", "must be >= 100");
    }
    if (auto v = r.unsigned_integer(j, p, "seed")) {
        n.seed = *v;
    }
    return n;
}

SweepSpec read_sweep(Reader &r, const json &j) {
    SweepSpec s;
    const std::string p = "sweep";
    if (!r.object(j, p, {"parameter", "start", "stop", "count", "scale"})) {
        return s;
    }
    if (auto v = r.string(j, p, "parameter")) {
        s.parameter = *v;
        auto known = sweep_parameters();
        if (std::find(known.begin(), known.end(), s.parameter) == known.end()) {
            r.fail(p + ".parameter", "unknown parameter path '" + s.parameter + "'");
        }
    } else {
        r.fail(p + ".parameter", "required");
    }
    if (!j.contains("start")) {
        r.fail(p + ".start", "required");
    }
    if (!j.contains("stop")) {
        r.fail(p + ".stop", "required");
    }
    r.read(j, p, "start", s.start);
    r.read(j, p, "stop", s.stop);
    if (j.contains("count")) {
        if (!j.at("count").is_number_integer()) {
            r.fail(p + ".count", "expected an integer");
        } else {
            s.count = j.at("count").get<int>();
        }
    }
    if (s.count < 2) {
        r.fail(p + ".count", "must be >= 2");
    }
    if (auto v = r.string(j, p, "scale")) {
        if (*v == "linear") {
            s.scale = SweepScale::Linear;
        } else if (*v == "log") {
            s.scale = SweepScale::Log;
        } else {
            r.fail(p + ".scale", "expected 'linear' or 'log'");
        }
    }
    if (s.scale == SweepScale::Log && !(s.start > 0 && s.stop > 0)) {
        r.fail(p, "log sweeps need start > 0 and stop > 0");
    }
    if (!(std::isfinite(s.start) && std::isfinite(s.stop))) {
        r.fail(p, "start and stop must be finite");
    }
    return s;
}

json rabi_json(cdouble z) {
    if (z.imag() == 0) {
        return z.real();
    }
    return json::array({z.real(), z.imag()});
}

json beam_json(const std::array<double, 4> &a) {
    json j = json::object();
    for (int b = 0; b < 4; ++b) {
        j[kBeams[b]] = a[b];
    }
    return j;
}

std::pair<std::size_t, std::size_t> line_column(const std::string &text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

using Setter = std::function<void(RunConfig &, double)>;

const std::map<std::string, Setter> &setters() {
    auto rabi = [](cdouble DriveParams::*field) {
        return [field](RunConfig &c, double v) {
            cdouble &z = c.drives.*field;
            double a = std::abs(z);
            z = a == 0 ? cdouble(v, 0) : z * (v / a);
        };
    };
    auto drive = [](double DriveParams::*field) { return [field](RunConfig &c, double v) { c.drives.*field = v; }; };
    auto medium = [](double MediumParams::*field) { return [field](RunConfig &c, double v) { c.medium.*field = v; }; };
    static const std::map<std::string, Setter> table = {
        {"drives.rabi_1", rabi(&DriveParams::rabi_1)},
        {"drives.rabi_2", rabi(&DriveParams::rabi_2)},
        {"drives.rabi_3", rabi(&DriveParams::rabi_3)},
        {"drives.rabi_4", rabi(&DriveParams::rabi_4)},
        {"drives.detuning_1", drive(&DriveParams::detuning_1)},
        {"drives.detuning_2", drive(&DriveParams::detuning_2)},
        {"drives.detuning_3", drive(&DriveParams::detuning_3)},
        {"drives.detuning_4", drive(&DriveParams::detuning_4)},
        {"drives.detuning_14",
         [](RunConfig &c, double v) { c.drives = with_free_parameter(c.drives, FreeParameter::Detuning14, v); }},
        {"medium.atom_density", medium(&MediumParams::atom_density)},
        {"medium.dipole_12", medium(&MediumParams::dipole_12)},
        {"medium.dipole_34", medium(&MediumParams::dipole_34)},
        {"medium.decay_2", medium(&MediumParams::decay_2)},
        {"medium.decay_4", medium(&MediumParams::decay_4)},
        {"length", [](RunConfig &c, double v) { c.length = v; }},
        {"pulses.probe.duration", [](RunConfig &c, double v) { c.probe_pulse.duration = v; }},
        {"pulses.trigger.duration", [](RunConfig &c, double v) { c.trigger_pulse.duration = v; }},
        {"pulses.probe.peak_rabi", [](RunConfig &c, double v) { c.probe_pulse.peak_rabi = v; }},
        {"pulses.trigger.peak_rabi", [](RunConfig &c, double v) { c.trigger_pulse.peak_rabi = v; }},
    };
    return table;
}

}  // namespace

std::vector<double> SweepSpec::points() const {
    std::vector<double> out(count);
    for (int k = 0; k < count; ++k) {
        double f = count == 1 ? 0 : static_cast<double>(k) / (count - 1);
        if (scale == SweepScale::Linear) {
            out[k] = start + (stop - start) * f;
        } else {
            out[k] = start * std::pow(stop / start, f);
        }
    }
    if (count >= 2) {
        out.front() = start;
        out.back() = stop;
    }
    return out;
}

DriveParams RunConfig::effective_drives() const {
    if (velocity_matching && velocity_matching->apply_before_run) {
        return match_group_velocities(medium, drives, velocity_matching->free_parameter, convention);
    }
    return drives;
}

PulsePair RunConfig::pulses_for(const DriveParams &d) const {
    PulsePair p = pulses_from_drive(d, probe_pulse.duration, trigger_pulse.duration);
    if (probe_pulse.peak_rabi) {
        p.probe.peak_rabi = *probe_pulse.peak_rabi;
    }
    if (trigger_pulse.peak_rabi) {
        p.trigger.peak_rabi = *trigger_pulse.peak_rabi;
    }
    return p;
}

RunConfig parse_config(const std::string &text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        auto [line, col] = line_column(text, e.byte);
        std::ostringstream msg;
        msg << "syntax error at line " << line << ", column " << col;
        throw ConfigError("<document>", msg.str());
    }

    Reader r;
    RunConfig c;
    if (!r.object(doc, "",
                  {"comment", "medium", "drives", "pulses", "length", "index_convention", "noise", "sweep", "output",
                   "target_phase", "velocity_matching"})) {
        throw ConfigError(std::move(r.violations));
    }

    if (auto v = r.string(doc, "", "comment")) {
        c.comment = *v;
    }
    if (doc.contains("medium")) {
        read_medium(r, doc.at("medium"), c.medium);
    }
    for (const auto &v : c.medium.invariant_violations()) {
        auto space = v.find(' ');
        r.fail("medium." + v.substr(0, space), v.substr(space + 1));
    }

    if (doc.contains("drives")) {
        read_drives(r, doc.at("drives"), c.drives);
    } else {
        r.fail("drives", "required");
    }

    if (doc.contains("pulses")) {
        const json &pj = doc.at("pulses");
        if (r.object(pj, "pulses", {"probe", "trigger"})) {
            if (pj.contains("probe")) {
                read_pulse(r, pj.at("probe"), "pulses.probe", c.probe_pulse);
            }
            if (pj.contains("trigger")) {
                read_pulse(r, pj.at("trigger"), "pulses.trigger", c.trigger_pulse);
            }
        }
    }

    r.read(doc, "", "length", c.length);
    if (!(std::isfinite(c.length) && c.length >= 0)) {
        r.fail("length", "must be finite and >= 0");
    }

    if (auto v = r.string(doc, "", "index_convention")) {
        if (auto conv = parse_index_convention(*v)) {
            c.convention = *conv;
        } else {
            r.fail("index_convention", "expected 'paper-literal' or 'si'");
        }
    }

    r.read(doc, "", "target_phase", c.target_phase);
    if (!std::isfinite(c.target_phase)) {
        r.fail("target_phase", "must be finite");
    }

    if (doc.contains("noise")) {
        c.noise = read_noise(r, doc.at("noise"));
    }
    if (doc.contains("sweep")) {
        c.sweep = read_sweep(r, doc.at("sweep"));
    }
    if (doc.contains("output")) {
        const json &oj = doc.at("output");
        if (r.object(oj, "output", {"format", "path"})) {
            if (auto f = r.string(oj, "output", "format")) {
                if (auto fmt = parse_table_format(*f)) {
                    c.output.format = *fmt;
                } else {
                    r.fail("output.format", "expected 'csv' or 'json'");
                }
            }
            if (auto path = r.string(oj, "output", "path")) {
                c.output.path = *path;
            }
        }
    }
    if (doc.contains("velocity_matching")) {
        const json &vj = doc.at("velocity_matching");
        if (r.object(vj, "velocity_matching", {"free_parameter", "apply_before_run"})) {
            VelocityMatching vm;
            if (auto name = r.string(vj, "velocity_matching", "free_parameter")) {
                if (auto fp = parse_free_parameter(*name)) {
                    vm.free_parameter = *fp;
                } else {
                    r.fail("velocity_matching.free_parameter",
                           "expected one of rabi_1, rabi_3, rabi_4, detuning_14");
                }
            } else {
                r.fail("velocity_matching.free_parameter", "required");
            }
            if (auto b = r.boolean(vj, "velocity_matching", "apply_before_run")) {
                vm.apply_before_run = *b;
            }
            c.velocity_matching = vm;
        }
    }

    if (!r.violations.empty()) {
        throw ConfigError(std::move(r.violations));
    }
    return c;
}

std::string serialize_config(const RunConfig &c) {
    json j = json::object();
    if (!c.comment.empty()) {
        j["comment"] = c.comment;
    }
    const MediumParams &m = c.medium;
    j["medium"] = {{"atom_density", m.atom_density}, {"gamma", m.gamma},           {"dipole_12", m.dipole_12},
                   {"dipole_34", m.dipole_34},       {"wavelength_P", m.wavelength_P}, {"wavelength_T", m.wavelength_T},
                   {"decay_2", m.decay_2},           {"decay_4", m.decay_4}};
    const DriveParams &d = c.drives;
    j["drives"] = {{"rabi_1", rabi_json(d.rabi_1)},   {"rabi_2", rabi_json(d.rabi_2)},
                   {"rabi_3", rabi_json(d.rabi_3)},   {"rabi_4", rabi_json(d.rabi_4)},
                   {"detuning_1", d.detuning_1},      {"detuning_2", d.detuning_2},
                   {"detuning_3", d.detuning_3},      {"detuning_4", d.detuning_4}};
    auto pulse = [](const PulseSpec &p) {
        json o = {{"duration", p.duration}};
        if (p.peak_rabi) {
            o["peak_rabi"] = *p.peak_rabi;
        }
        return o;
    };
    j["pulses"] = {{"probe", pulse(c.probe_pulse)}, {"trigger", pulse(c.trigger_pulse)}};
    j["length"] = c.length;
    j["index_convention"] = to_string(c.convention);
    j["target_phase"] = c.target_phase;
    if (c.velocity_matching) {
        j["velocity_matching"] = {{"free_parameter", to_string(c.velocity_matching->free_parameter)},
                                  {"apply_before_run", c.velocity_matching->apply_before_run}};
    }
    if (c.noise) {
        j["noise"] = {{"intensity_sigma", beam_json(c.noise->intensity_sigma)},
                      {"detuning_sigma", beam_json(c.noise->detuning_sigma)},
                      {"samples", c.noise->samples},
                      {"seed", c.noise->seed}};
    }
    if (c.sweep) {
        j["sweep"] = {{"parameter", c.sweep->parameter},
                      {"start", c.sweep->start},
                      {"stop", c.sweep->stop},
                      {"count", c.sweep->count},
                      {"scale", c.sweep->scale == SweepScale::Linear ? "linear" : "log"}};
    }
    json out = {{"format", to_string(c.output.format)}};
    if (c.output.path) {
        out["path"] = *c.output.path;
    }
    j["output"] = out;
    return j.dump(2) + "\n";
}

std::vector<std::string> preset_names() {
    return {"quantum", "classical"};
}

const std::string &preset_text(const std::string &name) {
    static const std::string quantum = detail::kQuantumPreset;
    static const std::string classical = detail::kClassicalPreset;
    if (name == "quantum") {
        return quantum;
    }
    if (name == "classical") {
        return classical;
    }
    throw ConfigError("--config", "unknown preset '" + name + "' (known: quantum, classical)");
}

RunConfig load_config(const std::string &source) {
    const std::string prefix = "preset:";
    if (source.rfind(prefix, 0) == 0) {
        return parse_config(preset_text(source.substr(prefix.size())));
    }
    std::ifstream in(source, std::ios::binary);
    if (!in) {
        throw IoError("cannot read config file '" + source + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<std::string> sweep_parameters() {
    std::vector<std::string> out;
    for (const auto &[k, _] : setters()) {
        out.push_back(k);
    }
    return out;
}

RunConfig with_parameter(const RunConfig &c, const std::string &path, double value) {
    auto it = setters().find(path);
    if (it == setters().end()) {
        throw ConfigError("sweep.parameter", "unknown parameter path '" + path + "'");
    }
    RunConfig out = c;
    it->second(out, value);
    return out;
}

}  // namespace mgate
