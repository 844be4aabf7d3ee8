#include "mgate/core.h"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "mgate/errors.h"

namespace mgate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// |Omega4|^2 / (4 Delta14), with the tuner-off case defined as zero.
double tuner_shift(const DriveParams &d, double d14) {
    double o4 = std::norm(d.rabi_4);
    if (o4 == 0) {
        return 0;
    }
    if (d14 == 0) {
        throw RegimeError("tuner resonance: Delta14 = 0 with Omega4 != 0 makes D4 singular");
    }
    return o4 / (4 * d14);
}

void require_pump(const DriveParams &d) {
    if (std::norm(d.rabi_2) == 0) {
        throw RegimeError("pump Rabi frequency Omega2 is zero; the EIT formulas are undefined");
    }
}

// hbar c eps0 / (8 pi |mu|^2 omega N) * gamma^2: converts |Omega|^2-ratios in gamma units to m/s.
double velocity_prefactor(double dipole, double omega, const MediumParams &m, IndexConvention conv) {
    if (m.atom_density == 0) {
        return kInf;
    }
    double g2 = m.gamma * m.gamma;
    return phys::hbar * phys::c * phys::eps0 * g2 /
           (8 * phys::pi * dipole * dipole * omega * m.atom_density * index_scale(conv));
}

// v_P / v_T without forming either velocity, so unslowed cases stay finite.
double velocity_ratio(const MediumParams &m, const DriveParams &d, IndexConvention conv) {
    double v_p = group_velocity_probe(m, d, conv).value;
    double v_t = group_velocity_trigger(m, d, conv).value;
    if (std::isinf(v_t)) {
        return std::isinf(v_p) ? std::nan("") : 0.0;
    }
    return v_p / v_t;
}

}  // namespace

const char *error_class_name(ErrorClass c) {
    switch (c) {
        case ErrorClass::Config:
            return "config";
        case ErrorClass::Regime:
            return "regime";
        case ErrorClass::Numerical:
            return "numerical";
        case ErrorClass::Io:
            return "io";
    }
    return "unknown";
}

ConfigError::ConfigError(std::vector<Violation> violations)
    : Error(ErrorClass::Config,
            [&] {
                std::ostringstream out;
                out << "invalid configuration";
                for (const auto &v : violations) {
                    out << "; " << v.path << ": " << v.message;
                }
                return out.str();
            }()),
      violations_(std::move(violations)) {}

ConfigError::ConfigError(std::string path, std::string message)
    : ConfigError(std::vector<Violation>{{std::move(path), std::move(message)}}) {}

const char *to_string(IndexConvention c) {
    return c == IndexConvention::PaperLiteral ? "paper-literal" : "si";
}

std::optional<IndexConvention> parse_index_convention(const std::string &name) {
    if (name == "paper-literal") {
        return IndexConvention::PaperLiteral;
    }
    if (name == "si") {
        return IndexConvention::SI;
    }
    return std::nullopt;
}

double index_scale(IndexConvention c) {
    return c == IndexConvention::PaperLiteral ? 1.0 : 1.0 / (4 * phys::pi);
}

double dipole_from_decay(double gamma, double wavelength) {
    double omega = 2 * phys::pi * phys::c / wavelength;
    double mu2 = 3 * phys::pi * phys::eps0 * phys::hbar * gamma * std::pow(phys::c, 3) / std::pow(omega, 3);
    return std::sqrt(mu2);
}

MediumParams MediumParams::rubidium_d2() {
    MediumParams m;
    m.dipole_12 = dipole_from_decay(m.gamma, m.wavelength_P);
    m.dipole_34 = dipole_from_decay(m.gamma, m.wavelength_T);
    return m;
}

double MediumParams::coupling_12() const {
    return atom_density * dipole_12 * dipole_12 / (phys::hbar * phys::eps0 * gamma);
}

double MediumParams::coupling_34() const {
    return atom_density * dipole_34 * dipole_34 / (phys::hbar * phys::eps0 * gamma);
}

std::vector<std::string> MediumParams::invariant_violations() const {
    std::vector<std::string> out;
    auto positive = [&](double v, const char *name) {
        if (!(std::isfinite(v) && v > 0)) {
            out.push_back(std::string(name) + " must be finite and > 0");
        }
    };
    auto non_negative = [&](double v, const char *name) {
        if (!(std::isfinite(v) && v >= 0)) {
            out.push_back(std::string(name) + " must be finite and >= 0");
        }
    };
    non_negative(atom_density, "atom_density");
    positive(gamma, "gamma");
    positive(dipole_12, "dipole_12");
    positive(dipole_34, "dipole_34");
    positive(wavelength_P, "wavelength_P");
    positive(wavelength_T, "wavelength_T");
    non_negative(decay_2, "decay_2");
    non_negative(decay_4, "decay_4");
    return out;
}

DerivedDetunings derived_detunings(const DriveParams &d) {
    double d12 = d.detuning_1 - d.detuning_2;
    double d13 = d12 + d.detuning_3;
    double d14 = d13 - d.detuning_4;
    return {d12, d13, d14};
}

double field_from_rabi(double rabi, double gamma, double dipole) {
    return phys::hbar * std::abs(rabi) * gamma / (2 * dipole);
}

cdouble d4_denominator(const MediumParams &m, const DriveParams &d) {
    auto [d12, d13, d14] = derived_detunings(d);
    (void)d12;
    return cdouble(d13 - tuner_shift(d, d14), -m.decay_4 / 2);
}

Susceptibility chi1_probe(const MediumParams &m, const DriveParams &d) {
    require_pump(d);
    double d12 = derived_detunings(d).d12;
    double chi = -m.coupling_12() * 4 * d12 / std::norm(d.rabi_2);
    return {cdouble(chi, 0), SusceptibilityOrder::Linear};
}

Susceptibility chi3_cross(const MediumParams &m, const DriveParams &d) {
    require_pump(d);
    cdouble d4 = d4_denominator(m, d);
    double g3 = m.gamma * m.gamma * m.gamma;
    double prefactor = 4 * m.atom_density * m.dipole_12 * m.dipole_12 * m.dipole_34 * m.dipole_34 /
                       (std::pow(phys::hbar, 3) * phys::eps0 * g3 * std::norm(d.rabi_2));
    return {prefactor / d4, SusceptibilityOrder::ThirdOrder};
}

double beta(const MediumParams &m, const DriveParams &d) {
    auto [d12, d13, d14] = derived_detunings(d);
    (void)d12;
    double shift = tuner_shift(d, d14);
    double o4 = std::norm(d.rabi_4);
    double lead = o4 == 0 ? 1.0 : 1 + o4 / (4 * d14 * d14);
    double x = d13 - shift;
    double g2_4 = m.decay_4 * m.decay_4 / 4;
    double denom = x * x + g2_4;
    return lead * (x * x - g2_4) / (denom * denom);
}

GroupVelocity group_velocity_probe(const MediumParams &m, const DriveParams &d, IndexConvention conv) {
    require_pump(d);
    double pre = velocity_prefactor(m.dipole_12, m.omega_P(), m, conv);
    if (std::isinf(pre)) {
        return {kInf};
    }
    double denom = 1 + beta(m, d) * std::norm(d.rabi_3);
    if (denom == 0) {
        return {kInf};
    }
    return {pre * std::norm(d.rabi_2) / denom};
}

GroupVelocity group_velocity_trigger(const MediumParams &m, const DriveParams &d, IndexConvention conv) {
    require_pump(d);
    double pre = velocity_prefactor(m.dipole_34, m.omega_T(), m, conv);
    double denom = beta(m, d) * std::norm(d.rabi_1);
    if (std::isinf(pre) || denom == 0) {
        return {kInf};
    }
    return {pre * std::norm(d.rabi_2) / denom};
}

const char *to_string(FreeParameter p) {
    switch (p) {
        case FreeParameter::Rabi1:
            return "rabi_1";
        case FreeParameter::Rabi3:
            return "rabi_3";
        case FreeParameter::Rabi4:
            return "rabi_4";
        case FreeParameter::Detuning14:
            return "detuning_14";
    }
    return "?";
}

std::optional<FreeParameter> parse_free_parameter(const std::string &name) {
    for (auto p : {FreeParameter::Rabi1, FreeParameter::Rabi3, FreeParameter::Rabi4, FreeParameter::Detuning14}) {
        if (name == to_string(p)) {
            return p;
        }
    }
    return std::nullopt;
}

double free_parameter_value(const DriveParams &d, FreeParameter p) {
    switch (p) {
        case FreeParameter::Rabi1:
            return std::abs(d.rabi_1);
        case FreeParameter::Rabi3:
            return std::abs(d.rabi_3);
        case FreeParameter::Rabi4:
            return std::abs(d.rabi_4);
        case FreeParameter::Detuning14:
            return derived_detunings(d).d14;
    }
    return 0;
}

DriveParams with_free_parameter(const DriveParams &d, FreeParameter p, double value) {
    auto rescale = [value](cdouble rabi) {
        double a = std::abs(rabi);
        return a == 0 ? cdouble(value, 0) : rabi * (value / a);
    };
    DriveParams out = d;
    switch (p) {
        case FreeParameter::Rabi1:
            out.rabi_1 = rescale(d.rabi_1);
            break;
        case FreeParameter::Rabi3:
            out.rabi_3 = rescale(d.rabi_3);
            break;
        case FreeParameter::Rabi4:
            out.rabi_4 = rescale(d.rabi_4);
            break;
        case FreeParameter::Detuning14:
            out.detuning_4 = derived_detunings(d).d13 - value;
            break;
    }
    return out;
}

DriveParams match_group_velocities(
    const MediumParams &m,
    const DriveParams &d,
    FreeParameter free,
    IndexConvention conv,
    std::optional<std::pair<double, double>> bracket) {
    constexpr double tolerance = 1e-6;
    auto mismatch = [&](double x) { return velocity_ratio(m, with_free_parameter(d, free, x), conv) - 1; };

    double x0 = free_parameter_value(d, free);
    if (std::abs(velocity_ratio(m, d, conv) - 1) <= tolerance) {
        return d;
    }

    double lo, hi;
    if (bracket) {
        std::tie(lo, hi) = *bracket;
    } else if (x0 == 0) {
        lo = 1e-4;
        hi = 100;
    } else {
        lo = x0 / 100;
        hi = x0 * 100;
    }
    if (lo > hi) {
        std::swap(lo, hi);
    }

    double f_lo = mismatch(lo);
    double f_hi = mismatch(hi);
    if (!(std::isfinite(f_lo) && std::isfinite(f_hi)) || f_lo * f_hi > 0) {
        std::ostringstream msg;
        msg << "no group-velocity crossing for " << to_string(free) << " in [" << lo << ", " << hi << "]";
        throw NoRootError(msg.str());
    }

    std::uintmax_t max_iter = 200;
    auto [a, b] = boost::math::tools::toms748_solve(
        mismatch, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
    double x = std::abs(mismatch(a)) < std::abs(mismatch(b)) ? a : b;
    if (std::abs(mismatch(x)) > tolerance) {
        throw NumericalError("group-velocity matching did not converge");
    }
    return with_free_parameter(d, free, x);
}

ValidityReport validity_check(const MediumParams &m, const DriveParams &d, const ValidityThresholds &t) {
    auto [d12, d13, d14] = derived_detunings(d);
    (void)d13;
    (void)d14;
    double o2 = std::abs(d.rabi_2);
    double detuning_scale = std::abs(d12 * cdouble(d.detuning_1, -m.decay_2 / 2));
    auto ratio = [](double num, double den) {
        if (num == 0) {
            return 0.0;
        }
        return den == 0 ? kInf : num / den;
    };

    ValidityReport r;
    r.pump_dominance_ratio = ratio(o2 * o2, detuning_scale);
    r.probe_weakness = ratio(std::abs(d.rabi_1), o2);
    r.trigger_weakness = ratio(std::abs(d.rabi_3), o2);

    auto describe = [](const char *what, double value, const char *op, double threshold) {
        std::ostringstream out;
        out << what << " = " << value << " " << op << " " << threshold;
        return out.str();
    };
    if (!(r.pump_dominance_ratio >= t.min_pump_dominance)) {
        r.flags.push_back(describe("pump_dominance_ratio", r.pump_dominance_ratio, "<", t.min_pump_dominance));
    }
    if (!(r.probe_weakness <= t.max_weakness)) {
        r.flags.push_back(describe("probe_weakness", r.probe_weakness, ">", t.max_weakness));
    }
    if (!(r.trigger_weakness <= t.max_weakness)) {
        r.flags.push_back(describe("trigger_weakness", r.trigger_weakness, ">", t.max_weakness));
    }
    return r;
}

void require_valid(const MediumParams &m, const DriveParams &d, const ValidityThresholds &t) {
    auto report = validity_check(m, d, t);
    if (report.ok()) {
        return;
    }
    std::string msg = "outside the weak-probe, strong-pump regime:";
    for (const auto &f : report.flags) {
        msg += " " + f + ";";
    }
    throw RegimeError(msg);
}

}  // namespace mgate
