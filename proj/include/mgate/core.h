#ifndef MGATE_CORE_H
#define MGATE_CORE_H

#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mgate {

using cdouble = std::complex<double>;

namespace phys {
constexpr double hbar = 1.054571817e-34;   // J s
constexpr double eps0 = 8.8541878128e-12;  // F/m
constexpr double c = 299792458.0;          // m/s
constexpr double pi = std::numbers::pi;
}  // namespace phys

/// How a susceptibility turns into a refractive index.
///
/// PaperLiteral uses n = 1 + 2 pi chi, which is the convention the closed-form
/// group velocities and pulse phases are written in. SI uses n = 1 + chi / 2.
/// Every (n - 1)-derived quantity in the library is scaled consistently.
enum class IndexConvention { PaperLiteral, SI };

const char *to_string(IndexConvention c);
std::optional<IndexConvention> parse_index_convention(const std::string &name);

/// Factor s such that n - 1 = s * 2 pi chi.
double index_scale(IndexConvention c);

/// Two-level spontaneous-emission dipole: mu^2 = 3 pi eps0 hbar gamma c^3 / omega^3.
double dipole_from_decay(double gamma, double wavelength);

/// Material constants of the atomic sample.
struct MediumParams {
    double atom_density = 3e19;           // m^-3
    double gamma = 2 * phys::pi * 6e6;    // rad/s, unit for all drive parameters
    double dipole_12 = 0;                 // C m
    double dipole_34 = 0;                 // C m
    double wavelength_P = 780.24e-9;      // m
    double wavelength_T = 780.24e-9;      // m
    double decay_2 = 1.0;                 // gamma_2 / gamma
    double decay_4 = 1.0;                 // gamma_4 / gamma

    /// Cold 87Rb on the D2 line, dipoles derived from gamma.
    static MediumParams rubidium_d2();

    double k_P() const { return 2 * phys::pi / wavelength_P; }
    double k_T() const { return 2 * phys::pi / wavelength_T; }
    double omega_P() const { return phys::c * k_P(); }
    double omega_T() const { return phys::c * k_T(); }

    /// N |mu|^2 / (hbar eps0 gamma): the dimensionless coupling strength of a transition.
    double coupling_12() const;
    double coupling_34() const;

    std::vector<std::string> invariant_violations() const;

    bool operator==(const MediumParams &) const = default;
};

/// Rabi frequencies and detunings, all in units of gamma.
struct DriveParams {
    cdouble rabi_1{0};  // probe
    cdouble rabi_2{0};  // pump
    cdouble rabi_3{0};  // trigger
    cdouble rabi_4{0};  // tuner
    double detuning_1 = 0;
    double detuning_2 = 0;
    double detuning_3 = 0;
    double detuning_4 = 0;

    bool operator==(const DriveParams &) const = default;
};

struct DerivedDetunings {
    double d12;
    double d13;
    double d14;
    bool operator==(const DerivedDetunings &) const = default;
};

DerivedDetunings derived_detunings(const DriveParams &d);

enum class SusceptibilityOrder { Linear, ThirdOrder };

/// Linear values are dimensionless. Third-order values are in m^2/V^2 and
/// multiply |E|^2 with E the half-amplitude of E e^{-i w t} + c.c.
struct Susceptibility {
    cdouble value;
    SusceptibilityOrder order;
};

/// |E| for a Rabi frequency given in gamma units, with Omega = 2 mu E / hbar.
double field_from_rabi(double rabi, double gamma, double dipole);

/// D4 = Delta13 - i gamma4/2 - |Omega4|^2 / (4 Delta14), in units of gamma.
/// Throws RegimeError at the tuner resonance Delta14 = 0 with Omega4 != 0.
cdouble d4_denominator(const MediumParams &m, const DriveParams &d);

Susceptibility chi1_probe(const MediumParams &m, const DriveParams &d);

/// Cross-Kerr coefficient; the same value serves probe (chi_12) and trigger (chi_34).
Susceptibility chi3_cross(const MediumParams &m, const DriveParams &d);

/// Group-velocity balance parameter, in units of gamma^-2.
double beta(const MediumParams &m, const DriveParams &d);

/// Infinite when the pulse is not slowed at all.
struct GroupVelocity {
    double value;  // m/s
    bool unslowed() const { return value == std::numeric_limits<double>::infinity(); }
};

GroupVelocity group_velocity_probe(
    const MediumParams &m, const DriveParams &d, IndexConvention conv = IndexConvention::PaperLiteral);
GroupVelocity group_velocity_trigger(
    const MediumParams &m, const DriveParams &d, IndexConvention conv = IndexConvention::PaperLiteral);

enum class FreeParameter { Rabi1, Rabi3, Rabi4, Detuning14 };

const char *to_string(FreeParameter p);
std::optional<FreeParameter> parse_free_parameter(const std::string &name);

/// Current value of the free parameter (|Omega| or Delta14).
double free_parameter_value(const DriveParams &d, FreeParameter p);
/// Copy of d with the free parameter set; Rabi phases are kept, Delta14 moves through Delta4.
DriveParams with_free_parameter(const DriveParams &d, FreeParameter p, double value);

/// Adjusts one parameter until |v_P / v_T - 1| <= 1e-6, leaving the rest untouched.
///
/// The default bracket is [x/100, 100 x] around the current value x (or
/// [1e-4, 100] when x = 0). Throws NoRootError when v_P - v_T keeps its sign
/// over the bracket.
DriveParams match_group_velocities(
    const MediumParams &m,
    const DriveParams &d,
    FreeParameter free,
    IndexConvention conv = IndexConvention::PaperLiteral,
    std::optional<std::pair<double, double>> bracket = std::nullopt);

struct ValidityThresholds {
    double min_pump_dominance = 10;
    double max_weakness = 0.25;
};

struct ValidityReport {
    double pump_dominance_ratio;  // |Omega2|^2 / |Delta12 (Delta1 - i gamma2/2)|
    double probe_weakness;        // |Omega1 / Omega2|
    double trigger_weakness;      // |Omega3 / Omega2|
    std::vector<std::string> flags;

    bool ok() const { return flags.empty(); }
};

ValidityReport validity_check(const MediumParams &m, const DriveParams &d, const ValidityThresholds &t = {});

/// Throws RegimeError naming every flag when the perturbative regime is violated.
void require_valid(const MediumParams &m, const DriveParams &d, const ValidityThresholds &t = {});

}  // namespace mgate

#endif
