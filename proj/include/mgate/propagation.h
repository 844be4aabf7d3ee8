#ifndef MGATE_PROPAGATION_H
#define MGATE_PROPAGATION_H

#include <functional>
#include <optional>
#include <vector>

#include "mgate/core.h"

namespace mgate {

enum class PulseRole { Probe, Trigger };

struct PulseParams {
    double peak_rabi = 0;  // |Omega^pk|, units of gamma
    double duration = 1e-6;  // s
    PulseRole role = PulseRole::Probe;
};

struct PulsePair {
    PulseParams probe{0, 1e-6, PulseRole::Probe};
    PulseParams trigger{0, 1e-6, PulseRole::Trigger};
};

/// Pulses whose peak Rabi frequencies are |Omega1| and |Omega3| of the drive.
PulsePair pulses_from_drive(const DriveParams &d, double probe_duration, double trigger_duration);

struct PropagationResult {
    double phase = 0;                   // rad
    double amplitude_transmission = 1;  // |eps_out / eps_in|
    double zeta = 0;
};

cdouble refractive_index(const Susceptibility &chi, IndexConvention conv);

/// Walk-off parameter. For the probe,
///   zeta_P = (1 - v_P / v_T) sqrt(2) l / (v_P tau) = sqrt(2) l (1/v_P - 1/v_T) / tau
/// with tau the trigger duration; the trigger value swaps the roles.
/// Unslowed (infinite) velocities are allowed. Throws RegimeError for v <= 0.
double zeta(GroupVelocity v_probe, GroupVelocity v_trigger, double length, double tau, PulseRole role);

/// erf(z)/z, continued to 2/sqrt(pi) at z = 0.
double erf_over_zeta(double z);

/// Phase and transmission of a sigma+ probe in the Lambda (EIT) configuration.
PropagationResult linear_phase(
    const MediumParams &m, const DriveParams &d, double length, IndexConvention conv = IndexConvention::PaperLiteral);

/// Nonlinear (cross-Kerr) part of the probe or trigger phase for Gaussian pulses
/// in erf[zeta]/zeta closed form, with the absorption taken from Im chi3 through
/// the same overlap integral.
PropagationResult cross_phase(
    const MediumParams &m,
    const DriveParams &d,
    const PulsePair &pulses,
    double length,
    PulseRole role,
    IndexConvention conv = IndexConvention::PaperLiteral);

/// Integral of the partner pulse's normalised intensity seen by one slice of a
/// pulse while it crosses the medium:
///
///   int_0^{z_end} exp(-2 (s + z/v_self - z/v_other)^2 / tau_other^2) dz,
///   z_end = min(l, v_self (t - s)).
///
/// s is the slice's delay relative to the pulse centre, t the lab time since the
/// centres entered (infinite t means the whole sample). Adaptive Gauss-Kronrod.
double overlap_integral(
    GroupVelocity v_self, GroupVelocity v_other, double tau_other, double length, double time, double slice_offset = 0);

/// Quadrature twin of cross_phase: 2 pi s k Re chi3 |E_pk|^2 times the overlap
/// integral along the pulse-centre world line. time defaults to l / v_g, the
/// moment the centre leaves the sample.
double quadrature_cross_phase(
    const MediumParams &m,
    const DriveParams &d,
    const PulsePair &pulses,
    double length,
    PulseRole role,
    IndexConvention conv = IndexConvention::PaperLiteral,
    std::optional<double> time = std::nullopt);

/// Intensity transmission of one channel of the cross-Kerr row, averaged over
/// that pulse's own temporal profile.
double profile_averaged_transmission(
    const MediumParams &m,
    const DriveParams &d,
    const PulsePair &pulses,
    double length,
    PulseRole role,
    IndexConvention conv = IndexConvention::PaperLiteral);

/// Spectral amplitude xi(w) sampled on a uniform grid; int |xi|^2 dw = 1.
struct Wavepacket {
    double center_frequency = 0;  // rad/s
    double duration = 0;          // s
    std::vector<double> frequencies;
    std::vector<cdouble> amplitudes;

    /// xi(w) = (tau^2 / 2 pi)^{1/4} exp(-tau^2 (w - w0)^2 / 4) on `samples` points over +-span/tau.
    static Wavepacket gaussian(double center_frequency, double duration, int samples = 4096, double span = 6);

    double spacing() const;
    double norm_squared() const;
    double inner_product_abs2(const Wavepacket &other) const;  // |<this|other>|^2
};

/// n(w) sampled on a frequency grid, linearly interpolated.
struct IndexTable {
    std::vector<double> frequencies;  // ascending, rad/s
    std::vector<cdouble> index;

    cdouble at(double omega) const;
    bool covers(double lo, double hi) const;
};

struct WavepacketPropagation {
    Wavepacket output;
    /// |<exact|approx>|^2 / (<exact|exact><approx|approx>) where approx keeps only
    /// the centre index and its first derivative (phase plus group delay).
    double fidelity;
};

/// Applies exp{i (w/c) n(w) l} sample by sample. Throws NumericalError if the
/// table does not cover the wavepacket grid.
WavepacketPropagation propagate_wavepacket(const Wavepacket &w, const IndexTable &n, double length);

/// Frequency-resolved index seen by the probe (or trigger) with all other beams
/// fixed, from the exact steady state. Sweeps the pulse's own laser frequency.
IndexTable oracle_index_table(
    const MediumParams &m,
    const DriveParams &d,
    PulseRole role,
    const std::vector<double> &frequencies,
    IndexConvention conv = IndexConvention::PaperLiteral);

}  // namespace mgate

#endif
