#ifndef MGATE_GATE_H
#define MGATE_GATE_H

#include <array>
#include <cstdint>

#include "mgate/core.h"
#include "mgate/propagation.h"

namespace mgate {

/// Product basis of probe (P) and trigger (T) polarizations.
///
/// Row index is 2 p + t with p, t = 0 for sigma+ and 1 for sigma-, so the
/// order is (++, +-, -+, --). Only the +- row has both pulses inside the
/// medium's active transitions.
enum class Row { PlusPlus = 0, PlusMinus = 1, MinusPlus = 2, MinusMinus = 3 };

constexpr int kRows = 4;

const char *to_string(Row r);

struct PhaseTable {
    double phi0_P = 0;       // k_P l
    double phi0_T = 0;       // k_T l
    double phiLambda_P = 0;  // sigma+ probe with only the pump present
    double phiPlus_P = 0;    // sigma+ probe with a sigma- trigger
    double phiMinus_T = 0;   // sigma- trigger with a sigma+ probe
    double zeta_P = 0;
    double zeta_T = 0;
    /// Amplitude transmissions per row, indexed by Row.
    std::array<double, kRows> transmission_P{1, 1, 1, 1};
    std::array<double, kRows> transmission_T{1, 1, 1, 1};

    double probe_phase(Row r) const;
    double trigger_phase(Row r) const;
    double row_phase(Row r) const { return probe_phase(r) + trigger_phase(r); }
    /// |t_P t_T|^2 for the row.
    double row_intensity_transmission(Row r) const;
};

/// Builds the four-row phase table. The Lambda phase is evaluated with
/// trigger and tuner switched off. Throws RegimeError outside the
/// perturbative regime.
PhaseTable truth_table(
    const MediumParams &m,
    const DriveParams &d,
    const PulsePair &pulses,
    double length,
    IndexConvention conv = IndexConvention::PaperLiteral);

/// Wraps to (-pi, pi].
double wrap_phase(double phi);

struct ConditionalPhase {
    double wrapped;
    double unwrapped;
};

/// phiPlus_P + phiMinus_T - phiLambda_P - phi0_T.
ConditionalPhase conditional_phase(const PhaseTable &t);

bool is_universal(double phi, double tol);

struct GateOperator {
    std::array<cdouble, kRows> diagonal{1, 1, 1, 1};

    cdouble operator[](Row r) const { return diagonal[static_cast<int>(r)]; }
    bool is_unitary(double tol = 1e-12) const;
};

/// Diagonal entries t_P t_T exp(-i (phi_P + phi_T)) row by row.
GateOperator gate_operator(const PhaseTable &t);

/// Removes one global and two single-qubit phases so that rows ++, -+ and --
/// become real and positive; the +- row then carries exp(-i phi).
GateOperator strip_local_phases(const GateOperator &g);

struct TwoQubitState {
    std::array<cdouble, kRows> amplitudes{};

    cdouble operator[](Row r) const { return amplitudes[static_cast<int>(r)]; }
    double norm_squared() const;
    static TwoQubitState product(cdouble p_plus, cdouble p_minus, cdouble t_plus, cdouble t_minus);
};

TwoQubitState apply_gate(const TwoQubitState &s, const GateOperator &g);

/// |Tr(U^dagger A)|^2 / 16 with U = diag(1, exp(-i target), 1, 1). Equals the
/// intensity transmission for a uniformly lossy gate with the right phases.
double gate_fidelity(const GateOperator &actual, double target_phase);

/// Fidelity of the table's operator after local phases are stripped.
double gate_fidelity(const PhaseTable &t, double target_phase);

/// Smallest l > 0 whose conditional phase equals the target modulo 2 pi, moving
/// in the direction set by sign(Re chi3). Throws ZeroSlopeError when the phase
/// cannot change with l and NoRootError when the walk-off saturates it first.
double solve_length_for_target_phase(
    const MediumParams &m,
    const DriveParams &d,
    const PulsePair &pulses,
    double target,
    IndexConvention conv = IndexConvention::PaperLiteral);

/// Intensity-transmission averages; the phrase "average transmission" admits
/// each of the first three readings.
struct TransmissionSummary {
    double channel_mean;   // (T_P + T_T)/2 on the +- row, pulse centres
    double row_mean;       // mean over rows of T_P T_T
    double profile_mean;   // (T_P + T_T)/2 on the +- row, averaged over each pulse profile
    double coincidence;    // T_P T_T on the +- row
    double coincidence_reduction() const { return 1 - coincidence; }
};

TransmissionSummary transmission_summary(
    const MediumParams &m,
    const DriveParams &d,
    const PulsePair &pulses,
    double length,
    IndexConvention conv = IndexConvention::PaperLiteral);

enum class Beam { Probe = 0, Pump = 1, Trigger = 2, Tuner = 3 };

/// Independent Gaussian laser jitter per beam.
struct NoiseModel {
    std::array<double, 4> intensity_sigma{};  // relative jitter of |Omega_i|^2
    std::array<double, 4> detuning_sigma{};   // additive jitter of Delta_i, units of gamma
    std::uint64_t samples = 10000;
    std::uint64_t seed = 1;

    bool operator==(const NoiseModel &) const = default;
};

struct MonteCarloStats {
    double mean_error;
    double standard_error;
    std::uint64_t samples;
};

/// One jittered copy of the drive; pulse peaks follow their cw Rabi frequencies.
/// Deterministic in (noise.seed, index).
std::pair<DriveParams, PulsePair> sample_drive(
    const DriveParams &d, const PulsePair &pulses, const NoiseModel &noise, std::uint64_t index);

/// Mean over samples of 1 - |2 + exp(-i dLambda) + exp(-i (dPlus + dMinus))|^2 / 16,
/// where the d's are the deviations of phiLambda_P, phiPlus_P, phiMinus_T from
/// the noise-free table. Results do not depend on the thread count.
MonteCarloStats monte_carlo_error(
    const MediumParams &m,
    const DriveParams &d,
    const PulsePair &pulses,
    double length,
    const NoiseModel &noise,
    IndexConvention conv = IndexConvention::PaperLiteral,
    unsigned threads = 0);

}  // namespace mgate

#endif
