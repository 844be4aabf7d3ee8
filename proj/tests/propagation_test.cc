#include "mgate/propagation.h"

#include <gtest/gtest.h>

#include "mgate/errors.h"
#include "mgate/oracle.h"
#include "support.h"

using namespace mgate;
using mgate::testing::rel_diff;
using mgate::testing::set_q;

namespace {

const MediumParams kMedium = MediumParams::rubidium_d2();
constexpr double kLength = 1.8e-3;
constexpr double kSqrtPi = 1.7724538509055160273;

PulsePair q_pulses(const DriveParams &d, double tau = 1e-6) {
    return pulses_from_drive(d, tau, tau);
}

DriveParams matched_q() {
    return match_group_velocities(kMedium, set_q(), FreeParameter::Rabi1);
}

std::vector<double> grid_with_centre(const Wavepacket &w) {
    std::vector<double> f = w.frequencies;
    double h = w.spacing();
    f.push_back(w.center_frequency - h);
    f.push_back(w.center_frequency);
    f.push_back(w.center_frequency + h);
    return f;
}

double probe_fidelity(const DriveParams &d, double tau) {
    Wavepacket w = Wavepacket::gaussian(kMedium.omega_P(), tau);
    IndexTable n = oracle_index_table(kMedium, d, PulseRole::Probe, grid_with_centre(w));
    return propagate_wavepacket(w, n, kLength).fidelity;
}

}  // namespace

TEST(RefractiveIndex, Conventions) {
    EXPECT_EQ(refractive_index({0, SusceptibilityOrder::Linear}, IndexConvention::PaperLiteral), cdouble(1, 0));
    Susceptibility chi{cdouble(0, 1e-6), SusceptibilityOrder::Linear};
    cdouble lit = refractive_index(chi, IndexConvention::PaperLiteral);
    cdouble si = refractive_index(chi, IndexConvention::SI);
    EXPECT_EQ(lit, cdouble(1, 2 * phys::pi * 1e-6));
    EXPECT_NEAR(((lit - 1.0) / (si - 1.0)).real(), 4 * phys::pi, 1e-12);
}

TEST(Zeta, Examples) {
    GroupVelocity v{10};
    GroupVelocity inf{std::numeric_limits<double>::infinity()};
    EXPECT_EQ(zeta(v, v, kLength, 1e-6, PulseRole::Probe), 0);
    EXPECT_NEAR(zeta(v, inf, kLength, 1e-6, PulseRole::Probe), std::sqrt(2.0) * 180, 1e-9);
    EXPECT_NEAR(zeta(v, inf, kLength, 1e-6, PulseRole::Probe), 254.6, 0.05);
    EXPECT_LT(zeta(GroupVelocity{20}, v, kLength, 1e-6, PulseRole::Probe), 0);
}

TEST(Zeta, RoleSwapFlipsSign) {
    GroupVelocity a{3}, b{7};
    EXPECT_EQ(zeta(a, b, kLength, 1e-6, PulseRole::Probe), -zeta(a, b, kLength, 1e-6, PulseRole::Trigger));
}

TEST(Zeta, NonPositiveVelocityIsRegimeError) {
    EXPECT_THROW(zeta(GroupVelocity{-1}, GroupVelocity{1}, kLength, 1e-6, PulseRole::Probe), RegimeError);
    EXPECT_THROW(zeta(GroupVelocity{1}, GroupVelocity{0}, kLength, 1e-6, PulseRole::Probe), RegimeError);
}

TEST(ErfOverZeta, Values) {
    EXPECT_NEAR(erf_over_zeta(0), 2 / kSqrtPi, 1e-15);
    EXPECT_NEAR(erf_over_zeta(0), 1.1283791670955126, 1e-12);
    EXPECT_NEAR(erf_over_zeta(1), 0.8427007929497149, 1e-15);
    EXPECT_EQ(erf_over_zeta(-1), erf_over_zeta(1));
}

TEST(ErfOverZeta, ContinuousAcrossSeriesSwitch) {
    double below = erf_over_zeta(std::nextafter(1e-4, 0.0));
    double above = erf_over_zeta(1e-4);
    EXPECT_LT(std::abs(below - above), 1e-12);
}

TEST(ErfOverZeta, EvenPositiveDecreasing) {
    double prev = erf_over_zeta(0);
    for (double z = 1e-5; z < 50; z *= 1.3) {
        double v = erf_over_zeta(z);
        EXPECT_GT(v, 0);
        EXPECT_LT(v, prev) << z;
        EXPECT_EQ(erf_over_zeta(-z), v);
        prev = v;
    }
}

TEST(LinearPhase, VacuumAtTwoPhotonResonance) {
    auto r = linear_phase(kMedium, set_q(), kLength);
    EXPECT_EQ(r.phase, kMedium.k_P() * kLength);
    EXPECT_EQ(r.amplitude_transmission, 1);
    EXPECT_EQ(linear_phase(kMedium, set_q(), 0).phase, 0);
}

TEST(LinearPhase, DetunedShiftFollowsOracle) {
    DriveParams d = set_q();
    d.rabi_3 = 0;
    d.rabi_4 = 0;
    d.detuning_1 = 0.1;
    double shift = linear_phase(kMedium, d, kLength).phase - kMedium.k_P() * kLength;
    double chi = oracle_susceptibilities(kMedium, d).probe.real();
    double dominance = validity_check(kMedium, d).pump_dominance_ratio;
    EXPECT_LT(rel_diff(shift, 2 * phys::pi * kMedium.k_P() * kLength * chi), 5 / dominance);
}

TEST(CrossPhase, ZeroPartnerField) {
    DriveParams d = matched_q();
    PulsePair p = q_pulses(d);
    p.trigger.peak_rabi = 0;
    auto r = cross_phase(kMedium, d, p, kLength, PulseRole::Probe);
    EXPECT_EQ(r.phase, 0);
    EXPECT_EQ(r.amplitude_transmission, 1);
    EXPECT_EQ(quadrature_cross_phase(kMedium, d, p, kLength, PulseRole::Probe), 0);
}

TEST(CrossPhase, MatchedVelocitiesMeetQuadrature) {
    DriveParams d = matched_q();
    PulsePair p = q_pulses(d);
    for (auto role : {PulseRole::Probe, PulseRole::Trigger}) {
        auto r = cross_phase(kMedium, d, p, kLength, role);
        EXPECT_LT(std::abs(r.zeta), 1e-9);
        double closed = r.phase;
        double quad = quadrature_cross_phase(kMedium, d, p, kLength, role);
        EXPECT_LT(rel_diff(closed, quad), 1e-6);
    }
}

TEST(CrossPhase, MatchedVelocitiesAnyTime) {
    // At matched velocities the partner intensity is constant along the slice, so
    // the accumulated phase is linear in the distance travelled.
    DriveParams d = matched_q();
    PulsePair p = q_pulses(d);
    double v = group_velocity_probe(kMedium, d).value;
    double full = quadrature_cross_phase(kMedium, d, p, kLength, PulseRole::Probe);
    for (double frac : {0.1, 0.5, 0.9}) {
        double part = quadrature_cross_phase(kMedium, d, p, kLength, PulseRole::Probe, IndexConvention::PaperLiteral,
                                             frac * kLength / v);
        EXPECT_LT(rel_diff(part, frac * full), 1e-6) << frac;
    }
}

TEST(CrossPhase, ErfIdentityOverZetaGrid) {
    // Face-value operating point: the trigger-duration scan sweeps zeta_P, the
    // probe-duration scan sweeps zeta_T (opposite sign).
    DriveParams d = set_q();
    PulsePair base = q_pulses(d);
    double zp = cross_phase(kMedium, d, base, kLength, PulseRole::Probe).zeta;
    ASSERT_GT(std::abs(zp), 10);
    for (int j = 0; j < 20; ++j) {
        double target = -10 + 20.0 * j / 19;
        PulsePair p = base;
        PulseRole role = (target > 0) == (zp > 0) ? PulseRole::Probe : PulseRole::Trigger;
        if (role == PulseRole::Probe) {
            p.trigger.duration = base.trigger.duration * zp / target;
        } else {
            p.probe.duration = base.probe.duration * -zp / target;
        }
        auto r = cross_phase(kMedium, d, p, kLength, role);
        EXPECT_NEAR(r.zeta, target, 1e-9 * std::abs(target));
        double quad = quadrature_cross_phase(kMedium, d, p, kLength, role);
        EXPECT_LT(rel_diff(r.phase, quad), 1e-6) << target;
    }
}

TEST(CrossPhase, LargeMismatchSuppression) {
    DriveParams d = set_q();
    PulsePair p = q_pulses(d);
    auto r = cross_phase(kMedium, d, p, kLength, PulseRole::Probe);
    ASSERT_GT(std::abs(r.zeta), 20);
    double quad = quadrature_cross_phase(kMedium, d, p, kLength, PulseRole::Probe);
    double matched_equivalent = r.phase / erf_over_zeta(r.zeta) * erf_over_zeta(0);
    double suppression = quad / matched_equivalent;
    EXPECT_LT(rel_diff(suppression, kSqrtPi / 2 / std::abs(r.zeta)), 1e-6);
}

TEST(CrossPhase, LinearInLengthWhenMatched) {
    DriveParams d = matched_q();
    PulsePair p = q_pulses(d);
    double a = cross_phase(kMedium, d, p, 1e-4, PulseRole::Probe).phase;
    double b = cross_phase(kMedium, d, p, 3e-4, PulseRole::Probe).phase;
    EXPECT_LT(rel_diff(b, 3 * a), 1e-6);
}

TEST(CrossPhase, QuadraticInPartnerPeak) {
    DriveParams d = matched_q();
    PulsePair p = q_pulses(d);
    double a = cross_phase(kMedium, d, p, kLength, PulseRole::Probe).phase;
    p.trigger.peak_rabi *= 3;
    double b = cross_phase(kMedium, d, p, kLength, PulseRole::Probe).phase;
    EXPECT_LT(rel_diff(b, 9 * a), 1e-12);
}

TEST(CrossPhase, ProportionalToRealChi3) {
    // chi3 scales with N while the velocities scale with 1/N; halving tau keeps zeta fixed.
    DriveParams d = set_q();
    PulsePair p = q_pulses(d);
    MediumParams dense = kMedium;
    dense.atom_density *= 2;
    PulsePair q = p;
    q.probe.duration *= 2;
    q.trigger.duration *= 2;
    auto r1 = cross_phase(kMedium, d, p, kLength, PulseRole::Probe);
    auto r2 = cross_phase(dense, d, q, kLength, PulseRole::Probe);
    EXPECT_NEAR(r2.zeta, r1.zeta, 1e-9 * std::abs(r1.zeta));
    EXPECT_LT(rel_diff(r2.phase, 2 * r1.phase), 1e-12);
}

TEST(CrossPhase, TransmissionBounds) {
    DriveParams d = matched_q();
    PulsePair p = q_pulses(d);
    for (double l : {1e-6, 1e-4, 1e-3, 1e-2}) {
        for (auto role : {PulseRole::Probe, PulseRole::Trigger}) {
            double t = cross_phase(kMedium, d, p, l, role).amplitude_transmission;
            EXPECT_GT(t, 0);
            EXPECT_LT(t, 1);
        }
    }
    MediumParams lossless = kMedium;
    lossless.decay_4 = 0;
    EXPECT_EQ(cross_phase(lossless, d, p, kLength, PulseRole::Probe).amplitude_transmission, 1);
}

TEST(ProfileAveragedTransmission, BetweenZeroAndOne) {
    DriveParams d = matched_q();
    PulsePair p = q_pulses(d);
    double t = profile_averaged_transmission(kMedium, d, p, kLength, PulseRole::Probe);
    double centre = std::pow(cross_phase(kMedium, d, p, kLength, PulseRole::Probe).amplitude_transmission, 2);
    EXPECT_GT(t, centre);
    EXPECT_LT(t, 1);
}

TEST(Wavepacket, GaussianNormalised) {
    for (double tau : {1e-7, 1e-6, 1e-3}) {
        Wavepacket w = Wavepacket::gaussian(kMedium.omega_P(), tau);
        EXPECT_NEAR(w.norm_squared(), 1, 1e-6);
        EXPECT_EQ(w.frequencies.size(), 4096u);
        EXPECT_NEAR(w.frequencies.back() - w.center_frequency, 6 / tau, 1e-6 / tau);
    }
    EXPECT_THROW(Wavepacket::gaussian(1, 0), ConfigError);
}

TEST(Wavepacket, ConstantIndexIsExact) {
    Wavepacket w = Wavepacket::gaussian(kMedium.omega_P(), 1e-6);
    IndexTable n{{w.frequencies.front() - 1, w.frequencies.back() + 1}, {cdouble(1.0001, 1e-9), cdouble(1.0001, 1e-9)}};
    EXPECT_EQ(propagate_wavepacket(w, n, kLength).fidelity, 1);
}

TEST(Wavepacket, NormConservedForRealIndex) {
    Wavepacket w = Wavepacket::gaussian(kMedium.omega_P(), 1e-6);
    IndexTable n;
    for (double om : grid_with_centre(w)) {
        n.frequencies.push_back(om);
    }
    std::sort(n.frequencies.begin(), n.frequencies.end());
    for (double om : n.frequencies) {
        n.index.emplace_back(1 + 1e-3 * std::sin((om - w.center_frequency) * 3e-6), 0);
    }
    auto r = propagate_wavepacket(w, n, kLength);
    EXPECT_NEAR(r.output.norm_squared(), w.norm_squared(), 1e-12);
    EXPECT_LT(r.fidelity, 1);
}

TEST(Wavepacket, CoverageError) {
    Wavepacket w = Wavepacket::gaussian(kMedium.omega_P(), 1e-6);
    IndexTable n{{w.center_frequency - 1, w.center_frequency + 1}, {1, 1}};
    EXPECT_THROW(propagate_wavepacket(w, n, kLength), NumericalError);
    EXPECT_THROW(n.at(w.center_frequency + 2), NumericalError);
}

TEST(Wavepacket, LongPulsesApproachUnitFidelity) {
    DriveParams d = matched_q();
    d.rabi_3 = 0;
    d.rabi_4 = 0;
    double f4 = probe_fidelity(d, 1e-4);
    double f3 = probe_fidelity(d, 1e-3);
    EXPECT_GT(f3, f4);
    EXPECT_GT(f3, 0.999);
}

TEST(Wavepacket, FidelityGrowsWithDuration) {
    DriveParams d = matched_q();
    double prev = 0;
    for (double tau : {1e-5, 3e-5, 1e-4}) {
        double f = probe_fidelity(d, tau);
        EXPECT_GT(f, prev) << tau;
        prev = f;
    }
}
