#include "mgate/gate.h"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include "mgate/errors.h"

namespace mgate {

namespace {

int idx(Row r) { return static_cast<int>(r); }

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Nonlinear probe plus trigger phase at length l.
double cross_phase_sum(
    const MediumParams &m, const DriveParams &d, const PulsePair &pulses, double l, IndexConvention conv) {
    return cross_phase(m, d, pulses, l, PulseRole::Probe, conv).phase +
           cross_phase(m, d, pulses, l, PulseRole::Trigger, conv).phase;
}

}  // namespace

const char *to_string(Row r) {
    switch (r) {
        case Row::PlusPlus:
            return "++";
        case Row::PlusMinus:
            return "+-";
        case Row::MinusPlus:
            return "-+";
        case Row::MinusMinus:
            return "--";
    }
    return "?";
}

double PhaseTable::probe_phase(Row r) const {
    switch (r) {
        case Row::PlusPlus:
            return phiLambda_P;
        case Row::PlusMinus:
            return phiPlus_P;
        default:
            return phi0_P;
    }
}

double PhaseTable::trigger_phase(Row r) const {
    return r == Row::PlusMinus ? phiMinus_T : phi0_T;
}

double PhaseTable::row_intensity_transmission(Row r) const {
    double t = transmission_P[idx(r)] * transmission_T[idx(r)];
    return t * t;
}

PhaseTable truth_table(
    const MediumParams &m, const DriveParams &d, const PulsePair &pulses, double length, IndexConvention conv) {
    require_valid(m, d);
    PhaseTable t;
    t.phi0_P = m.k_P() * length;
    t.phi0_T = m.k_T() * length;

    DriveParams lambda_only = d;
    lambda_only.rabi_3 = 0;
    lambda_only.rabi_4 = 0;
    PropagationResult lin = linear_phase(m, lambda_only, length, conv);
    t.phiLambda_P = lin.phase;

    PropagationResult probe = cross_phase(m, d, pulses, length, PulseRole::Probe, conv);
    PropagationResult trigger = cross_phase(m, d, pulses, length, PulseRole::Trigger, conv);
    PropagationResult lin_full = linear_phase(m, d, length, conv);
    t.phiPlus_P = lin_full.phase + probe.phase;
    t.phiMinus_T = t.phi0_T + trigger.phase;
    t.zeta_P = probe.zeta;
    t.zeta_T = trigger.zeta;

    t.transmission_P[idx(Row::PlusPlus)] = lin.amplitude_transmission;
    t.transmission_P[idx(Row::PlusMinus)] = lin_full.amplitude_transmission * probe.amplitude_transmission;
    t.transmission_T[idx(Row::PlusMinus)] = trigger.amplitude_transmission;
    return t;
}

double wrap_phase(double phi) {
    double w = std::remainder(phi, 2 * phys::pi);
    return w <= -phys::pi ? w + 2 * phys::pi : w;
}

ConditionalPhase conditional_phase(const PhaseTable &t) {
    double phi = (t.phiPlus_P - t.phiLambda_P) + (t.phiMinus_T - t.phi0_T);
    return {wrap_phase(phi), phi};
}

bool is_universal(double phi, double tol) {
    if (!(tol > 0)) {
        throw ConfigError("tol", "tolerance must be > 0");
    }
    return std::abs(wrap_phase(phi)) > tol;
}

bool GateOperator::is_unitary(double tol) const {
    return std::all_of(diagonal.begin(), diagonal.end(), [tol](cdouble z) { return std::abs(std::abs(z) - 1) <= tol; });
}

GateOperator gate_operator(const PhaseTable &t) {
    GateOperator g;
    for (int r = 0; r < kRows; ++r) {
        Row row = static_cast<Row>(r);
        double amp = t.transmission_P[r] * t.transmission_T[r];
        g.diagonal[r] = std::polar(amp, -t.row_phase(row));
    }
    return g;
}

GateOperator strip_local_phases(const GateOperator &g) {
    auto arg = [&](Row r) { return std::arg(g[r]); };
    double global = arg(Row::MinusMinus);
    double trigger_plus = arg(Row::MinusPlus) - global;
    double probe_plus = arg(Row::PlusPlus) - arg(Row::MinusPlus);
    GateOperator out;
    for (int r = 0; r < kRows; ++r) {
        bool p_plus = r < 2;
        bool t_plus = r % 2 == 0;
        double local = global + (p_plus ? probe_plus : 0) + (t_plus ? trigger_plus : 0);
        out.diagonal[r] = g.diagonal[r] * std::polar(1.0, -local);
    }
    return out;
}

double TwoQubitState::norm_squared() const {
    double s = 0;
    for (auto a : amplitudes) {
        s += std::norm(a);
    }
    return s;
}

TwoQubitState TwoQubitState::product(cdouble p_plus, cdouble p_minus, cdouble t_plus, cdouble t_minus) {
    TwoQubitState s;
    s.amplitudes = {p_plus * t_plus, p_plus * t_minus, p_minus * t_plus, p_minus * t_minus};
    return s;
}

TwoQubitState apply_gate(const TwoQubitState &s, const GateOperator &g) {
    TwoQubitState out;
    for (int r = 0; r < kRows; ++r) {
        out.amplitudes[r] = g.diagonal[r] * s.amplitudes[r];
    }
    return out;
}

double gate_fidelity(const GateOperator &actual, double target_phase) {
    cdouble trace = 0;
    for (int r = 0; r < kRows; ++r) {
        cdouble ideal = r == idx(Row::PlusMinus) ? std::polar(1.0, -target_phase) : cdouble(1);
        trace += std::conj(ideal) * actual.diagonal[r];
    }
    return std::norm(trace) / (kRows * kRows);
}

double gate_fidelity(const PhaseTable &t, double target_phase) {
    return gate_fidelity(strip_local_phases(gate_operator(t)), target_phase);
}

double solve_length_for_target_phase(
    const MediumParams &m, const DriveParams &d, const PulsePair &pulses, double target, IndexConvention conv) {
    require_valid(m, d);
    if (chi3_cross(m, d).value.real() == 0) {
        throw ZeroSlopeError("conditional phase does not change with length (Re chi3 = 0)");
    }
    // Initial slope dphi/dl at l -> 0, where erf(zeta)/zeta is maximal.
    constexpr double probe_len = 1e-12;
    double slope = cross_phase_sum(m, d, pulses, probe_len, conv) / probe_len;
    if (slope == 0 || !std::isfinite(slope)) {
        throw ZeroSlopeError("conditional phase does not change with length (no pulse overlap)");
    }

    double w = wrap_phase(target);
    double desired;
    if (slope > 0) {
        desired = w > 0 ? w : w + 2 * phys::pi;
    } else {
        desired = w < 0 ? w : w - 2 * phys::pi;
    }
    auto residual = [&](double l) { return cross_phase_sum(m, d, pulses, l, conv) - desired; };

    double lo = 0;
    double hi = desired / slope;
    double f_hi = residual(hi);
    int expansions = 0;
    while ((slope > 0 ? f_hi < 0 : f_hi > 0)) {
        if (++expansions > 200 || !std::isfinite(f_hi)) {
            std::ostringstream msg;
            msg << "conditional phase saturates before reaching " << desired
                << " rad (walk-off limits the overlap); no length exists";
            throw NoRootError(msg.str());
        }
        lo = hi;
        hi *= 2;
        f_hi = residual(hi);
    }
    if (f_hi == 0) {
        return hi;
    }
    double f_lo = residual(lo);
    std::uintmax_t max_iter = 300;
    auto [a, b] =
        boost::math::tools::toms748_solve(residual, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
    double l = std::abs(residual(a)) < std::abs(residual(b)) ? a : b;
    if (std::abs(residual(l)) > 1e-9) {
        throw NumericalError("length solve did not reach 1e-9 rad");
    }
    return l;
}

TransmissionSummary transmission_summary(
    const MediumParams &m, const DriveParams &d, const PulsePair &pulses, double length, IndexConvention conv) {
    PhaseTable t = truth_table(m, d, pulses, length, conv);
    int pm = idx(Row::PlusMinus);
    double tp = t.transmission_P[pm] * t.transmission_P[pm];
    double tt = t.transmission_T[pm] * t.transmission_T[pm];

    TransmissionSummary s;
    s.channel_mean = (tp + tt) / 2;
    s.row_mean = 0;
    for (int r = 0; r < kRows; ++r) {
        s.row_mean += t.row_intensity_transmission(static_cast<Row>(r)) / kRows;
    }
    double pp = profile_averaged_transmission(m, d, pulses, length, PulseRole::Probe, conv);
    double pt = profile_averaged_transmission(m, d, pulses, length, PulseRole::Trigger, conv);
    s.profile_mean = (pp + pt) / 2;
    s.coincidence = tp * tt;
    return s;
}

std::pair<DriveParams, PulsePair> sample_drive(
    const DriveParams &d, const PulsePair &pulses, const NoiseModel &noise, std::uint64_t index) {
    std::mt19937_64 rng(splitmix64(noise.seed ^ splitmix64(index)));
    std::normal_distribution<double> normal(0.0, 1.0);

    std::array<double, 4> factor{};
    std::array<double, 4> shift{};
    for (int b = 0; b < 4; ++b) {
        double xi = normal(rng);
        double eta = normal(rng);
        factor[b] = std::sqrt(std::max(0.0, 1 + noise.intensity_sigma[b] * xi));
        shift[b] = noise.detuning_sigma[b] * eta;
    }

    DriveParams out = d;
    out.rabi_1 *= factor[0];
    out.rabi_2 *= factor[1];
    out.rabi_3 *= factor[2];
    out.rabi_4 *= factor[3];
    out.detuning_1 += shift[0];
    out.detuning_2 += shift[1];
    out.detuning_3 += shift[2];
    out.detuning_4 += shift[3];

    PulsePair p = pulses;
    p.probe.peak_rabi *= factor[0];
    p.trigger.peak_rabi *= factor[2];
    return {out, p};
}

MonteCarloStats monte_carlo_error(
    const MediumParams &m,
    const DriveParams &d,
    const PulsePair &pulses,
    double length,
    const NoiseModel &noise,
    IndexConvention conv,
    unsigned threads) {
    if (noise.samples < 100) {
        throw ConfigError("noise.samples", "at least 100 samples are required");
    }
    PhaseTable nominal = truth_table(m, d, pulses, length, conv);
    const std::uint64_t n = noise.samples;
    std::vector<double> errors(n);

    auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t k = begin; k < end; ++k) {
            auto [dk, pk] = sample_drive(d, pulses, noise, k);
            PhaseTable t = truth_table(m, dk, pk, length, conv);
            double d_lambda = t.phiLambda_P - nominal.phiLambda_P;
            double d_cross = (t.phiPlus_P - nominal.phiPlus_P) + (t.phiMinus_T - nominal.phiMinus_T);
            cdouble tr = 2.0 + std::polar(1.0, -d_lambda) + std::polar(1.0, -d_cross);
            errors[k] = 1 - std::norm(tr) / 16;
        }
    };

    unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n));
    if (workers <= 1) {
        run_range(0, n);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> failures(workers);
        std::uint64_t chunk = (n + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            std::uint64_t begin = w * chunk;
            std::uint64_t end = std::min(n, begin + chunk);
            pool.emplace_back([&, w, begin, end] {
                try {
                    run_range(begin, end);
                } catch (...) {
                    failures[w] = std::current_exception();
                }
            });
        }
        for (auto &th : pool) {
            th.join();
        }
        for (auto &f : failures) {
            if (f) {
                std::rethrow_exception(f);
            }
        }
    }

    double sum = 0;
    for (double e : errors) {
        sum += e;
    }
    double mean = sum / static_cast<double>(n);
    double var = 0;
    for (double e : errors) {
        var += (e - mean) * (e - mean);
    }
    var /= static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

}  // namespace mgate
