#include "mgate/propagation.h"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "mgate/errors.h"
#include "mgate/oracle.h"

namespace mgate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrtPi = 1.7724538509055160273;

double inverse_velocity(GroupVelocity v) {
    if (!(v.value > 0)) {
        std::ostringstream msg;
        msg << "group velocity " << v.value << " m/s is not positive (beta < 0 or inverted dispersion)";
        throw RegimeError(msg.str());
    }
    return v.unslowed() ? 0.0 : 1.0 / v.value;
}

struct RoleView {
    double k;              // own wave number
    double partner_field;  // |E_pk| of the other pulse
    double partner_tau;
    GroupVelocity v_self;
    GroupVelocity v_other;
};

RoleView role_view(
    const MediumParams &m, const DriveParams &d, const PulsePair &pulses, PulseRole role, IndexConvention conv) {
    GroupVelocity v_p = group_velocity_probe(m, d, conv);
    GroupVelocity v_t = group_velocity_trigger(m, d, conv);
    if (role == PulseRole::Probe) {
        return {m.k_P(), field_from_rabi(pulses.trigger.peak_rabi, m.gamma, m.dipole_34), pulses.trigger.duration, v_p,
                v_t};
    }
    return {m.k_T(), field_from_rabi(pulses.probe.peak_rabi, m.gamma, m.dipole_12), pulses.probe.duration, v_t, v_p};
}

double gk_integrate(const std::function<double(double)> &f, double a, double b, double tol = 1e-12) {
    if (!(b > a)) {
        return 0;
    }
    double error = 0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, tol, &error);
}

// Closed form of overlap_integral over the whole sample, used where no oracle is involved.
double overlap_closed_form(double a, double tau, double length, double s) {
    double walk = a * length / tau;
    if (std::abs(walk) < 1e-6) {
        double u = (s + a * length / 2) / tau;
        return length * std::exp(-2 * u * u);
    }
    const double r2 = std::sqrt(2.0);
    return tau / (r2 * a) * (kSqrtPi / 2) * (std::erf(r2 * (s + a * length) / tau) - std::erf(r2 * s / tau));
}

}  // namespace

PulsePair pulses_from_drive(const DriveParams &d, double probe_duration, double trigger_duration) {
    return {{std::abs(d.rabi_1), probe_duration, PulseRole::Probe},
            {std::abs(d.rabi_3), trigger_duration, PulseRole::Trigger}};
}

cdouble refractive_index(const Susceptibility &chi, IndexConvention conv) {
    return 1.0 + index_scale(conv) * 2 * phys::pi * chi.value;
}

double zeta(GroupVelocity v_probe, GroupVelocity v_trigger, double length, double tau, PulseRole role) {
    double a = inverse_velocity(v_probe) - inverse_velocity(v_trigger);
    if (role == PulseRole::Trigger) {
        a = -a;
    }
    return std::sqrt(2.0) * length * a / tau;
}

double erf_over_zeta(double z) {
    if (std::abs(z) < 1e-4) {
        double z2 = z * z;
        return 2 / kSqrtPi * (1 - z2 / 3 + z2 * z2 / 10);
    }
    return std::erf(z) / z;
}

PropagationResult linear_phase(const MediumParams &m, const DriveParams &d, double length, IndexConvention conv) {
    cdouble n = refractive_index(chi1_probe(m, d), conv);
    PropagationResult r;
    r.phase = m.k_P() * length * n.real();
    r.amplitude_transmission = std::exp(-m.k_P() * length * n.imag());
    return r;
}

PropagationResult cross_phase(
    const MediumParams &m,
    const DriveParams &d,
    const PulsePair &pulses,
    double length,
    PulseRole role,
    IndexConvention conv) {
    RoleView view = role_view(m, d, pulses, role, conv);
    cdouble chi3 = chi3_cross(m, d).value;
    PropagationResult r;
    r.zeta = zeta(role == PulseRole::Probe ? view.v_self : view.v_other,
                  role == PulseRole::Probe ? view.v_other : view.v_self, length, view.partner_tau, role);
    double common = index_scale(conv) * view.k * length * std::pow(phys::pi, 1.5) * view.partner_field *
                    view.partner_field * erf_over_zeta(r.zeta);
    r.phase = common * chi3.real();
    r.amplitude_transmission = std::exp(-common * chi3.imag());
    return r;
}

double overlap_integral(
    GroupVelocity v_self, GroupVelocity v_other, double tau_other, double length, double time, double slice_offset) {
    double a = inverse_velocity(v_self) - inverse_velocity(v_other);
    double z_end = length;
    if (std::isfinite(time) && !v_self.unslowed()) {
        z_end = std::min(length, v_self.value * (time - slice_offset));
    }
    if (!(z_end > 0)) {
        return 0;
    }
    const double s = slice_offset;
    auto f = [=](double z) {
        double u = (s + a * z) / tau_other;
        return std::exp(-2 * u * u);
    };
    // Split at the intensity peak so the adaptive rule never straddles a narrow spike.
    if (a != 0) {
        double peak = -s / a;
        if (peak > 0 && peak < z_end) {
            return gk_integrate(f, 0, peak) + gk_integrate(f, peak, z_end);
        }
    }
    return gk_integrate(f, 0, z_end);
}

double quadrature_cross_phase(
    const MediumParams &m,
    const DriveParams &d,
    const PulsePair &pulses,
    double length,
    PulseRole role,
    IndexConvention conv,
    std::optional<double> time) {
    RoleView view = role_view(m, d, pulses, role, conv);
    if (view.partner_field == 0) {
        return 0;
    }
    double t = time ? *time : (view.v_self.unslowed() ? kInf : length / view.v_self.value);
    double overlap = overlap_integral(view.v_self, view.v_other, view.partner_tau, length, t);
    cdouble chi3 = chi3_cross(m, d).value;
    return 2 * phys::pi * index_scale(conv) * view.k * chi3.real() * view.partner_field * view.partner_field * overlap;
}

double profile_averaged_transmission(
    const MediumParams &m,
    const DriveParams &d,
    const PulsePair &pulses,
    double length,
    PulseRole role,
    IndexConvention conv) {
    RoleView view = role_view(m, d, pulses, role, conv);
    double im_chi3 = chi3_cross(m, d).value.imag();
    double own_tau = role == PulseRole::Probe ? pulses.probe.duration : pulses.trigger.duration;
    // Intensity attenuation exponent per unit overlap.
    double rate = 2 * 2 * phys::pi * index_scale(conv) * view.k * im_chi3 * view.partner_field * view.partner_field;
    if (rate == 0) {
        return 1;
    }
    auto weight = [&](double s) { return std::exp(-2 * s * s / (own_tau * own_tau)); };
    double a = inverse_velocity(view.v_self) - inverse_velocity(view.v_other);
    auto weighted = [&](double s) {
        return weight(s) * std::exp(-rate * overlap_closed_form(a, view.partner_tau, length, s));
    };
    double span = 6 * own_tau;
    double num = gk_integrate(weighted, -span, span, 1e-10);
    double den = own_tau * kSqrtPi / std::sqrt(2.0);
    return num / den;
}

Wavepacket Wavepacket::gaussian(double center_frequency, double duration, int samples, double span) {
    if (!(duration > 0) || samples < 2 || !(span > 0)) {
        throw ConfigError("wavepacket", "duration and span must be > 0 and samples >= 2");
    }
    Wavepacket w;
    w.center_frequency = center_frequency;
    w.duration = duration;
    w.frequencies.resize(samples);
    w.amplitudes.resize(samples);
    double half = span / duration;
    double h = 2 * half / (samples - 1);
    double norm = std::pow(duration * duration / (2 * phys::pi), 0.25);
    for (int j = 0; j < samples; ++j) {
        double dw = -half + j * h;
        w.frequencies[j] = center_frequency + dw;
        w.amplitudes[j] = norm * std::exp(-duration * duration * dw * dw / 4);
    }
    return w;
}

double Wavepacket::spacing() const {
    if (frequencies.size() < 2) {
        return 0;
    }
    return (frequencies.back() - frequencies.front()) / static_cast<double>(frequencies.size() - 1);
}

double Wavepacket::norm_squared() const {
    double sum = 0;
    for (const auto &a : amplitudes) {
        sum += std::norm(a);
    }
    return sum * spacing();
}

double Wavepacket::inner_product_abs2(const Wavepacket &other) const {
    cdouble sum = 0;
    std::size_t n = std::min(amplitudes.size(), other.amplitudes.size());
    for (std::size_t j = 0; j < n; ++j) {
        sum += std::conj(amplitudes[j]) * other.amplitudes[j];
    }
    return std::norm(sum * spacing());
}

bool IndexTable::covers(double lo, double hi) const {
    return !frequencies.empty() && frequencies.front() <= lo && frequencies.back() >= hi;
}

cdouble IndexTable::at(double omega) const {
    if (!covers(omega, omega)) {
        throw NumericalError("frequency outside the refractive-index table");
    }
    if (frequencies.size() == 1) {
        return index.front();
    }
    auto it = std::upper_bound(frequencies.begin(), frequencies.end(), omega);
    std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - frequencies.begin()), frequencies.size() - 1);
    std::size_t lo = hi - 1;
    double x = (omega - frequencies[lo]) / (frequencies[hi] - frequencies[lo]);
    return index[lo] + x * (index[hi] - index[lo]);
}

WavepacketPropagation propagate_wavepacket(const Wavepacket &w, const IndexTable &n, double length) {
    if (w.frequencies.empty()) {
        throw NumericalError("empty wavepacket grid");
    }
    double h = w.spacing();
    double w0 = w.center_frequency;
    if (!n.covers(w.frequencies.front(), w.frequencies.back()) || !n.covers(w0 - h, w0 + h)) {
        std::ostringstream msg;
        msg << "index table does not cover the wavepacket grid [" << w.frequencies.front() << ", "
            << w.frequencies.back() << "] rad/s";
        throw NumericalError(msg.str());
    }
    const cdouble i(0, 1);
    cdouble n0 = n.at(w0);
    cdouble dn = (n.at(w0 + h) - n.at(w0 - h)) / (2 * h);
    // Exponent i (w/c) n(w) l expanded to first order about w0.
    cdouble phase0 = w0 / phys::c * n0 * length;
    cdouble slope = (n0 + w0 * dn) * length / phys::c;

    const std::size_t count = w.frequencies.size();
    std::vector<cdouble> exact(count);
    std::vector<cdouble> approx(count);
    WavepacketPropagation out{w, 0};
    for (std::size_t j = 0; j < count; ++j) {
        double om = w.frequencies[j];
        exact[j] = i * (om / phys::c) * n.at(om) * length;
        approx[j] = i * (phase0 + slope * (om - w0));
        out.output.amplitudes[j] = w.amplitudes[j] * std::exp(exact[j]);
    }

    // Fidelity is scale invariant, so each spectrum is rescaled by its largest
    // magnitude before exponentiating; strong absorption then cannot underflow to 0/0.
    auto rescaled = [&](std::vector<cdouble> &exponent) {
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < count; ++j) {
            if (w.amplitudes[j] != 0.0) {
                top = std::max(top, exponent[j].real() + std::log(std::abs(w.amplitudes[j])));
            }
        }
        for (std::size_t j = 0; j < count; ++j) {
            exponent[j] = w.amplitudes[j] == 0.0 ? 0.0 : std::exp(exponent[j] + std::log(w.amplitudes[j]) - top);
        }
    };
    rescaled(exact);
    rescaled(approx);
    cdouble overlap = 0;
    double norm_exact = 0;
    double norm_approx = 0;
    for (std::size_t j = 0; j < count; ++j) {
        overlap += std::conj(exact[j]) * approx[j];
        norm_exact += std::norm(exact[j]);
        norm_approx += std::norm(approx[j]);
    }
    double denom = norm_exact * norm_approx;
    out.fidelity = denom > 0 ? std::norm(overlap) / denom : 0;
    return out;
}

IndexTable oracle_index_table(
    const MediumParams &m,
    const DriveParams &d,
    PulseRole role,
    const std::vector<double> &frequencies,
    IndexConvention conv) {
    IndexTable table;
    table.frequencies = frequencies;
    std::sort(table.frequencies.begin(), table.frequencies.end());
    table.index.reserve(frequencies.size());
    double center = role == PulseRole::Probe ? m.omega_P() : m.omega_T();
    for (double om : table.frequencies) {
        // Detunings are transition minus laser frequency, so bluer light lowers them.
        double shift = (om - center) / m.gamma;
        DriveParams local = d;
        if (role == PulseRole::Probe) {
            local.detuning_1 -= shift;
        } else {
            local.detuning_3 -= shift;
        }
        auto chi = oracle_susceptibilities(m, local, false);
        cdouble value = role == PulseRole::Probe ? chi.probe : chi.trigger;
        table.index.push_back(refractive_index({value, SusceptibilityOrder::Linear}, conv));
    }
    return table;
}

}  // namespace mgate
