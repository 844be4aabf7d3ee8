#ifndef MGATE_TESTS_SUPPORT_H
#define MGATE_TESTS_SUPPORT_H

#include <cmath>
#include <complex>

#include "mgate/core.h"

namespace mgate::testing {

/// Operating point Q at face value.
inline DriveParams set_q() {
    DriveParams d;
    d.rabi_1 = 0.08;
    d.rabi_2 = 2;
    d.rabi_3 = 0.04;
    d.rabi_4 = 1;
    d.detuning_3 = 20.01;
    d.detuning_4 = 20;
    return d;
}

/// Classical operating point.
inline DriveParams set_classical() {
    DriveParams d;
    d.rabi_1 = 1.4;
    d.rabi_2 = 7;
    d.rabi_3 = 0.16;
    d.rabi_4 = 1;
    d.detuning_3 = 18.01;
    d.detuning_4 = 18;
    return d;
}

/// Moderate drive whose transients relax within ~25 / gamma.
inline DriveParams fast_relaxing() {
    DriveParams d;
    d.rabi_1 = 0.05;
    d.rabi_2 = 2;
    d.rabi_3 = 0.04;
    d.rabi_4 = 1;
    d.detuning_1 = 0.1;
    d.detuning_3 = 2;
    d.detuning_4 = 1.5;
    return d;
}

inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

inline double rel_diff(std::complex<double> a, std::complex<double> b) {
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

}  // namespace mgate::testing

#endif
