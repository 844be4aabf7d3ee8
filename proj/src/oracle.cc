#include "mgate/oracle.h"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <sstream>

#include "mgate/errors.h"

namespace mgate {

namespace {

using Vec5 = Eigen::Matrix<cdouble, 5, 1>;

constexpr double kSeedRabi = 1e-8;

double decay_power(const EvolutionMatrix &M, const Vec5 &c) {
    return M.gamma_2 * std::norm(c(1)) + M.gamma_4 * std::norm(c(3));
}

}  // namespace

EvolutionMatrix build_evolution_matrix(const MediumParams &m, const DriveParams &d) {
    auto [d12, d13, d14] = derived_detunings(d);
    const cdouble i(0, 1);
    EvolutionMatrix M{Eigen::Matrix<cdouble, 5, 5>::Zero(), m.decay_2, m.decay_4};
    auto &e = M.m;
    e(0, 1) = -std::conj(d.rabi_1) / 2.0;
    e(1, 0) = -d.rabi_1 / 2.0;
    e(1, 1) = d.detuning_1 - i * m.decay_2 / 2.0;
    e(1, 2) = -d.rabi_2 / 2.0;
    e(2, 1) = -std::conj(d.rabi_2) / 2.0;
    e(2, 2) = d12;
    e(2, 3) = -std::conj(d.rabi_3) / 2.0;
    e(3, 2) = -d.rabi_3 / 2.0;
    e(3, 3) = d13 - i * m.decay_4 / 2.0;
    e(3, 4) = -d.rabi_4 / 2.0;
    e(4, 3) = -std::conj(d.rabi_4) / 2.0;
    e(4, 4) = d14;
    return M;
}

Eigen::Matrix<cdouble, 5, 1> amplitude_derivative(const EvolutionMatrix &M, const AmplitudeState &s, bool pin_ground) {
    Vec5 dc = cdouble(0, -1) * (M.m * s.c);
    if (pin_ground) {
        dc(0) = 0;
    }
    return dc;
}

Trajectory integrate_amplitudes(
    const AmplitudeState &c0, const EvolutionMatrix &M, double t_max, double dt, const IntegrationOptions &opts) {
    double scale = M.max_abs_entry();
    if (!(dt > 0) || (scale > 0 && dt > 0.01 / scale)) {
        std::ostringstream msg;
        msg << "time step " << dt << " violates the stability guard dt <= 0.01/max|M_ij| = " << 0.01 / scale;
        throw NumericalError(msg.str());
    }
    if (!(t_max >= 0)) {
        throw NumericalError("t_max must be non-negative");
    }

    const bool pin = opts.pin_ground;
    const int every = std::max(1, opts.record_every);
    auto deriv = [&](const Vec5 &c) {
        Vec5 dc = cdouble(0, -1) * (M.m * c);
        if (pin) {
            dc(0) = 0;
        }
        return dc;
    };

    Trajectory traj;
    traj.dt = dt;
    auto steps = static_cast<long long>(std::ceil(t_max / dt - 1e-9));
    traj.times.push_back(0);
    traj.states.push_back(c0);

    Vec5 c = c0.c;
    // Norm-law bookkeeping over step pairs (Simpson's rule on the decay power).
    double pair_start_norm = c.squaredNorm();
    double p0 = decay_power(M, c);
    double p1 = 0;

    for (long long n = 1; n <= steps; ++n) {
        Vec5 k1 = deriv(c);
        Vec5 k2 = deriv(c + (dt / 2) * k1);
        Vec5 k3 = deriv(c + (dt / 2) * k2);
        Vec5 k4 = deriv(c + dt * k3);
        c += (dt / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        if (!pin) {
            if (n % 2 == 1) {
                p1 = decay_power(M, c);
            } else {
                double p2 = decay_power(M, c);
                double expected = -(dt / 3) * (p0 + 4 * p1 + p2);
                double actual = c.squaredNorm() - pair_start_norm;
                traj.max_norm_law_defect = std::max(traj.max_norm_law_defect, std::abs(actual - expected) / (2 * dt));
                pair_start_norm = c.squaredNorm();
                p0 = p2;
            }
        }

        if (n % every == 0 || n == steps) {
            traj.times.push_back(static_cast<double>(n) * dt);
            traj.states.push_back(AmplitudeState{c});
        }
    }
    return traj;
}

double relaxation_time(const EvolutionMatrix &M) {
    Eigen::Matrix<cdouble, 4, 4> block = M.m.bottomRightCorner<4, 4>();
    Eigen::ComplexEigenSolver<Eigen::Matrix<cdouble, 4, 4>> solver(block, false);
    double slowest = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 4; ++k) {
        slowest = std::min(slowest, std::abs(solver.eigenvalues()(k).imag()));
    }
    if (slowest == 0) {
        return std::numeric_limits<double>::infinity();
    }
    return 1 / slowest;
}

double settle_time(const EvolutionMatrix &M) {
    return 20 * relaxation_time(M);
}

AmplitudeState solve_steady_state(const EvolutionMatrix &M) {
    Eigen::Matrix<cdouble, 4, 4> A = M.m.bottomRightCorner<4, 4>();
    Eigen::Matrix<cdouble, 4, 1> rhs = -M.m.block<4, 1>(1, 0);
    Eigen::FullPivLU<Eigen::Matrix<cdouble, 4, 4>> lu(A);
    if (!lu.isInvertible()) {
        throw SingularSystemError("stationary amplitude equations are singular (a level is decoupled)");
    }
    AmplitudeState s;
    s.c(0) = 1;
    s.c.tail<4>() = lu.solve(rhs);
    return s;
}

OracleSusceptibilities oracle_susceptibilities(const MediumParams &m, const DriveParams &d, bool check_regime) {
    if (check_regime) {
        require_valid(m, d);
    }
    const double k12 = 2 * m.coupling_12();
    const double k34 = 2 * m.coupling_34();

    OracleSusceptibilities out;

    DriveParams probe_drive = d;
    if (d.rabi_1 == 0.0) {
        probe_drive.rabi_1 = kSeedRabi;
    }
    auto sp = solve_steady_state(build_evolution_matrix(m, probe_drive));
    out.probe = k12 * sp.c(1) * std::conj(sp.c(0)) / probe_drive.rabi_1;

    DriveParams trigger_drive = d;
    if (d.rabi_3 == 0.0) {
        trigger_drive.rabi_3 = kSeedRabi;
    }
    auto st = solve_steady_state(build_evolution_matrix(m, trigger_drive));
    out.trigger = k34 * st.c(3) * std::conj(st.c(2)) / trigger_drive.rabi_3;
    return out;
}

}  // namespace mgate
