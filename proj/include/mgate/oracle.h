#ifndef MGATE_ORACLE_H
#define MGATE_ORACLE_H

#include <Eigen/Core>
#include <vector>

#include "mgate/core.h"

namespace mgate {

/// Probability amplitudes c1..c5 of the five-level M scheme.
struct AmplitudeState {
    Eigen::Matrix<cdouble, 5, 1> c = Eigen::Matrix<cdouble, 5, 1>::Zero();

    static AmplitudeState ground() {
        AmplitudeState s;
        s.c(0) = 1;
        return s;
    }
    cdouble operator[](int level) const { return c(level - 1); }
    double norm_squared() const { return c.squaredNorm(); }
};

/// M with i dc/dt = M c. Couplings form the chain 1-2-3-4-5; only levels 2 and
/// 4 carry an anti-Hermitian (decay) part.
struct EvolutionMatrix {
    Eigen::Matrix<cdouble, 5, 5> m;
    double gamma_2;  // units of gamma, needed for the norm-decay law
    double gamma_4;

    cdouble operator()(int row, int col) const { return m(row - 1, col - 1); }
    double max_abs_entry() const { return m.cwiseAbs().maxCoeff(); }
};

EvolutionMatrix build_evolution_matrix(const MediumParams &m, const DriveParams &d);

struct IntegrationOptions {
    /// Hold c1 at its initial value (weak-probe approximation) and evolve c2..c5.
    bool pin_ground = false;
    /// Keep every n-th step in the returned trajectory (first and last always kept).
    int record_every = 1;
};

struct Trajectory {
    std::vector<double> times;  // units of 1/gamma
    std::vector<AmplitudeState> states;
    double dt = 0;
    /// Largest |Delta norm - (-gamma int (|c2|^2 + |c4|^2) dt)| per unit gamma t seen over
    /// the run; only meaningful when c1 is not pinned.
    double max_norm_law_defect = 0;
};

/// Fixed-step classical RK4 for dc/dt = -i M c. Throws NumericalError when
/// dt > 0.01 / max |M_ij|.
Trajectory integrate_amplitudes(
    const AmplitudeState &c0, const EvolutionMatrix &M, double t_max, double dt, const IntegrationOptions &opts = {});

/// dc/dt = -i M c, with c1 frozen when pin_ground is set.
Eigen::Matrix<cdouble, 5, 1> amplitude_derivative(const EvolutionMatrix &M, const AmplitudeState &s, bool pin_ground);

/// 1 / |Im lambda| of the slowest-decaying mode of the pinned (levels 2..5) block.
double relaxation_time(const EvolutionMatrix &M);

/// Integration horizon that damps every transient of the pinned block by e^-20.
double settle_time(const EvolutionMatrix &M);

/// Steady state with c1 pinned to 1: solves the 4x4 system from the
/// stationary equations for c2..c5. Throws SingularSystemError.
AmplitudeState solve_steady_state(const EvolutionMatrix &M);

struct OracleSusceptibilities {
    cdouble probe;    // chi_P, dimensionless
    cdouble trigger;  // chi_T, dimensionless
};

/// Susceptibilities read off the exact pinned steady state.
///
/// chi_P = 2 (N/V) |mu12|^2 c2 c1* / (eps0 hbar Omega1) and
/// chi_T = 2 (N/V) |mu34|^2 c4 c3* / (eps0 hbar Omega3); the factor 2 is the one
/// that reproduces chi1_probe exactly for E e^{-iwt} + c.c. with Omega = 2 mu E / hbar.
/// Vanishing Omega1 or Omega3 are replaced by a 1e-8 gamma seed so the linear
/// response is still defined.
OracleSusceptibilities oracle_susceptibilities(const MediumParams &m, const DriveParams &d, bool check_regime = true);

}  // namespace mgate

#endif
