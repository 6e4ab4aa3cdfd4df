#ifndef EQROM_FOM_HPP
#define EQROM_FOM_HPP

#include <vector>

#include "eqrom/model.hpp"
#include "eqrom/pod.hpp"

namespace eqrom {

struct FomState {
    Field phi;
    Field q;
    double t = 0.0;
};

/// One diagnostics row per time level; NaN marks non-applicable columns.
struct EnergyRow {
    double t = 0.0;
    double energy = 0.0;
    double modified_energy = 0.0;  // BDF2 two-level energy (ROM runs only)
    double dissipation = 0.0;
    double xi0 = 0.0;
    double mass = 0.0;
    double eq_drift = 0.0;  // ||q - h(phi)||_2
};

using EnergyLog = std::vector<EnergyRow>;

/// phi = built-in initial profile, q = h(phi), t = 0.
FomState fom_init(const EqModel& model);

/// Crank-Nicolson EQ step with extrapolated coefficient g(phi_bar),
/// phi_bar = (3/2) phi^n - (1/2) phi^{n-1} (pass prev = cur on the first
/// step). q is eliminated through q^{n+1} = q^n + g(phi_bar).*(phi^{n+1} -
/// phi^n); the remaining variable-coefficient SPD system for the phi update
/// is solved by preconditioned CG to relative residual 1e-10 (cap 500
/// iterations). Models with a skew mobility part are not supported here.
FomState fom_step_cn(const FomState& cur, const FomState& prev, const EqModel& model, double dt);

struct FomRunResult {
    SnapshotSet snapshots;
    EnergyLog log;
};

/// Integrate to T with step dt, sampling phi into the snapshot matrix (and
/// h(phi) into Q) at t = k*sample_interval, k >= 1. When no sample time is
/// reached (T < sample_interval, e.g. T = 0) the initial state is recorded as
/// the single column. sample_interval must be a positive multiple of dt.
FomRunResult run_fom(const EqModel& model, double dt, double T, double sample_interval);

}  // namespace eqrom

#endif
