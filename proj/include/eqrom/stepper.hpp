#ifndef EQROM_STEPPER_HPP
#define EQROM_STEPPER_HPP

#include "eqrom/fom.hpp"
#include "eqrom/rom.hpp"

namespace eqrom {

enum class TimeScheme { CN, BDF2 };

std::string to_string(TimeScheme s);
TimeScheme time_scheme_from_string(const std::string& s);

struct SchemeConfig {
    TimeScheme scheme = TimeScheme::CN;
    RomVariant variant = RomVariant::II;
    bool relaxed = false;
    double eta = 0.99;  // fraction of the dissipation budget spent on re-sync
    double dt = 1e-3;

    void validate() const;
};

/// Weighted projections a_phi = U_phi^T phi0, a_q = U_q^T h(phi0).
ReducedState init_reduced(const RomSystem& sys, const Field& phi0);

struct StepResult {
    ReducedState next;
    double dissipation = 0.0;  // the scheme's own rate at its evaluation point
    double xi0 = std::nan(""); // NaN when the step is not relaxed
};

/// One step of the configured scheme. prev supplies the extra history level;
/// pass prev = cur on the first step (BDF2 then reduces to its CN starter).
StepResult rom_step(const RomSystem& sys, const ReducedState& cur, const ReducedState& prev,
                    const SchemeConfig& cfg);

// Step matrices of the II schemes; their positive definiteness is what makes
// the linear steps uniquely solvable. Exposed for positivity spot checks.
Eigen::MatrixXd step_matrix_cn_ii(const RomSystem& sys, const StepOperators& ops, double dt);
Eigen::MatrixXd step_matrix_bdf2_ii(const RomSystem& sys, const StepOperators& ops, double dt);

/// Closed-form solution of min{xi in [0,1] : A xi^2 + B xi + C <= 0}:
/// max{0, (-B - sqrt(B^2 - 4AC)) / (2A)}, clamped to [0,1]. Requires
/// feasibility at xi = 1 (A + B + C <= 0 up to roundoff). A <= 0 signals a
/// degenerate relaxation (no mismatch); returns 0 if C <= 0, else 1. A
/// negative discriminant falls back to 1 with interior_infeasible set.
struct Xi0Result {
    double xi0 = 1.0;
    bool interior_infeasible = false;
};
Xi0Result xi0_closed_form(double A, double B, double C);

struct RelaxCoeffs {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// Quadratic-constraint coefficients of the relaxed CN step. ahat is the
/// step-1 solution, abar_half the extrapolated state used for the mobility
/// coefficient; the dissipation budget is evaluated at (ahat + a_n)/2.
RelaxCoeffs relax_coefficients_cn(const RomSystem& sys, const ReducedState& ahat,
                                  const ReducedState& a_n, const ReducedState& abar_half,
                                  double eta, double dt);

/// BDF2 analog; the budget is evaluated at ahat with the coefficient from
/// abar = 2 a_n - a_{n-1}.
RelaxCoeffs relax_coefficients_bdf2(const RomSystem& sys, const ReducedState& ahat,
                                    const ReducedState& a_n, const ReducedState& abar,
                                    double eta, double dt);

struct RomRunResult {
    EnergyLog log;
    Eigen::MatrixXd traj_phi;  // lifted states at sample times
    Eigen::MatrixXd traj_q;
    Eigen::VectorXd times;
    double sample_interval = 0.0;
};

/// Integrate the ROM to T, logging one row per step and lifting the state at
/// t = k*sample_interval (same convention as run_fom).
RomRunResult run_rom(const RomSystem& sys, const ReducedState& a0, const SchemeConfig& cfg,
                     double T, double sample_interval);

}  // namespace eqrom

#endif
