#ifndef EQROM_ROM_HPP
#define EQROM_ROM_HPP

#include <optional>

#include "eqrom/deim.hpp"
#include "eqrom/model.hpp"
#include "eqrom/pod.hpp"

namespace eqrom {

enum class RomVariant { Vanilla, I, II };

std::string to_string(RomVariant v);
RomVariant rom_variant_from_string(const std::string& s);

struct ReducedState {
    Eigen::VectorXd a_phi;
    Eigen::VectorXd a_q;
    double t = 0.0;

    Eigen::VectorXd stacked() const;
    static ReducedState from_stacked(const Eigen::VectorXd& a, double t);
};

/// Reduced system: static operators plus the precomputed full-space columns
/// needed to assemble the state-dependent ones. All projections use the
/// weighted inner product the basis is orthonormal under.
struct RomSystem {
    EqModel model;
    PodBasis basis;

    Eigen::MatrixXd a0;        // U_phi^T L0* U_phi (SPD)
    Eigen::MatrixXd a1;        // U_phi^T L0* G L0 U_phi
    Eigen::MatrixXd l0_u;      // n x r, L0 applied to the phi basis columns
    Eigen::MatrixXd g_l0_u;    // n x r, G L0 U_phi
    Eigen::MatrixXd g_u;       // n x r, G U_phi
    Eigen::VectorXd mass_row;  // weight * column sums of U_phi

    std::optional<DeimOperator> deim;  // replaces the exact coefficient field
    bool use_deim = false;

    int rank() const { return basis.rank; }
    double weight() const { return basis.weight; }
    /// Mass matrix U^T L* U = blockdiag(A0, I).
    Eigen::MatrixXd mass_matrix() const;
};

/// Computes A0, A1 and the static columns; verifies A0 is SPD.
RomSystem assemble_static(const PodBasis& basis, const EqModel& model);

void attach_deim(RomSystem& sys, DeimOperator op);

/// Coefficient field gamma = g(U_phi a_phi_bar), via DEIM when enabled.
Eigen::VectorXd coefficient_field(const RomSystem& sys, const Eigen::VectorXd& a_phi_bar);

struct DynamicOps {
    Eigen::MatrixXd a2;  // U_phi^T L0* G diag(gamma) U_q
    Eigen::MatrixXd a3;  // U_q^T diag(gamma) G L0 U_phi
    Eigen::MatrixXd a4;  // U_q^T diag(gamma) G diag(gamma) U_q (PSD)
};
DynamicOps assemble_dynamic(const RomSystem& sys, const Eigen::VectorXd& a_phi_bar);

/// Everything a time step needs at a given extrapolated state; gamma is the
/// coefficient field shared by the matrices and the dissipation evaluation.
struct StepOperators {
    Eigen::VectorXd gamma;
    Eigen::MatrixXd k_ii;   // 2r x 2r: [[A1,A2],[A3,A4]]
    Eigen::MatrixXd n_hat;  // 2r x 2r: U^T N_h U
    Eigen::MatrixXd k_van;  // 2r x 2r: U^T N_h L_h U
};
StepOperators assemble_step_operators(const RomSystem& sys, const Eigen::VectorXd& a_phi_bar);

Eigen::VectorXd rhs_vanilla(const RomSystem& sys, const ReducedState& a);
Eigen::VectorXd rhs_rom_i(const RomSystem& sys, const ReducedState& a);
struct RomRhsII {
    Eigen::MatrixXd mass;  // U^T L* U
    Eigen::VectorXd rhs;
};
RomRhsII rhs_rom_ii(const RomSystem& sys, const ReducedState& a);

/// E_r = 1/2 a_phi^T A0 a_phi + 1/2 a_q^T a_q.
double reduced_energy(const RomSystem& sys, const ReducedState& a);

/// Two-level BDF2 energy 1/4 [Ua1]^T L [Ua1] + 1/4 [U(2a1-a2)]^T L [U(2a1-a2)].
double modified_bdf2_energy(const RomSystem& sys, const ReducedState& a_now,
                            const ReducedState& a_prev);

/// (L_h[Ua], N_h(gamma) L_h[Ua]) evaluated through the flux s = N0 L[Ua]:
/// returns (s, Gs s); the skew part contributes nothing.
double dissipation_ii(const RomSystem& sys, const ReducedState& a, const Eigen::VectorXd& gamma);

/// Same with the projected flux U U^T L_h[Ua] of the I-variant.
double dissipation_i(const RomSystem& sys, const ReducedState& a, const Eigen::VectorXd& gamma);

/// ||U_q a_q - h(U_phi a_phi)||_2 in the weighted norm.
double eq_drift(const RomSystem& sys, const ReducedState& a);

double reduced_mass(const RomSystem& sys, const ReducedState& a);

/// Lift to full space.
Field lift_phi(const RomSystem& sys, const ReducedState& a);
Field lift_q(const RomSystem& sys, const ReducedState& a);

}  // namespace eqrom

#endif
