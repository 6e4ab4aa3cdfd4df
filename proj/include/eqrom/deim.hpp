#ifndef EQROM_DEIM_HPP
#define EQROM_DEIM_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace eqrom {

/// Discrete empirical interpolation operator for a componentwise nonlinear
/// field: approx = lift * g(sampler * a_phi), with lift = W (P^T W)^{-1}
/// evaluated at the k greedily selected grid rows.
struct DeimOperator {
    Eigen::MatrixXd w;             // n x k POD modes of the nonlinear snapshots
    std::vector<uint32_t> indices; // interpolation rows, distinct
    Eigen::MatrixXd lift;          // n x k, W (P^T W)^{-1}
    Eigen::MatrixXd sampler;       // k x r, P^T U_phi (set by attach_deim)
    double ptw_condition = 0.0;    // condition number of P^T W

    int rank() const { return static_cast<int>(indices.size()); }
};

/// W from the weighted method of snapshots on the nonlinear snapshot matrix;
/// indices by the standard DEIM greedy (argmax of the interpolation residual).
DeimOperator deim_build(const Eigen::MatrixXd& nonlinear_snapshots, double weight, int k);

/// Approximate nonlinear field from reduced coordinates; g is evaluated only
/// at the sampled rows. Requires sampler to be set.
Eigen::VectorXd deim_eval(const DeimOperator& op, const std::function<double(double)>& g,
                          const Eigen::VectorXd& a_phi);

/// Oblique projection lift * P^T applied to an exact full-space field
/// (reference path for tests and for non-componentwise nonlinearities).
Eigen::VectorXd deim_project(const DeimOperator& op, const Eigen::VectorXd& full_field);

}  // namespace eqrom

#endif
