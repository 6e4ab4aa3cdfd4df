#include "eqrom/deim.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "eqrom/errors.hpp"
#include "eqrom/pod.hpp"

namespace eqrom {

DeimOperator deim_build(const Eigen::MatrixXd& nonlinear_snapshots, double weight, int k) {
    const Eigen::Index n = nonlinear_snapshots.rows();
    if (k < 1 || k > std::min(n, nonlinear_snapshots.cols()))
        throw ConfigError("deim_build: rank k out of range");

    WeightedPod pod = pod_method_of_snapshots(nonlinear_snapshots, weight, k);
    for (uint8_t flag : pod.padded)
        if (flag) throw ConfigError("deim_build: k exceeds the numerical rank of the snapshots");

    DeimOperator op;
    op.w = std::move(pod.u);
    op.indices.reserve(k);

    // Greedy index selection: first the largest entry of the first mode, then
    // the largest entry of each successive interpolation residual.
    Eigen::Index row;
    op.w.col(0).cwiseAbs().maxCoeff(&row);
    op.indices.push_back(static_cast<uint32_t>(row));

    for (int j = 1; j < k; ++j) {
        Eigen::MatrixXd ptw(j, j);
        Eigen::VectorXd ptwj(j);
        for (int i = 0; i < j; ++i) {
            for (int c = 0; c < j; ++c) ptw(i, c) = op.w(op.indices[i], c);
            ptwj[i] = op.w(op.indices[i], j);
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(ptw);
        const Eigen::VectorXd coeff = lu.solve(ptwj);
        if (!coeff.allFinite()) throw NumericError("deim_build: singular P^T W during greedy selection");
        const Eigen::VectorXd residual = op.w.col(j) - op.w.leftCols(j) * coeff;
        residual.cwiseAbs().maxCoeff(&row);
        if (residual.cwiseAbs().maxCoeff() == 0.0)
            throw NumericError("deim_build: zero interpolation residual; modes are degenerate");
        op.indices.push_back(static_cast<uint32_t>(row));
    }

    Eigen::MatrixXd ptw(k, k);
    for (int i = 0; i < k; ++i) ptw.row(i) = op.w.row(op.indices[i]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(ptw, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = svd.singularValues().minCoeff();
    if (smin <= 0.0) throw NumericError("deim_build: P^T W is singular");
    op.ptw_condition = svd.singularValues().maxCoeff() / smin;
    op.lift = op.w * ptw.inverse();
    return op;
}

Eigen::VectorXd deim_eval(const DeimOperator& op, const std::function<double(double)>& g,
                          const Eigen::VectorXd& a_phi) {
    if (op.sampler.size() == 0)
        throw DimensionError("deim_eval: sampler not attached (attach_deim first)");
    if (op.sampler.cols() != a_phi.size())
        throw DimensionError("deim_eval: reduced vector has wrong length");
    Eigen::VectorXd phi_sampled = op.sampler * a_phi;
    for (Eigen::Index i = 0; i < phi_sampled.size(); ++i) phi_sampled[i] = g(phi_sampled[i]);
    return op.lift * phi_sampled;
}

Eigen::VectorXd deim_project(const DeimOperator& op, const Eigen::VectorXd& full_field) {
    Eigen::VectorXd sampled(op.rank());
    for (int i = 0; i < op.rank(); ++i) sampled[i] = full_field[op.indices[i]];
    return op.lift * sampled;
}

}  // namespace eqrom
