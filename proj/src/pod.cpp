#include "eqrom/pod.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "eqrom/errors.hpp"

namespace eqrom {

bool PodBasis::any_padding() const {
    for (uint8_t f : padded_phi)
        if (f) return true;
    for (uint8_t f : padded_q)
        if (f) return true;
    return false;
}

namespace {

void fix_column_sign(Eigen::Ref<Eigen::VectorXd> col) {
    Eigen::Index imax = 0;
    col.cwiseAbs().maxCoeff(&imax);
    if (col[imax] < 0.0) col = -col;
}

// Modified Gram-Schmidt in the weighted inner product, two sweeps per column.
// The Gram route computes trailing modes with orthogonality defect of order
// eps * (sigma_1 / sigma_j)^2; this pass restores orthonormality to roundoff
// while leaving well-separated leading modes untouched.
void reorthonormalize(Eigen::MatrixXd& u, double weight) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index i = 0; i < j; ++i)
                u.col(j) -= (weight * u.col(i).dot(u.col(j))) * u.col(i);
        const double nrm = std::sqrt(weight) * u.col(j).norm();
        if (!(nrm > 1e-10)) throw NumericError("pod: basis column collapsed during orthonormalization");
        u.col(j) /= nrm;
    }
}

}  // namespace

WeightedPod pod_method_of_snapshots(const Eigen::MatrixXd& data, double weight, int r) {
    const Eigen::Index n = data.rows();
    const Eigen::Index m = data.cols();
    if (r < 1 || r > std::min(n, m))
        throw ConfigError("pod: rank must satisfy 1 <= r <= min(n, m)");
    if (!(weight > 0.0)) throw ConfigError("pod: weight must be positive");
    if (!data.allFinite()) throw NumericError("pod: non-finite snapshot data");

    const Eigen::MatrixXd gram = weight * (data.transpose() * data);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.info() != Eigen::Success) throw NumericError("pod: Gram eigendecomposition failed");

    // Ascending from Eigen; reorder descending and clamp tiny negatives.
    WeightedPod out;
    out.sv.resize(m);
    Eigen::MatrixXd v(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        out.sv[j] = std::sqrt(std::max(eig.eigenvalues()[m - 1 - j], 0.0));
        v.col(j) = eig.eigenvectors().col(m - 1 - j);
    }

    // Numerical-rank cutoff. The Gram route resolves sigma only down to about
    // sqrt(eps) * sigma_1: eigenvalues at the roundoff floor of the m x m Gram
    // matrix certify nothing, so they count as rank-deficient alongside the
    // sigma_j < 1e-12 * sigma_1 criterion.
    const double lam_floor = static_cast<double>(m) * 1e-15 * std::max(eig.eigenvalues().maxCoeff(), 0.0);
    const double cutoff = std::max(1e-12 * out.sv[0], std::sqrt(lam_floor));
    out.u.resize(n, r);
    out.padded.assign(r, 0);
    std::mt19937 rng(0x90d5eedu);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int j = 0; j < r; ++j) {
        if (out.sv[j] > cutoff && out.sv[j] > 0.0) {
            out.u.col(j) = data * v.col(j) / out.sv[j];
        } else {
            // Beyond the numerical rank: seeded random filler, flagged.
            for (Eigen::Index i = 0; i < n; ++i) out.u(i, j) = dist(rng);
            out.padded[j] = 1;
        }
    }
    reorthonormalize(out.u, weight);
    for (int j = 0; j < r; ++j) fix_column_sign(out.u.col(j));
    return out;
}

PodBasis compute_basis(const SnapshotSet& snaps, int r) {
    if (snaps.phi.rows() != snaps.grid.size() || snaps.phi.rows() != snaps.q.rows() ||
        snaps.phi.cols() != snaps.q.cols())
        throw DimensionError("compute_basis: snapshot matrices are inconsistent");

    const double w = snaps.grid.cell_weight();
    WeightedPod pphi = pod_method_of_snapshots(snaps.phi, w, r);
    WeightedPod pq = pod_method_of_snapshots(snaps.q, w, r);

    PodBasis basis;
    basis.grid = snaps.grid;
    basis.rank = r;
    basis.weight = w;
    basis.u_phi = std::move(pphi.u);
    basis.u_q = std::move(pq.u);
    basis.sv_phi = std::move(pphi.sv);
    basis.sv_q = std::move(pq.sv);
    basis.padded_phi = std::move(pphi.padded);
    basis.padded_q = std::move(pq.padded);
    return basis;
}

int truncation_rank(const Eigen::VectorXd& sv, double threshold, bool relative) {
    if (!(threshold > 0.0)) throw ConfigError("truncation threshold must be > 0");
    const int d = static_cast<int>(sv.size());
    if (d == 0) throw ConfigError("truncation_rank: empty singular-value array");
    const double total = sv.squaredNorm();
    if (total == 0.0) return 1;
    const double bound = relative ? threshold * std::sqrt(total) : threshold;
    double tail = total;
    for (int r = 1; r <= d; ++r) {
        tail -= sv[r - 1] * sv[r - 1];
        if (std::sqrt(std::max(tail, 0.0)) < bound) return r;
    }
    return d;
}

ProjectionError projection_error(const SnapshotSet& snaps, const PodBasis& basis) {
    require_same_grid(snaps.grid, basis.grid, "projection_error");
    const double w = basis.weight;
    auto direct = [w](const Eigen::MatrixXd& data, const Eigen::MatrixXd& u) {
        double err = 0.0;
        for (Eigen::Index j = 0; j < data.cols(); ++j) {
            const Eigen::VectorXd coeff = w * (u.transpose() * data.col(j));
            err += w * (data.col(j) - u * coeff).squaredNorm();
        }
        return err;
    };
    return {direct(snaps.phi, basis.u_phi), direct(snaps.q, basis.u_q)};
}

}  // namespace eqrom
