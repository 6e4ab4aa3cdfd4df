#ifndef EQROM_POD_HPP
#define EQROM_POD_HPP

#include <cstdint>
#include <vector>

#include "eqrom/grid.hpp"

namespace eqrom {

/// Snapshot matrices: Phi columns are states at the sample times, Q columns
/// the auxiliary variable h(Phi_k) at the same times.
struct SnapshotSet {
    Grid2D grid;
    Eigen::MatrixXd phi;  // n x m
    Eigen::MatrixXd q;    // n x m
    Eigen::VectorXd times;
    double sample_interval = 0.0;

    int columns() const { return static_cast<int>(phi.cols()); }
};

/// Truncated POD bases for phi and q, orthonormal in the weighted inner
/// product (u, v) = weight * u.v (so columns have Euclidean norm
/// 1/sqrt(weight)). Singular values are kept in full.
struct PodBasis {
    Grid2D grid;
    int rank = 0;
    double weight = 0.0;
    Eigen::MatrixXd u_phi;  // n x r
    Eigen::MatrixXd u_q;    // n x r
    Eigen::VectorXd sv_phi;
    Eigen::VectorXd sv_q;
    // Columns past the numerical rank, filled by seeded random
    // orthonormalization; 1 = padded.
    std::vector<uint8_t> padded_phi;
    std::vector<uint8_t> padded_q;

    bool any_padding() const;
};

struct WeightedPod {
    Eigen::MatrixXd u;
    Eigen::VectorXd sv;
    std::vector<uint8_t> padded;
};

/// Method of snapshots in the weighted inner product: eigendecompose the
/// m x m Gram matrix weight * (data^T data), keep the r leading modes. Columns
/// whose singular value falls below 1e-12 * sigma_1 are replaced by seeded
/// random vectors orthonormalized against the earlier columns and flagged.
/// Column signs are fixed so the largest-magnitude entry is positive.
WeightedPod pod_method_of_snapshots(const Eigen::MatrixXd& data, double weight, int r);

PodBasis compute_basis(const SnapshotSet& snaps, int r);

/// Smallest r whose singular-value tail satisfies the threshold:
/// relative mode  sqrt(sum_{j>r} s_j^2) <  threshold * sqrt(sum_j s_j^2),
/// absolute mode  sqrt(sum_{j>r} s_j^2) <  threshold.
/// All-zero input returns 1.
int truncation_rank(const Eigen::VectorXd& sv, double threshold, bool relative = true);

/// Direct projection errors sum_j ||Phi_j - P Phi_j||^2 (weighted norm) for
/// both bases; computed from the data, not from the sigma tail.
struct ProjectionError {
    double err_phi = 0.0;
    double err_q = 0.0;
};
ProjectionError projection_error(const SnapshotSet& snaps, const PodBasis& basis);

}  // namespace eqrom

#endif
