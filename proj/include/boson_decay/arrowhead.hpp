#pragma once

#include <span>

#include <Eigen/Dense>

namespace boson_decay {

using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Eigen-decomposition A = V diag(values) V^T of a real symmetric matrix.
/// values ascend; column k of `vectors` is the k-th eigenvector. Rows are
/// contiguous so a single matrix element of f(A) is one dot product.
struct SymmetricEigensystem
{
    Eigen::VectorXd values;
    RowMatrixXd vectors;
};

/// Reference path: Eigen's self-adjoint solver on a dense matrix.
SymmetricEigensystem dense_eigensystem(const Eigen::MatrixXd& symmetric);

/// Dense form of the arrowhead matrix [[corner, border^T], [border, diag(diag)]].
Eigen::MatrixXd arrowhead_matrix(double corner, std::span<const double> diag,
                                 std::span<const double> border);

/// True when diag is strictly ascending and no border entry is zero; only
/// then is the structured solver applicable.
bool is_unreduced_arrowhead(std::span<const double> diag, std::span<const double> border);

/// O(n^2) eigensolver for an unreduced arrowhead matrix.
///
/// Each eigenvalue is the unique root of the secular function
///   f(lambda) = corner - lambda + sum_i border_i^2 / (lambda - diag_i)
/// in one interlacing interval, found by bisection in coordinates relative to
/// the nearer pole. Eigenvectors use border weights recomputed from the
/// computed eigenvalues (the Gu-Eisenstat construction), which keeps them
/// orthogonal to working precision. Falls back to dense_eigensystem when the
/// input is not unreduced.
SymmetricEigensystem arrowhead_eigensystem(double corner, std::span<const double> diag,
                                           std::span<const double> border);

}  // namespace boson_decay
