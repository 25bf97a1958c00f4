#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

namespace splident {

/// Clamped-domain uniform knot vector for cubic B-splines.
///
/// The time domain [0, T] is split into r uniform segments. Three extra
/// knots extend past each end with the same spacing h = T/r, giving r+7
/// knots total and r+3 cubic basis functions.
class KnotVector {
public:
    KnotVector() = default;

    /// Build the r+7 uniformly spaced knots covering [0, T].
    /// Throws std::invalid_argument for T <= 0 or r < 4.
    static KnotVector uniform(double T, int segments);

    double domain_start() const noexcept { return 0.0; }
    double domain_end() const noexcept { return duration_; }
    double duration() const noexcept { return duration_; }
    int segments() const noexcept { return segments_; }
    int basis_count() const noexcept { return segments_ + 3; }
    double spacing() const noexcept { return duration_ / segments_; }

    const std::vector<double>& knots() const noexcept { return knots_; }
    double knot(int i) const { return knots_[static_cast<std::size_t>(i)]; }

    /// Index s of the segment [tau_s, tau_{s+1}) containing t, with t = T
    /// assigned to the last interior segment so the basis stays
    /// right-continuous at the domain end. Throws std::domain_error for t
    /// outside [0, T].
    int segment_of(double t) const;

private:
    std::vector<double> knots_;
    double duration_ = 0.0;
    int segments_ = 0;
};

using ControlPoints = Eigen::MatrixXd;  // (r+3) x n, one column per state

/// Basis functions (or a derivative order of them) tabulated at a set of
/// evaluation instants. Rows are sparse: at most 4 nonzeros each.
struct BasisMatrix {
    Eigen::SparseMatrix<double> entries;  // #times x (r+3)
    int deriv_order = 0;                  // 0, 1 or 2
    std::vector<double> times;

    Eigen::Index rows() const { return entries.rows(); }
    Eigen::Index cols() const { return entries.cols(); }
};

/// All r+3 cubic basis values (or derivative values) at a single time.
/// Cox-de Boor recursion evaluated on the 4-function active span;
/// derivatives come from the analytic degree-lowering formula.
Eigen::VectorXd basis_values(double t, const KnotVector& kv, int deriv_order = 0);

/// Tabulate basis_values at many instants as a sparse matrix.
/// Throws std::domain_error naming the first out-of-domain index.
BasisMatrix basis_matrix(const std::vector<double>& times, const KnotVector& kv,
                         int deriv_order = 0);

/// States (or their derivatives, per N's order) at N's times: N * P.
Eigen::MatrixXd eval_state(const BasisMatrix& N, const ControlPoints& P);

/// Default segment count for a signal with n_samples measurements:
/// ceil(n_samples / 4) clamped to [8, 2 * n_samples].
int default_segments(int n_samples);

}  // namespace splident
