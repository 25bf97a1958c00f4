#include "splident/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace splident {

KnotVector KnotVector::uniform(double T, int segments) {
    if (!(T > 0.0) || !std::isfinite(T))
        throw std::invalid_argument("KnotVector: domain length must be positive, got " +
                                    std::to_string(T));
    if (segments < 4)
        throw std::invalid_argument("KnotVector: need at least 4 segments, got " +
                                    std::to_string(segments));
    KnotVector kv;
    kv.duration_ = T;
    kv.segments_ = segments;
    kv.knots_.resize(static_cast<std::size_t>(segments) + 7);
    const double r = static_cast<double>(segments);
    for (int i = 0; i < segments + 7; ++i)
        kv.knots_[static_cast<std::size_t>(i)] = T * (static_cast<double>(i - 3) / r);
    kv.knots_[3] = 0.0;                                  // tau_3 = 0 exactly
    kv.knots_[static_cast<std::size_t>(segments) + 3] = T;  // tau_{r+3} = T exactly
    return kv;
}

int KnotVector::segment_of(double t) const {
    if (!(t >= 0.0 && t <= duration_))
        throw std::domain_error("time " + std::to_string(t) + " outside spline domain [0, " +
                                std::to_string(duration_) + "]");
    int s = 3 + static_cast<int>(std::floor(t / spacing()));
    s = std::clamp(s, 3, segments_ + 2);
    while (s > 3 && t < knots_[static_cast<std::size_t>(s)]) --s;
    while (s < segments_ + 2 && t >= knots_[static_cast<std::size_t>(s) + 1]) ++s;
    return s;
}

namespace {

// Values of the 4 active basis functions N_{s-3..s, 3} at t (segment s),
// or their deriv_order-th derivatives. The value triangle runs up to
// degree 3 - deriv_order; each remaining degree is raised through the
// analytic derivative recursion.
void active_basis(const KnotVector& kv, double t, int s, int deriv_order, double out[4]) {
    const std::vector<double>& tau = kv.knots();
    auto knot = [&](int i) { return tau[static_cast<std::size_t>(i)]; };

    double vals[4] = {1.0, 0.0, 0.0, 0.0};  // degree-0: indicator of segment s
    int k = 0;                              // current degree; vals[j] = N_{s-k+j, k}

    for (; k < 3 - deriv_order; ) {
        ++k;
        double next[4] = {0.0, 0.0, 0.0, 0.0};
        for (int j = 0; j <= k; ++j) {
            const int i = s - k + j;
            double acc = 0.0;
            if (j > 0)  // left parent N_{i,k-1} is vals[j-1]
                acc += (t - knot(i)) / (knot(i + k) - knot(i)) * vals[j - 1];
            if (j < k)  // right parent N_{i+1,k-1} is vals[j]
                acc += (knot(i + k + 1) - t) / (knot(i + k + 1) - knot(i + 1)) * vals[j];
            next[j] = acc;
        }
        std::copy(next, next + 4, vals);
    }

    for (; k < 3; ) {
        ++k;
        double next[4] = {0.0, 0.0, 0.0, 0.0};
        for (int j = 0; j <= k; ++j) {
            const int i = s - k + j;
            double acc = 0.0;
            if (j > 0)
                acc += vals[j - 1] / (knot(i + k) - knot(i));
            if (j < k)
                acc -= vals[j] / (knot(i + k + 1) - knot(i + 1));
            next[j] = static_cast<double>(k) * acc;
        }
        std::copy(next, next + 4, vals);
    }

    std::copy(vals, vals + 4, out);
}

void check_order(int deriv_order) {
    if (deriv_order < 0 || deriv_order > 2)
        throw std::invalid_argument("deriv_order must be 0, 1 or 2");
}

}  // namespace

Eigen::VectorXd basis_values(double t, const KnotVector& kv, int deriv_order) {
    check_order(deriv_order);
    const int s = kv.segment_of(t);
    double active[4];
    active_basis(kv, t, s, deriv_order, active);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(kv.basis_count());
    for (int j = 0; j < 4; ++j) out[s - 3 + j] = active[j];
    return out;
}

BasisMatrix basis_matrix(const std::vector<double>& times, const KnotVector& kv,
                         int deriv_order) {
    check_order(deriv_order);
    BasisMatrix bm;
    bm.deriv_order = deriv_order;
    bm.times = times;
    bm.entries.resize(static_cast<Eigen::Index>(times.size()), kv.basis_count());

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(times.size() * 4);
    for (std::size_t i = 0; i < times.size(); ++i) {
        int s;
        try {
            s = kv.segment_of(times[i]);
        } catch (const std::domain_error&) {
            throw std::domain_error("basis_matrix: time at index " + std::to_string(i) +
                                    " (" + std::to_string(times[i]) + ") outside [0, " +
                                    std::to_string(kv.duration()) + "]");
        }
        double active[4];
        active_basis(kv, times[i], s, deriv_order, active);
        for (int j = 0; j < 4; ++j)
            triplets.emplace_back(static_cast<int>(i), s - 3 + j, active[j]);
    }
    bm.entries.setFromTriplets(triplets.begin(), triplets.end());
    return bm;
}

Eigen::MatrixXd eval_state(const BasisMatrix& N, const ControlPoints& P) {
    if (N.cols() != P.rows())
        throw std::invalid_argument("eval_state: basis has " + std::to_string(N.cols()) +
                                    " columns but control points have " +
                                    std::to_string(P.rows()) + " rows");
    return N.entries * P;
}

int default_segments(int n_samples) {
    const int r = (n_samples + 3) / 4;
    return std::clamp(r, 8, 2 * n_samples);
}

}  // namespace splident
