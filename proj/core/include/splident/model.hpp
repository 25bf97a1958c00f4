#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "splident/library.hpp"

namespace splident {

/// A library state channel expressed as a spline read: the deriv_order-th
/// derivative of measured signal #spline.
struct ChannelRef {
    int spline = 0;
    int order = 0;

    friend bool operator==(const ChannelRef&, const ChannelRef&) = default;
};

/// How library channels and discovered equations map onto the measured
/// signals. First-order systems fit one spline per state and discover
/// every first derivative; second-order systems fit splines to positions
/// only, expose velocities as spline derivatives, and discover the
/// acceleration channels.
struct ProblemLayout {
    int n_splines = 0;
    std::vector<ChannelRef> channels;   // library state channels
    std::vector<ChannelRef> equations;  // discovered equation targets

    static ProblemLayout first_order(int n_states);
    static ProblemLayout second_order(int n_measured);

    int n_channels() const { return static_cast<int>(channels.size()); }
    int n_equations() const { return static_cast<int>(equations.size()); }
    bool is_second_order() const;

    /// Channel index whose time derivative equation e discovers, i.e. the
    /// channel (spline, order-1) for equation (spline, order).
    int equation_channel(int e) const;
    /// Channel index holding the derivative of channel q, or -1 if the
    /// derivative is not itself a channel.
    int derivative_channel(int q) const;
};

/// Dense coefficient matrix (one column per discovered equation) plus the
/// boolean support mask that carries the equation structure.
struct CoefficientMatrix {
    Eigen::MatrixXd values;                              // l x n_eq
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> support;  // l x n_eq

    static CoefficientMatrix dense(int l, int n_eq);
    static CoefficientMatrix from_values(const Eigen::MatrixXd& values);

    void mask_values();  // zero entries outside the support
    int l0_count() const;
    std::vector<int> support_sizes() const;  // per equation
};

struct Provenance {
    std::string config_hash;
    std::uint64_t seed = 0;
    int ado_iterations = 0;
    double best_loss = 0.0;
};

/// Final discovery artifact: the library, the channel layout, and the
/// pruned coefficients. Renderable as text and integrable as an ODE.
struct DiscoveredModel {
    CandidateLibrary lib;
    ProblemLayout layout;
    CoefficientMatrix coeffs;
    Provenance provenance;

    std::string equation_lhs(int e) const;  // e.g. "dx/dt", "dw1/dt"
};

/// One line per equation, terms in library order, zero terms omitted.
/// Precision affects display only.
std::string render_equations(const DiscoveredModel& model, int precision = 3);

struct TermScore {
    int term = 0;
    std::string label;
    double found = 0.0;
    double reference = 0.0;
    double rel_error = 0.0;  // |found - ref| / |ref| on reference terms
};

struct EquationScore {
    std::vector<TermScore> reference_terms;
    std::vector<TermScore> false_positives;
    bool all_targets_found = false;
};

struct ScoreResult {
    std::vector<EquationScore> equations;
    int false_positives = 0;
    int false_negatives = 0;
    bool exact_support = false;
    double max_rel_error = 0.0;  // over found reference terms
};

/// Compare a discovered coefficient matrix against a reference one of the
/// same library/column order; the reference support is its nonzero set.
ScoreResult score_against_reference(const DiscoveredModel& model,
                                    const Eigen::MatrixXd& reference);

/// Serialization (human-readable JSON). Round-trips labels, layout,
/// coefficients, support and provenance.
void save_model(const DiscoveredModel& model, const std::string& path);
DiscoveredModel load_model(const std::string& path);
std::string model_to_json(const DiscoveredModel& model);
DiscoveredModel model_from_json(const std::string& text);

}  // namespace splident
