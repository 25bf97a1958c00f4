#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace splident {

/// One multiplicative factor of a candidate term.
struct Factor {
    enum class Kind {
        Monomial,   // prod_q y_q^powers[q]
        Trig,       // sin or cos of an integer combination of states
        Sign,       // sign(y_index) or sign(ydot_index), with sign(0) = 0
        DerivRead,  // ydot_index, the raw state-derivative channel
        Input,      // known exogenous signal column
    };

    Kind kind = Kind::Monomial;
    std::vector<int> powers;       // Monomial: one exponent per state channel
    bool sine = true;              // Trig: sin if true, cos otherwise
    std::vector<int> trig_coeffs;  // Trig: integer weight per state channel
    int index = -1;                // Sign / DerivRead: channel; Input: input column
    bool of_derivative = false;    // Sign: argument is a state-derivative channel
};

/// A candidate function: a product of factors plus its canonical label.
struct TermSpec {
    std::vector<Factor> factors;
    std::string label;

    bool depends_on_derivatives() const;
    bool depends_on_inputs() const;
};

/// Ordered candidate-function library. Term order is part of the model
/// identity: it fixes the column order of the collocation matrix and the
/// meaning of every coefficient vector.
struct CandidateLibrary {
    std::vector<TermSpec> terms;
    std::vector<std::string> state_names;  // one per state channel
    std::vector<std::string> input_names;  // exogenous signals (may be empty)

    int size() const { return static_cast<int>(terms.size()); }
    int n_states() const { return static_cast<int>(state_names.size()); }
    int n_inputs() const { return static_cast<int>(input_names.size()); }
    bool uses_derivatives() const;
    bool uses_inputs() const;

    std::vector<std::string> labels() const;
    int index_of(const std::string& label) const;  // -1 if absent
};

/// Partial derivatives of every term with respect to every state channel
/// and every state-derivative channel; wrt_state[q](c, j) = d term_j / d y_q
/// at collocation row c.
struct LibraryJacobian {
    std::vector<Eigen::MatrixXd> wrt_state;
    std::vector<Eigen::MatrixXd> wrt_deriv;
};

/// All monomials in n_states variables of total degree <= max_degree,
/// graded-lexicographic order with the constant first.
CandidateLibrary polynomial_library(int n_states, int max_degree,
                                    std::vector<std::string> state_names = {});

/// The 20-term double-pendulum library over states (th1, th2, w1, w2):
/// {sin(th1), sin(th2), sin(th1-th2)} x {1, w1, w2, w1^2, w2^2, w1*w2}
/// plus the two derivative-weighted terms d(w1)*cos(th1-th2) and
/// d(w2)*cos(th1-th2).
CandidateLibrary double_pendulum_library();

/// The 7-term drive-train friction library over states (q, p) with input
/// tau: {q, q^2, p, p^2, sign(p), tau, 1}.
CandidateLibrary emps_library();

/// Collocation matrix Phi: column j is term j evaluated row-wise.
/// state_derivs must be provided iff the library reads derivative
/// channels, inputs iff it reads input channels (column q of state_derivs
/// is the time derivative of state channel q).
Eigen::MatrixXd evaluate(const CandidateLibrary& lib, const Eigen::MatrixXd& states,
                         const Eigen::MatrixXd* state_derivs = nullptr,
                         const Eigen::MatrixXd* inputs = nullptr);

/// Exact analytic partials of evaluate() with respect to each state and
/// state-derivative channel. Sign factors contribute zero everywhere
/// (subgradient 0 at the discontinuity).
LibraryJacobian partials(const CandidateLibrary& lib, const Eigen::MatrixXd& states,
                         const Eigen::MatrixXd* state_derivs = nullptr,
                         const Eigen::MatrixXd* inputs = nullptr);

/// In-place variant of partials() reusing preallocated buffers.
void partials_into(const CandidateLibrary& lib, const Eigen::MatrixXd& states,
                   const Eigen::MatrixXd* state_derivs, const Eigen::MatrixXd* inputs,
                   LibraryJacobian& jac);

/// Parse the library mini-grammar. Statements are ';'-separated; atoms are
/// `1`, state names, `^k`, `*`, `sin(...)`, `cos(...)`, `sign(...)`,
/// `d(name)` / `dstate(i)`, `input(name)`, and the macros
/// `poly(n, deg=d)`, `double_pendulum()`, `emps()`.
///
/// When state_names is empty, names are assigned channel indices in order
/// of first appearance. Throws std::invalid_argument with line/column on
/// syntax errors, duplicate labels, or an empty library.
CandidateLibrary parse_library_spec(const std::string& text,
                                    std::vector<std::string> state_names = {},
                                    std::vector<std::string> input_names = {});

/// Canonical grammar text for a library; parse_library_spec() of the
/// result reproduces the same labels in the same order.
std::string render_library_spec(const CandidateLibrary& lib);

namespace detail {
/// Canonical label for a term over the given names (factors are expected
/// in canonical order: DerivRead, Trig, Monomial, Sign, Input).
std::string term_label(const TermSpec& term, const std::vector<std::string>& state_names,
                       const std::vector<std::string>& input_names);
/// Sort factors into canonical order and merge monomial factors.
void canonicalize(TermSpec& term, int n_states);
}  // namespace detail

}  // namespace splident
