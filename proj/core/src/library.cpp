#include "splident/library.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace splident {

bool TermSpec::depends_on_derivatives() const {
    for (const auto& f : factors) {
        if (f.kind == Factor::Kind::DerivRead) return true;
        if (f.kind == Factor::Kind::Sign && f.of_derivative) return true;
    }
    return false;
}

bool TermSpec::depends_on_inputs() const {
    for (const auto& f : factors)
        if (f.kind == Factor::Kind::Input) return true;
    return false;
}

bool CandidateLibrary::uses_derivatives() const {
    return std::any_of(terms.begin(), terms.end(),
                       [](const TermSpec& t) { return t.depends_on_derivatives(); });
}

bool CandidateLibrary::uses_inputs() const {
    return std::any_of(terms.begin(), terms.end(),
                       [](const TermSpec& t) { return t.depends_on_inputs(); });
}

std::vector<std::string> CandidateLibrary::labels() const {
    std::vector<std::string> out;
    out.reserve(terms.size());
    for (const auto& t : terms) out.push_back(t.label);
    return out;
}

int CandidateLibrary::index_of(const std::string& label) const {
    for (std::size_t j = 0; j < terms.size(); ++j)
        if (terms[j].label == label) return static_cast<int>(j);
    return -1;
}

namespace detail {

namespace {

std::string linear_combo_label(const std::vector<int>& coeffs,
                               const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t q = 0; q < coeffs.size(); ++q) {
        const int c = coeffs[q];
        if (c == 0) continue;
        if (out.empty()) {
            if (c == -1)
                out += "-";
            else if (c != 1)
                out += std::to_string(c) + "*";
        } else {
            out += (c > 0) ? "+" : "-";
            if (std::abs(c) != 1) out += std::to_string(std::abs(c)) + "*";
        }
        out += names[q];
    }
    return out.empty() ? "0" : out;
}

int factor_rank(Factor::Kind k) {
    switch (k) {
        case Factor::Kind::DerivRead: return 0;
        case Factor::Kind::Trig: return 1;
        case Factor::Kind::Monomial: return 2;
        case Factor::Kind::Sign: return 3;
        case Factor::Kind::Input: return 4;
    }
    return 5;
}

bool monomial_is_constant(const Factor& f) {
    return std::all_of(f.powers.begin(), f.powers.end(), [](int p) { return p == 0; });
}

}  // namespace

std::string term_label(const TermSpec& term, const std::vector<std::string>& state_names,
                       const std::vector<std::string>& input_names) {
    std::vector<std::string> parts;
    for (const auto& f : term.factors) {
        switch (f.kind) {
            case Factor::Kind::Monomial: {
                if (monomial_is_constant(f)) {
                    if (term.factors.size() == 1) parts.push_back("1");
                    break;  // constant factor is invisible inside a product
                }
                std::string m;
                for (std::size_t q = 0; q < f.powers.size(); ++q) {
                    if (f.powers[q] == 0) continue;
                    if (!m.empty()) m += "*";
                    m += state_names[q];
                    if (f.powers[q] > 1) m += "^" + std::to_string(f.powers[q]);
                }
                parts.push_back(m);
                break;
            }
            case Factor::Kind::Trig:
                parts.push_back(std::string(f.sine ? "sin(" : "cos(") +
                                linear_combo_label(f.trig_coeffs, state_names) + ")");
                break;
            case Factor::Kind::Sign:
                parts.push_back("sign(" +
                                (f.of_derivative
                                     ? "d(" + state_names[static_cast<std::size_t>(f.index)] + ")"
                                     : state_names[static_cast<std::size_t>(f.index)]) +
                                ")");
                break;
            case Factor::Kind::DerivRead:
                parts.push_back("d(" + state_names[static_cast<std::size_t>(f.index)] + ")");
                break;
            case Factor::Kind::Input:
                parts.push_back(input_names[static_cast<std::size_t>(f.index)]);
                break;
        }
    }
    if (parts.empty()) return "1";
    std::string out = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) out += "*" + parts[i];
    return out;
}

void canonicalize(TermSpec& term, int n_states) {
    // merge all monomial factors into one, padded to n_states
    Factor merged;
    merged.kind = Factor::Kind::Monomial;
    merged.powers.assign(static_cast<std::size_t>(n_states), 0);
    bool saw_monomial = false;
    std::vector<Factor> rest;
    for (auto& f : term.factors) {
        if (f.kind == Factor::Kind::Monomial) {
            saw_monomial = true;
            for (std::size_t q = 0; q < f.powers.size(); ++q)
                merged.powers[q] += f.powers[q];
        } else {
            if (f.kind == Factor::Kind::Trig)
                f.trig_coeffs.resize(static_cast<std::size_t>(n_states), 0);
            rest.push_back(f);
        }
    }
    if (saw_monomial && (rest.empty() || !monomial_is_constant(merged)))
        rest.push_back(merged);
    std::stable_sort(rest.begin(), rest.end(), [](const Factor& a, const Factor& b) {
        return factor_rank(a.kind) < factor_rank(b.kind);
    });
    if (rest.empty()) {  // pure constant
        rest.push_back(merged);
    }
    term.factors = std::move(rest);
}

}  // namespace detail

namespace {

void enumerate_monomials(int n, int degree_left, int q, std::vector<int>& powers,
                         std::vector<std::vector<int>>& out) {
    if (q == n - 1) {
        powers[static_cast<std::size_t>(q)] = degree_left;
        out.push_back(powers);
        return;
    }
    for (int a = degree_left; a >= 0; --a) {
        powers[static_cast<std::size_t>(q)] = a;
        enumerate_monomials(n, degree_left - a, q + 1, powers, out);
    }
}

TermSpec make_term(std::vector<Factor> factors, const std::vector<std::string>& state_names,
                   const std::vector<std::string>& input_names) {
    TermSpec t;
    t.factors = std::move(factors);
    detail::canonicalize(t, static_cast<int>(state_names.size()));
    t.label = detail::term_label(t, state_names, input_names);
    return t;
}

}  // namespace

CandidateLibrary polynomial_library(int n_states, int max_degree,
                                    std::vector<std::string> state_names) {
    if (n_states < 1) throw std::invalid_argument("polynomial_library: n_states must be >= 1");
    if (max_degree < 0) throw std::invalid_argument("polynomial_library: max_degree must be >= 0");

    CandidateLibrary lib;
    if (state_names.empty()) {
        static const char* xyz[] = {"x", "y", "z"};
        for (int q = 0; q < n_states; ++q)
            lib.state_names.push_back(n_states <= 3 ? xyz[q] : "x" + std::to_string(q + 1));
    } else {
        if (static_cast<int>(state_names.size()) != n_states)
            throw std::invalid_argument("polynomial_library: state_names size mismatch");
        lib.state_names = std::move(state_names);
    }

    for (int d = 0; d <= max_degree; ++d) {
        std::vector<std::vector<int>> powers_list;
        std::vector<int> powers(static_cast<std::size_t>(n_states), 0);
        enumerate_monomials(n_states, d, 0, powers, powers_list);
        for (auto& p : powers_list) {
            Factor f;
            f.kind = Factor::Kind::Monomial;
            f.powers = std::move(p);
            lib.terms.push_back(make_term({f}, lib.state_names, lib.input_names));
        }
    }
    return lib;
}

CandidateLibrary double_pendulum_library() {
    CandidateLibrary lib;
    lib.state_names = {"th1", "th2", "w1", "w2"};

    auto trig = [](bool sine, std::vector<int> coeffs) {
        Factor f;
        f.kind = Factor::Kind::Trig;
        f.sine = sine;
        f.trig_coeffs = std::move(coeffs);
        return f;
    };
    auto mono = [](std::vector<int> powers) {
        Factor f;
        f.kind = Factor::Kind::Monomial;
        f.powers = std::move(powers);
        return f;
    };

    const std::vector<Factor> trigs = {
        trig(true, {1, 0, 0, 0}),    // sin(th1)
        trig(true, {0, 1, 0, 0}),    // sin(th2)
        trig(true, {1, -1, 0, 0}),   // sin(th1-th2)
    };
    const std::vector<Factor> omegas = {
        mono({0, 0, 0, 0}), mono({0, 0, 1, 0}), mono({0, 0, 0, 1}),
        mono({0, 0, 2, 0}), mono({0, 0, 0, 2}), mono({0, 0, 1, 1}),
    };
    for (const auto& tf : trigs)
        for (const auto& mf : omegas)
            lib.terms.push_back(make_term({tf, mf}, lib.state_names, lib.input_names));

    for (int w = 2; w <= 3; ++w) {  // d(w1)*cos(th1-th2), d(w2)*cos(th1-th2)
        Factor dr;
        dr.kind = Factor::Kind::DerivRead;
        dr.index = w;
        lib.terms.push_back(
            make_term({dr, trig(false, {1, -1, 0, 0})}, lib.state_names, lib.input_names));
    }
    return lib;
}

CandidateLibrary emps_library() {
    CandidateLibrary lib;
    lib.state_names = {"q", "p"};
    lib.input_names = {"tau"};

    auto mono = [&](std::vector<int> powers) {
        Factor f;
        f.kind = Factor::Kind::Monomial;
        f.powers = std::move(powers);
        return make_term({f}, lib.state_names, lib.input_names);
    };
    lib.terms.push_back(mono({1, 0}));  // q
    lib.terms.push_back(mono({2, 0}));  // q^2
    lib.terms.push_back(mono({0, 1}));  // p
    lib.terms.push_back(mono({0, 2}));  // p^2
    Factor sg;
    sg.kind = Factor::Kind::Sign;
    sg.index = 1;
    lib.terms.push_back(make_term({sg}, lib.state_names, lib.input_names));  // sign(p)
    Factor in;
    in.kind = Factor::Kind::Input;
    in.index = 0;
    lib.terms.push_back(make_term({in}, lib.state_names, lib.input_names));  // tau
    lib.terms.push_back(mono({0, 0}));  // 1
    return lib;
}

namespace {

double sign0(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Value of one factor at one row.
double factor_value(const Factor& f, const Eigen::MatrixXd& Y, const Eigen::MatrixXd* dY,
                    const Eigen::MatrixXd* U, Eigen::Index c) {
    switch (f.kind) {
        case Factor::Kind::Monomial: {
            double v = 1.0;
            for (std::size_t q = 0; q < f.powers.size(); ++q)
                for (int k = 0; k < f.powers[q]; ++k) v *= Y(c, static_cast<Eigen::Index>(q));
            return v;
        }
        case Factor::Kind::Trig: {
            double arg = 0.0;
            for (std::size_t q = 0; q < f.trig_coeffs.size(); ++q)
                if (f.trig_coeffs[q] != 0)
                    arg += f.trig_coeffs[q] * Y(c, static_cast<Eigen::Index>(q));
            return f.sine ? std::sin(arg) : std::cos(arg);
        }
        case Factor::Kind::Sign:
            return sign0(f.of_derivative ? (*dY)(c, f.index) : Y(c, f.index));
        case Factor::Kind::DerivRead:
            return (*dY)(c, f.index);
        case Factor::Kind::Input:
            return (*U)(c, f.index);
    }
    return 0.0;
}

// d factor / d y_q (state channel) at one row; zero for Sign/DerivRead/Input.
double factor_dstate(const Factor& f, const Eigen::MatrixXd& Y, Eigen::Index c, int q) {
    switch (f.kind) {
        case Factor::Kind::Monomial: {
            const int a = f.powers[static_cast<std::size_t>(q)];
            if (a == 0) return 0.0;
            double v = static_cast<double>(a);
            for (int k = 0; k < a - 1; ++k) v *= Y(c, q);
            for (std::size_t p = 0; p < f.powers.size(); ++p) {
                if (static_cast<int>(p) == q) continue;
                for (int k = 0; k < f.powers[p]; ++k) v *= Y(c, static_cast<Eigen::Index>(p));
            }
            return v;
        }
        case Factor::Kind::Trig: {
            const int cq = f.trig_coeffs[static_cast<std::size_t>(q)];
            if (cq == 0) return 0.0;
            double arg = 0.0;
            for (std::size_t p = 0; p < f.trig_coeffs.size(); ++p)
                if (f.trig_coeffs[p] != 0)
                    arg += f.trig_coeffs[p] * Y(c, static_cast<Eigen::Index>(p));
            return f.sine ? cq * std::cos(arg) : -cq * std::sin(arg);
        }
        default:
            return 0.0;
    }
}

void check_requirements(const CandidateLibrary& lib, const Eigen::MatrixXd& states,
                        const Eigen::MatrixXd* state_derivs, const Eigen::MatrixXd* inputs) {
    if (states.cols() != lib.n_states())
        throw std::invalid_argument("library: states matrix has " +
                                    std::to_string(states.cols()) + " columns, expected " +
                                    std::to_string(lib.n_states()));
    if (lib.uses_derivatives()) {
        if (state_derivs == nullptr)
            throw std::invalid_argument(
                "library: state derivatives required by derivative-dependent terms");
        if (state_derivs->rows() != states.rows() || state_derivs->cols() != states.cols())
            throw std::invalid_argument("library: state_derivs shape mismatch");
    }
    if (lib.uses_inputs()) {
        if (inputs == nullptr)
            throw std::invalid_argument("library: input signals required by input terms");
        if (inputs->rows() != states.rows() || inputs->cols() != lib.n_inputs())
            throw std::invalid_argument("library: inputs shape mismatch");
    }
}

}  // namespace

Eigen::MatrixXd evaluate(const CandidateLibrary& lib, const Eigen::MatrixXd& states,
                         const Eigen::MatrixXd* state_derivs, const Eigen::MatrixXd* inputs) {
    check_requirements(lib, states, state_derivs, inputs);
    const Eigen::Index N = states.rows();
    Eigen::MatrixXd Phi(N, lib.size());
    for (int j = 0; j < lib.size(); ++j) {
        const TermSpec& term = lib.terms[static_cast<std::size_t>(j)];
        for (Eigen::Index c = 0; c < N; ++c) {
            double v = 1.0;
            for (const auto& f : term.factors) v *= factor_value(f, states, state_derivs, inputs, c);
            Phi(c, j) = v;
        }
    }
    return Phi;
}

void partials_into(const CandidateLibrary& lib, const Eigen::MatrixXd& states,
                   const Eigen::MatrixXd* state_derivs, const Eigen::MatrixXd* inputs,
                   LibraryJacobian& jac) {
    check_requirements(lib, states, state_derivs, inputs);
    const Eigen::Index N = states.rows();
    const int n = lib.n_states();
    const int l = lib.size();

    jac.wrt_state.resize(static_cast<std::size_t>(n));
    jac.wrt_deriv.resize(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
        jac.wrt_state[static_cast<std::size_t>(q)].setZero(N, l);
        jac.wrt_deriv[static_cast<std::size_t>(q)].setZero(N, l);
    }

    std::vector<double> fval;
    for (int j = 0; j < l; ++j) {
        const TermSpec& term = lib.terms[static_cast<std::size_t>(j)];
        const std::size_t nf = term.factors.size();
        fval.resize(nf);
        for (Eigen::Index c = 0; c < N; ++c) {
            for (std::size_t k = 0; k < nf; ++k)
                fval[k] = factor_value(term.factors[k], states, state_derivs, inputs, c);
            // product rule: contribution of factor k carries prod of the others
            for (std::size_t k = 0; k < nf; ++k) {
                const Factor& f = term.factors[k];
                if (f.kind != Factor::Kind::Monomial && f.kind != Factor::Kind::Trig &&
                    f.kind != Factor::Kind::DerivRead)
                    continue;  // Sign and Input have zero partials
                double others = 1.0;
                for (std::size_t m = 0; m < nf; ++m)
                    if (m != k) others *= fval[m];
                if (others == 0.0) continue;
                if (f.kind == Factor::Kind::DerivRead) {
                    jac.wrt_deriv[static_cast<std::size_t>(f.index)](c, j) += others;
                } else {
                    for (int q = 0; q < n; ++q) {
                        const double d = factor_dstate(f, states, c, q);
                        if (d != 0.0) jac.wrt_state[static_cast<std::size_t>(q)](c, j) += d * others;
                    }
                }
            }
        }
    }
}

LibraryJacobian partials(const CandidateLibrary& lib, const Eigen::MatrixXd& states,
                         const Eigen::MatrixXd* state_derivs, const Eigen::MatrixXd* inputs) {
    LibraryJacobian jac;
    partials_into(lib, states, state_derivs, inputs, jac);
    return jac;
}

}  // namespace splident
