#include "splident/library.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>
#include <string>

namespace splident {

namespace {

struct Token {
    enum class Type { Ident, Int, Symbol, End };
    Type type = Type::End;
    std::string text;
    long value = 0;
    char symbol = 0;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            bump();
        tok_ = Token{};
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= text_.size()) {
            tok_.type = Token::Type::End;
            return;
        }
        const char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            tok_.type = Token::Type::Ident;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                tok_.text += text_[pos_];
                bump();
            }
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            tok_.type = Token::Type::Int;
            std::string num;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                num += text_[pos_];
                bump();
            }
            tok_.value = std::stol(num);
            tok_.text = num;
            return;
        }
        tok_.type = Token::Type::Symbol;
        tok_.symbol = c;
        tok_.text = std::string(1, c);
        bump();
    }

    void bump() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

[[noreturn]] void fail(const Token& tok, const std::string& what) {
    throw std::invalid_argument("library spec error at line " + std::to_string(tok.line) +
                                ", column " + std::to_string(tok.col) + ": " + what);
}

class Parser {
public:
    Parser(const std::string& text, std::vector<std::string> state_names,
           std::vector<std::string> input_names)
        : lex_(text),
          state_names_(std::move(state_names)),
          input_names_(std::move(input_names)),
          infer_states_(state_names_.empty()) {}

    CandidateLibrary run() {
        parse_statements();
        CandidateLibrary lib;
        lib.state_names = state_names_;
        lib.input_names = input_names_;
        std::set<std::string> seen;
        for (auto& t : pending_) {
            detail::canonicalize(t, lib.n_states());
            t.label = detail::term_label(t, lib.state_names, lib.input_names);
            if (!seen.insert(t.label).second)
                throw std::invalid_argument("library spec error: duplicate term '" + t.label + "'");
            lib.terms.push_back(std::move(t));
        }
        if (lib.terms.empty())
            throw std::invalid_argument("library spec error: empty library");
        return lib;
    }

private:
    void parse_statements() {
        bool expect_statement = true;
        while (lex_.peek().type != Token::Type::End) {
            if (is_symbol(';')) {
                lex_.take();
                expect_statement = true;
                continue;
            }
            if (!expect_statement) fail(lex_.peek(), "expected ';' between terms");
            parse_statement();
            expect_statement = false;
        }
    }

    void parse_statement() {
        const Token& t = lex_.peek();
        if (t.type == Token::Type::Ident) {
            if (t.text == "poly") return expand_poly();
            if (t.text == "double_pendulum") return expand_builtin(double_pendulum_library());
            if (t.text == "emps") return expand_builtin(emps_library());
        }
        pending_.push_back(parse_term());
    }

    TermSpec parse_term() {
        TermSpec term;
        term.factors.push_back(parse_factor());
        while (is_symbol('*')) {
            lex_.take();
            term.factors.push_back(parse_factor());
        }
        return term;
    }

    Factor parse_factor() {
        Token t = lex_.take();
        if (t.type == Token::Type::Int) {
            if (t.value != 1) fail(t, "only the unit constant '1' is a valid literal");
            Factor f;
            f.kind = Factor::Kind::Monomial;
            return f;
        }
        if (t.type != Token::Type::Ident) fail(t, "expected a term atom, got '" + t.text + "'");

        if ((t.text == "sin" || t.text == "cos") && is_symbol('(')) {
            Factor f;
            f.kind = Factor::Kind::Trig;
            f.sine = (t.text == "sin");
            expect('(');
            f.trig_coeffs = parse_linear_combo();
            expect(')');
            return f;
        }
        if (t.text == "sign" && is_symbol('(')) {
            expect('(');
            Factor f;
            f.kind = Factor::Kind::Sign;
            Token arg = lex_.take();
            if (arg.type != Token::Type::Ident) fail(arg, "sign() expects a state name");
            if ((arg.text == "d" || arg.text == "dstate") && is_symbol('(')) {
                expect('(');
                f.index = (arg.text == "d") ? state_index(lex_.take())
                                            : channel_from_int(lex_.take());
                f.of_derivative = true;
                expect(')');
            } else {
                f.index = state_index(arg);
            }
            expect(')');
            return f;
        }
        if (t.text == "d" && is_symbol('(')) {
            expect('(');
            Factor f;
            f.kind = Factor::Kind::DerivRead;
            f.index = state_index(lex_.take());
            expect(')');
            return f;
        }
        if (t.text == "dstate" && is_symbol('(')) {
            expect('(');
            Factor f;
            f.kind = Factor::Kind::DerivRead;
            f.index = channel_from_int(lex_.take());
            expect(')');
            return f;
        }
        if (t.text == "input" && is_symbol('(')) {
            expect('(');
            Token name = lex_.take();
            if (name.type != Token::Type::Ident) fail(name, "input() expects a signal name");
            expect(')');
            Factor f;
            f.kind = Factor::Kind::Input;
            f.index = input_index(name);
            return f;
        }

        // bare name: state (or previously declared input), optional ^power
        auto it = std::find(input_names_.begin(), input_names_.end(), t.text);
        if (it != input_names_.end() &&
            std::find(state_names_.begin(), state_names_.end(), t.text) == state_names_.end()) {
            Factor f;
            f.kind = Factor::Kind::Input;
            f.index = static_cast<int>(it - input_names_.begin());
            return f;
        }
        const int q = state_index(t);
        int power = 1;
        if (is_symbol('^')) {
            lex_.take();
            Token p = lex_.take();
            if (p.type != Token::Type::Int || p.value < 0) fail(p, "expected a non-negative power");
            power = static_cast<int>(p.value);
        }
        Factor f;
        f.kind = Factor::Kind::Monomial;
        f.powers.assign(static_cast<std::size_t>(q) + 1, 0);
        f.powers[static_cast<std::size_t>(q)] = power;
        return f;
    }

    // integer linear combination of state names: [-][k*]name ((+|-) [k*]name)*
    std::vector<int> parse_linear_combo() {
        std::vector<int> coeffs(state_names_.size(), 0);
        bool first = true;
        while (true) {
            int sgn = 1;
            if (is_symbol('-')) {
                lex_.take();
                sgn = -1;
            } else if (is_symbol('+')) {
                if (first) fail(lex_.peek(), "unexpected '+'");
                lex_.take();
            } else if (!first) {
                break;
            }
            int mag = 1;
            if (lex_.peek().type == Token::Type::Int) {
                mag = static_cast<int>(lex_.take().value);
                expect('*');
            }
            const int q = state_index(lex_.take());
            if (static_cast<std::size_t>(q) >= coeffs.size())
                coeffs.resize(static_cast<std::size_t>(q) + 1, 0);
            coeffs[static_cast<std::size_t>(q)] += sgn * mag;
            first = false;
            if (!is_symbol('+') && !is_symbol('-')) break;
        }
        return coeffs;
    }

    void expand_poly() {
        Token kw = lex_.take();
        expect('(');
        Token n_tok = lex_.take();
        if (n_tok.type != Token::Type::Int || n_tok.value < 1)
            fail(n_tok, "poly() expects a positive state count");
        const int n = static_cast<int>(n_tok.value);
        expect(',');
        Token deg_kw = lex_.take();
        if (deg_kw.type != Token::Type::Ident || deg_kw.text != "deg")
            fail(deg_kw, "poly() expects 'deg=<int>' as second argument");
        expect('=');
        Token d_tok = lex_.take();
        if (d_tok.type != Token::Type::Int || d_tok.value < 0)
            fail(d_tok, "poly() degree must be a non-negative integer");
        expect(')');

        CandidateLibrary sub;
        if (static_cast<int>(state_names_.size()) == n) {
            sub = polynomial_library(n, static_cast<int>(d_tok.value), state_names_);
        } else if (infer_states_ && state_names_.empty()) {
            sub = polynomial_library(n, static_cast<int>(d_tok.value));
            state_names_ = sub.state_names;
        } else {
            fail(kw, "poly(" + std::to_string(n) + ", ...) does not match the " +
                         std::to_string(state_names_.size()) + " known state names");
        }
        for (auto& t : sub.terms) pending_.push_back(std::move(t));
    }

    void expand_builtin(CandidateLibrary sub) {
        Token kw = lex_.take();
        expect('(');
        expect(')');
        if (!state_names_.empty() && state_names_ != sub.state_names)
            fail(kw, "builtin library '" + kw.text + "' expects states " +
                         join(sub.state_names));
        state_names_ = sub.state_names;
        for (const auto& nm : sub.input_names)
            if (std::find(input_names_.begin(), input_names_.end(), nm) == input_names_.end())
                input_names_.push_back(nm);
        for (auto& t : sub.terms) pending_.push_back(std::move(t));
    }

    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
        return out;
    }

    int input_index(const Token& name) {
        auto it = std::find(input_names_.begin(), input_names_.end(), name.text);
        if (it != input_names_.end()) return static_cast<int>(it - input_names_.begin());
        if (std::find(state_names_.begin(), state_names_.end(), name.text) != state_names_.end())
            fail(name, "'" + name.text + "' is a state name, not an input");
        input_names_.push_back(name.text);
        return static_cast<int>(input_names_.size()) - 1;
    }

    int state_index(const Token& name) {
        if (name.type != Token::Type::Ident) fail(name, "expected a state name");
        auto it = std::find(state_names_.begin(), state_names_.end(), name.text);
        if (it != state_names_.end()) return static_cast<int>(it - state_names_.begin());
        if (!infer_states_)
            fail(name, "unknown state name '" + name.text + "'");
        state_names_.push_back(name.text);
        return static_cast<int>(state_names_.size()) - 1;
    }

    int channel_from_int(const Token& tok) {
        if (tok.type != Token::Type::Int) fail(tok, "dstate() expects a channel index");
        const int q = static_cast<int>(tok.value);
        if (!infer_states_ && q >= static_cast<int>(state_names_.size()))
            fail(tok, "dstate(" + std::to_string(q) + ") out of range");
        while (infer_states_ && q >= static_cast<int>(state_names_.size()))
            state_names_.push_back("x" + std::to_string(state_names_.size() + 1));
        return q;
    }

    bool is_symbol(char c) const {
        return lex_.peek().type == Token::Type::Symbol && lex_.peek().symbol == c;
    }

    void expect(char c) {
        Token t = lex_.take();
        if (t.type != Token::Type::Symbol || t.symbol != c)
            fail(t, std::string("expected '") + c + "'");
    }

    Lexer lex_;
    std::vector<std::string> state_names_;
    std::vector<std::string> input_names_;
    bool infer_states_;
    std::vector<TermSpec> pending_;
};

// Re-parseable text for one term (labels, but with inputs spelled as
// input(name) so round-tripping never depends on name context).
std::string term_spec_text(const TermSpec& term, const CandidateLibrary& lib) {
    std::string out;
    for (const auto& f : term.factors) {
        std::string part;
        if (f.kind == Factor::Kind::Input) {
            part = "input(" + lib.input_names[static_cast<std::size_t>(f.index)] + ")";
        } else {
            TermSpec single;
            single.factors = {f};
            part = detail::term_label(single, lib.state_names, lib.input_names);
        }
        if (part == "1" && term.factors.size() > 1) continue;
        out += (out.empty() ? "" : "*") + part;
    }
    return out.empty() ? "1" : out;
}

}  // namespace

CandidateLibrary parse_library_spec(const std::string& text,
                                    std::vector<std::string> state_names,
                                    std::vector<std::string> input_names) {
    Parser parser(text, std::move(state_names), std::move(input_names));
    return parser.run();
}

std::string render_library_spec(const CandidateLibrary& lib) {
    std::string out;
    for (const auto& t : lib.terms) {
        if (!out.empty()) out += "; ";
        out += term_spec_text(t, lib);
    }
    return out;
}

}  // namespace splident
