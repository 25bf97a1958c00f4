#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <splident/library.hpp>

#include <cmath>
#include <random>

using namespace splident;

TEST_CASE("polynomial library enumeration") {
    SUBCASE("3 states, degree 3 has 20 terms") {
        auto lib = polynomial_library(3, 3);
        CHECK(lib.size() == 20);
        CHECK(lib.terms[0].label == "1");
        CHECK(lib.terms[1].label == "x");
        CHECK(lib.terms[4].label == "x^2");
        CHECK(lib.terms[5].label == "x*y");
        CHECK(lib.terms[19].label == "z^3");
        CHECK_FALSE(lib.uses_derivatives());
    }
    SUBCASE("1 state, degree 0 is just the constant") {
        auto lib = polynomial_library(1, 0);
        CHECK(lib.size() == 1);
        CHECK(lib.terms[0].label == "1");
    }
    SUBCASE("2 states, degree 2: {1, x, y, x^2, x*y, y^2}") {
        auto lib = polynomial_library(2, 2);
        REQUIRE(lib.size() == 6);
        const char* expected[] = {"1", "x", "y", "x^2", "x*y", "y^2"};
        for (int j = 0; j < 6; ++j) CHECK(lib.terms[j].label == expected[j]);
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(polynomial_library(0, 2), std::invalid_argument);
        CHECK_THROWS_AS(polynomial_library(2, -1), std::invalid_argument);
    }
}

TEST_CASE("double pendulum library") {
    auto lib = double_pendulum_library();
    CHECK(lib.size() == 20);
    CHECK(lib.index_of("sin(th1-th2)*w2^2") >= 0);
    CHECK(lib.uses_derivatives());
    int deriv_terms = 0;
    for (const auto& t : lib.terms)
        if (t.depends_on_derivatives()) ++deriv_terms;
    CHECK(deriv_terms == 2);
    CHECK(lib.index_of("d(w1)*cos(th1-th2)") == 18);
    CHECK(lib.index_of("d(w2)*cos(th1-th2)") == 19);

    SUBCASE("evaluation at theta=0, omega=0 with wdot=(5,7)") {
        Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(1, 4);
        Eigen::MatrixXd dY = Eigen::MatrixXd::Zero(1, 4);
        dY(0, 2) = 5.0;
        dY(0, 3) = 7.0;
        Eigen::MatrixXd Phi = evaluate(lib, Y, &dY);
        for (int j = 0; j < 18; ++j) CHECK(Phi(0, j) == 0.0);
        CHECK(Phi(0, 18) == doctest::Approx(5.0));
        CHECK(Phi(0, 19) == doctest::Approx(7.0));
    }
}

TEST_CASE("emps library") {
    auto lib = emps_library();
    REQUIRE(lib.size() == 7);
    const char* expected[] = {"q", "q^2", "p", "p^2", "sign(p)", "tau", "1"};
    for (int j = 0; j < 7; ++j) CHECK(lib.terms[j].label == expected[j]);
    CHECK(lib.uses_inputs());
    CHECK_FALSE(lib.uses_derivatives());

    Eigen::MatrixXd Y(3, 2);
    Y << 0.5, 0.0, 1.0, -2.5, -1.0, 0.3;
    Eigen::MatrixXd U(3, 1);
    U << 10.0, -3.0, 0.25;
    Eigen::MatrixXd Phi = evaluate(lib, Y, nullptr, &U);

    SUBCASE("sign convention: sign(0) = 0, sign(-2.5) = -1") {
        CHECK(Phi(0, 4) == 0.0);
        CHECK(Phi(1, 4) == -1.0);
        CHECK(Phi(2, 4) == 1.0);
    }
    SUBCASE("input column passes through verbatim") {
        CHECK(Phi(0, 5) == 10.0);
        CHECK(Phi(1, 5) == -3.0);
        CHECK(Phi(2, 5) == 0.25);
    }
}

TEST_CASE("library evaluation") {
    SUBCASE("row (1,2,3) under poly degree 2") {
        auto lib = polynomial_library(3, 2);
        Eigen::MatrixXd Y(1, 3);
        Y << 1.0, 2.0, 3.0;
        Eigen::MatrixXd Phi = evaluate(lib, Y);
        const double expected[] = {1, 1, 2, 3, 1, 2, 3, 4, 6, 9};
        REQUIRE(Phi.cols() == 10);
        for (int j = 0; j < 10; ++j) CHECK(Phi(0, j) == doctest::Approx(expected[j]));
    }
    SUBCASE("zero state row gives (1, 0, ..., 0)") {
        auto lib = polynomial_library(3, 3);
        Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(1, 3);
        Eigen::MatrixXd Phi = evaluate(lib, Y);
        CHECK(Phi(0, 0) == 1.0);
        for (int j = 1; j < Phi.cols(); ++j) CHECK(Phi(0, j) == 0.0);
    }
    SUBCASE("missing derivatives rejected") {
        auto lib = double_pendulum_library();
        Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(2, 4);
        CHECK_THROWS_AS(evaluate(lib, Y), std::invalid_argument);
    }
    SUBCASE("missing inputs rejected") {
        auto lib = emps_library();
        Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(2, 2);
        CHECK_THROWS_AS(evaluate(lib, Y), std::invalid_argument);
    }
    SUBCASE("row permutation equivariance") {
        auto lib = polynomial_library(2, 3);
        std::mt19937_64 rng(5);
        std::normal_distribution<double> g;
        Eigen::MatrixXd Y(6, 2);
        for (int i = 0; i < Y.size(); ++i) Y.data()[i] = g(rng);
        Eigen::MatrixXd Phi = evaluate(lib, Y);
        Eigen::MatrixXd Yr = Y.colwise().reverse();
        Eigen::MatrixXd Phir = evaluate(lib, Yr);
        CHECK((Phir - Phi.colwise().reverse()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("library partials") {
    SUBCASE("term x*y at (2,5)") {
        auto lib = parse_library_spec("x*y");
        Eigen::MatrixXd Y(1, 2);
        Y << 2.0, 5.0;
        auto jac = partials(lib, Y);
        CHECK(jac.wrt_state[0](0, 0) == doctest::Approx(5.0));
        CHECK(jac.wrt_state[1](0, 0) == doctest::Approx(2.0));
    }
    SUBCASE("sin(th1-th2) at (pi/2, 0)") {
        auto lib = parse_library_spec("sin(th1-th2)");
        Eigen::MatrixXd Y(1, 2);
        Y << M_PI / 2.0, 0.0;
        auto jac = partials(lib, Y);
        CHECK(std::abs(jac.wrt_state[0](0, 0)) < 1e-12);
        CHECK(std::abs(jac.wrt_state[1](0, 0)) < 1e-12);
    }
    SUBCASE("sign partials are identically zero") {
        auto lib = emps_library();
        Eigen::MatrixXd Y(2, 2);
        Y << 1.0, 2.0, -0.5, -3.0;
        Eigen::MatrixXd U = Eigen::MatrixXd::Ones(2, 1);
        auto jac = partials(lib, Y, nullptr, &U);
        const int j_sign = lib.index_of("sign(p)");
        for (int q = 0; q < 2; ++q)
            for (int c = 0; c < 2; ++c) CHECK(jac.wrt_state[q](c, j_sign) == 0.0);
    }
    SUBCASE("finite-difference audit across term kinds") {
        auto dp = double_pendulum_library();
        std::mt19937_64 rng(17);
        std::normal_distribution<double> g;
        const double h = 1e-6;
        Eigen::MatrixXd Y(100, 4), dY(100, 4);
        for (int i = 0; i < Y.size(); ++i) Y.data()[i] = g(rng);
        for (int i = 0; i < dY.size(); ++i) dY.data()[i] = g(rng);
        auto jac = partials(dp, Y, &dY);
        for (int q = 0; q < 4; ++q) {
            Eigen::MatrixXd Yp = Y, Ym = Y, dYp = dY, dYm = dY;
            Yp.col(q).array() += h;
            Ym.col(q).array() -= h;
            dYp.col(q).array() += h;
            dYm.col(q).array() -= h;
            Eigen::MatrixXd fd_state =
                (evaluate(dp, Yp, &dY) - evaluate(dp, Ym, &dY)) / (2.0 * h);
            Eigen::MatrixXd fd_deriv =
                (evaluate(dp, Y, &dYp) - evaluate(dp, Y, &dYm)) / (2.0 * h);
            const double scale_s = std::max(1.0, fd_state.cwiseAbs().maxCoeff());
            const double scale_d = std::max(1.0, fd_deriv.cwiseAbs().maxCoeff());
            CHECK((jac.wrt_state[q] - fd_state).cwiseAbs().maxCoeff() / scale_s < 1e-6);
            CHECK((jac.wrt_deriv[q] - fd_deriv).cwiseAbs().maxCoeff() / scale_d < 1e-6);
        }
    }
}

TEST_CASE("library grammar") {
    SUBCASE("poly macro reproduces the 20-term cubic library") {
        auto parsed = parse_library_spec("poly(3, deg=3)");
        auto built = polynomial_library(3, 3);
        REQUIRE(parsed.size() == built.size());
        for (int j = 0; j < parsed.size(); ++j)
            CHECK(parsed.terms[j].label == built.terms[j].label);
    }
    SUBCASE("explicit EMPS spelling") {
        auto lib = parse_library_spec("1; q; q^2; p; p^2; sign(p); input(tau)");
        REQUIRE(lib.size() == 7);
        CHECK(lib.terms[0].label == "1");
        CHECK(lib.terms[5].label == "sign(p)");
        CHECK(lib.terms[6].label == "tau");
        CHECK(lib.state_names == std::vector<std::string>{"q", "p"});
        CHECK(lib.input_names == std::vector<std::string>{"tau"});
    }
    SUBCASE("empty spec rejected") {
        CHECK_THROWS_AS(parse_library_spec(""), std::invalid_argument);
        CHECK_THROWS_AS(parse_library_spec(" ; "), std::invalid_argument);
    }
    SUBCASE("duplicate labels rejected") {
        CHECK_THROWS_AS(parse_library_spec("x; x"), std::invalid_argument);
        CHECK_THROWS_AS(parse_library_spec("x*x; x^2"), std::invalid_argument);
    }
    SUBCASE("syntax errors carry line and column") {
        try {
            parse_library_spec("x;\ny^");
            FAIL("expected parse error");
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
    SUBCASE("builtin macros") {
        CHECK(parse_library_spec("double_pendulum()").size() == 20);
        CHECK(parse_library_spec("emps()").size() == 7);
    }
    SUBCASE("round-trip preserves labels and order") {
        for (const auto* spec :
             {"poly(3, deg=3)", "double_pendulum()", "emps()",
              "1; q; q^2; p; p^2; sign(p); input(tau)", "sin(2*a+b); cos(a-b)*a^2"}) {
            auto lib = parse_library_spec(spec);
            auto again = parse_library_spec(render_library_spec(lib));
            REQUIRE(lib.size() == again.size());
            for (int j = 0; j < lib.size(); ++j)
                CHECK(lib.terms[j].label == again.terms[j].label);
        }
    }
    SUBCASE("unknown names rejected when context is fixed") {
        CHECK_THROWS_AS(parse_library_spec("a; b", {"x", "y"}), std::invalid_argument);
    }
}
