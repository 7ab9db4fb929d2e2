#include <doctest.h>

#include <cmath>
#include <random>

#include "nbre/normal_form.hpp"

using namespace nbre;

namespace {

HamiltonianExpansion expand(const CentralConfig& c) { return build_hamiltonian(c, potential_expansion(c)); }

std::vector<std::pair<double, double>> omega_ps_samples(int count, unsigned seed) {
    std::mt19937 rng(seed);
    double m1lo = (std::sqrt(69.0) + 9) / 18;
    std::uniform_real_distribution<double> ub(1e-3, 1.0 / 27 - 1e-3), um(m1lo + 1e-3, 1.0 - 1e-3);
    std::vector<std::pair<double, double>> out;
    while (static_cast<int>(out.size()) < count) {
        double b = ub(rng), m1 = um(rng);
        if (!in_omega_ps(b, m1)) continue;
        try {
            lagrange_masses(b, m1);
        } catch (const DomainError&) {
            continue;
        }
        out.emplace_back(b, m1);
    }
    return out;
}

}  // namespace

TEST_CASE("normal form: single oscillator cubic") {
    // H2 = c zeta eta, H3 = zeta^3: S3 = -u^3 / (c (0 - 3))
    std::vector<cplx> c{cplx(0, 2.0)};
    TruncPoly H3(2, 4);
    H3.add_term(Exps{3, 0}, 1.0);
    TruncPoly S3 = solve_s3(c, H3, 1e-12);
    CHECK(std::abs(S3.coeff(Exps{3, 0}) - 1.0 / (3.0 * c[0])) < 1e-15);
    H3.add_term(Exps{1, 2}, 0.5);
    S3 = solve_s3(c, H3, 1e-12);
    CHECK(std::abs(S3.coeff(Exps{1, 2}) - (-0.5 / c[0])) < 1e-15);
    TruncPoly H3r(2, 4);
    H3r.add_term(Exps{2, 1}, 1.0);
    CHECK_THROWS_AS(solve_s3(std::vector<cplx>{cplx(0, 0)}, H3r, 1e-12), SmallDivisorError);
}

TEST_CASE("normal form: scalar oscillator with quartic term") {
    // H = w (p^2 + q^2)/2 + a q^4
    HamiltonianExpansion h;
    h.N = 0;
    h.dof = 1;
    h.omega = 1.3;
    auto q = TruncPoly::variable(2, 4, 0), p = TruncPoly::variable(2, 4, 1);
    h.H2 = 0.5 * h.omega * (q * q + p * p);
    h.H3 = TruncPoly(2, 4);
    double a = 0.7;
    h.H4 = a * (q * q * q * q);
    auto nf = normalize(h);
    // averaged q^4 = 3/2 I^2 with I = (p^2+q^2)/2, K = w I + (1/2) w00 I^2
    CHECK(nf.omega_jk(0, 0) == doctest::Approx(3.0 * a).epsilon(1e-12));
    CHECK(nf.residual3 < 1e-12);
    CHECK(nf.residual4 < 1e-12);
}

TEST_CASE("normal form: Lagrange family against closed forms") {
    for (auto [b, m1] : omega_ps_samples(10, 11)) {
        auto m = lagrange_masses(b, m1);
        auto h = expand(solve_lagrange(MassSystem({m[0], m[1], m[2]})));
        auto nf = normalize(h);
        auto o = oracle_lagrange(b, m1);
        CHECK(nf.residual3 < 1e-11);
        CHECK(nf.residual4 < 1e-11);
        CHECK(nf.omega_imag < 1e-9);
        CHECK(std::abs(nf.omega_jk(0, 0) - o.w00) < 1e-9);
        CHECK(std::abs(nf.omega_jk(0, 1) - o.w01) < 1e-8 * std::max(1.0, std::abs(o.w01)));
        CHECK(std::abs(nf.omega_jk(0, 2) - o.w02) < 1e-8 * std::max(1.0, std::abs(o.w02)));
        CHECK(std::abs(nf.omega_jk(1, 2) - o.w12) < 1e-8 * std::max(1.0, std::abs(o.w12)));
        CHECK(std::abs(nf.omega_jk(1, 1) - o.w11) < 1e-8 * std::max(1.0, std::abs(o.w11)));
        CHECK(std::abs(nf.omega_jk(2, 2) - o.w22) < 1e-8 * std::max(1.0, std::abs(o.w22)));
        CHECK(std::abs(nf.det_center - o.det) < 1e-6 * std::max(1.0, std::abs(o.det)));
    }
}

TEST_CASE("normal form: Lagrange determinant next to the degeneracy curve") {
    // f_deg ~ 2e-7 here while its terms are ~3.5e3; a 60-digit evaluation gives det = -2.09696845358
    double b = 0.0020099009864631653, m1 = 0.99798653627495748;
    auto o = oracle_lagrange(b, m1);
    CHECK(o.det == doctest::Approx(-2.09696845358).epsilon(1e-10));
    auto m = lagrange_masses(b, m1);
    auto nf = normalize(expand(solve_lagrange(MassSystem({m[0], m[1], m[2]}))));
    CHECK(std::abs(nf.det_center - o.det) < 1e-8 * std::abs(o.det));
}

TEST_CASE("normal form: Lagrange admissible set") {
    CHECK_THROWS_AS(oracle_lagrange(1.0 / 36, 0.99), DomainError);
    CHECK_THROWS_AS(oracle_lagrange(0.01, 0.5), DomainError);
    CHECK(!in_omega_ps(1.0 / 75, 0.99));
    CHECK(in_omega_ps(0.034, 0.965));
    CHECK(!in_omega_ps(0.02, 0.99));
}

TEST_CASE("normal form: Euler three-body tau form") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> U(0.05, 1.0);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> m = t == 0 ? std::vector<double>{1, 1, 1} : std::vector<double>{U(rng), U(rng), U(rng)};
        auto c = solve_euler3(MassSystem(m));
        auto f = potential_expansion(c);
        auto h = build_hamiltonian(c, f);
        auto nf = normalize(h);
        double lam = f.lambda_star, l6 = f.lambda_star_k[1];
        auto o = oracle_euler3(lam, l6, f.A3(0, 0, 0) / 6.0, f.A4(0, 0, 0, 0) / 24.0);
        CHECK(nf.residual3 < 1e-11);
        CHECK(nf.residual4 < 1e-11);
        CHECK(nf.omega_jk(0, 0) == doctest::Approx(-3.0).epsilon(1e-9));
        REQUIRE(nf.center.size() == 2);
        double det = nf.det_center;
        CHECK(std::abs(det) > 1e-8);
        CHECK(std::abs(nf.omega_jk(0, 1) - o.w01) < 1e-8 * std::max(1.0, std::abs(o.w01)));
        CHECK(std::abs(nf.omega_jk(1, 1) - o.w11) < 1e-8 * std::max(1.0, std::abs(o.w11)));
        CHECK(std::abs(det - o.det_closed) < 1e-8 * std::max(1.0, std::abs(det)));
        CHECK(std::abs(o.det - o.det_closed) < 1e-8 * std::max(1.0, std::abs(det)));
    }
}

TEST_CASE("normal form: independent of eigenvector signs and chart choice") {
    auto c = solve_euler3(MassSystem({0.2, 0.5, 0.3}));
    auto h = expand(c);
    auto ch = diagonalize(h, false);
    auto a = normalize(h, ch);
    int n = ch.n;
    for (int j = 0; j < n; ++j) {
        ch.T.col(j) *= -1.0;
        ch.T.col(n + j) *= -1.0;
    }
    auto b = normalize(h, ch);
    auto cl = normalize(h, diagonalize(h, true));
    CHECK((a.omega_jk - b.omega_jk).cwiseAbs().maxCoeff() < 1e-11);
    CHECK((a.omega_jk - cl.omega_jk).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("normal form: center restriction sizes") {
    auto [c4, sp] = solve_collinear(MassSystem({1, 2, 3, 4}));
    auto nf = normalize(expand(c4));
    auto cr = restrict_center(nf);
    CHECK(cr.indices.size() == 3);
    CHECK(cr.reduced_matrix.rows() == 3);
    CHECK(nf.omega_jk(0, 0) == doctest::Approx(-3.0).epsilon(1e-9));
    CHECK(nf.residual3 < 1e-11);
    CHECK(nf.residual4 < 1e-11);
}

TEST_CASE("normal form: mass cascade with coefficients over many decades") {
    // omega_jk entries reach 1e20 here while omega_00 stays -3
    auto [c4, sp] = solve_collinear(MassSystem({1, 1e-6, 1e-12, 1e-18}));
    auto nf = normalize(expand(c4));
    CHECK(nf.omega_jk(0, 0) == doctest::Approx(-3.0).epsilon(1e-9));
    CHECK(nf.residual3 < 1e-11);
    CHECK(nf.residual4 < 1e-11);
}

TEST_CASE("normal form: H_eps block against closed forms") {
    std::vector<std::array<double, 2>> pairs{{3.5, 0.4}, {5.0, 1.3}, {9.0, 1.0 / 3.0}, {4.2, -0.7}, {27.0, 1.0 / 9.0}};
    for (auto [iota, cr] : pairs) {
        double w = 1.1, s1 = 0.8, eps = 0.05;
        double s2 = cr * s1 * s1 / (w * w);
        auto h = h_eps(iota, w, s1, s2, eps);
        auto nf = normalize(h);
        auto o = oracle_euler_block(iota, cr, w, s1, eps);
        CHECK(nf.residual3 < 1e-11);
        CHECK(nf.residual4 < 1e-11);
        REQUIRE(nf.modes[0].elliptic);
        CHECK(!nf.modes[1].elliptic);
        CHECK(std::abs(nf.omega_jk(0, 0) - o.w_ee) < 1e-8 * std::max(1.0, std::abs(o.w_ee)));
        CHECK(std::abs(nf.omega_jk(0, 1) - o.w_eh) < 1e-8 * std::max(1.0, std::abs(o.w_eh)));
    }
}

TEST_CASE("normal form: f_num on the cascade") {
    for (int N = 3; N <= 12; ++N) {
        double iota = std::pow(3.0, N - 1), cr = std::pow(3.0, -(N - 2));
        double v = fnum(iota, cr), lim = fnum_limit(iota);
        CHECK(v == doctest::Approx(lim).epsilon(1e-9));
        CHECK(std::abs(v) > 0);
    }
    CHECK_THROWS_AS(fnum(2.0, 1.0), DomainError);
}
