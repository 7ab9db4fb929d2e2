#include <doctest.h>

#include <cmath>
#include <random>

#include "nbre/central_config.hpp"
#include "nbre/errors.hpp"

using namespace nbre;

namespace {

double mdot(const Vec& a, const Vec& b, const std::vector<double>& m) {
    double s = 0;
    for (std::size_t k = 0; k < m.size(); ++k) s += m[k] * (a[2 * k] * b[2 * k] + a[2 * k + 1] * b[2 * k + 1]);
    return s;
}

void check_basis(const CentralConfig& c, double tol) {
    int d = 2 * c.N();
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k)
            CHECK(std::abs(mdot(c.eigvecs.col(j), c.eigvecs.col(k), c.masses)) <= tol * std::sqrt(c.gs[j] * c.gs[k]));
    Mat Dm = hessian_gradient_map(c);
    for (int k = 0; k < d; ++k) {
        Vec res = Dm * c.eigvecs.col(k) - c.eigvals[k] * c.eigvecs.col(k);
        CHECK(res.norm() <= 1e-10 * std::max(1.0, Dm.norm()) * c.eigvecs.col(k).norm());
    }
}

}  // namespace

TEST_CASE("lagrange equal masses") {
    auto c = solve_lagrange(MassSystem({1, 1, 1}));
    CHECK(c.I == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c.lambda == doctest::Approx(std::pow(3.0, -1.5)).epsilon(1e-14));
    CHECK(c.eigvals[4] == doctest::Approx(1.5 * std::pow(3.0, -1.5)).epsilon(1e-12));
    CHECK(c.eigvals[5] == doctest::Approx(1.5 * std::pow(3.0, -1.5)).epsilon(1e-12));
    CHECK(config_residual(c) < 1e-12);
    check_basis(c, 1e-12);
}

TEST_CASE("lagrange unequal masses") {
    auto c = solve_lagrange(MassSystem({0.98, 0.01, 0.01}));
    double beta = 0.98 * 0.01 * 2 + 0.0001;
    CHECK(beta == doctest::Approx(0.0197));
    CHECK(c.lambda == doctest::Approx(std::pow(beta, 1.5)).epsilon(1e-13));
    CHECK(c.lambda == doctest::Approx(0.002765).epsilon(1e-3));
    CHECK(std::sqrt(c.I) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(mdot(c.eigvecs.col(4), c.eigvecs.col(5), c.masses)) < 1e-14);
    CHECK(config_residual(c) < 1e-12);
    check_basis(c, 1e-12);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int t = 0; t < 30; ++t) {
        auto ci = solve_lagrange(MassSystem({u(rng), u(rng), u(rng)}));
        CHECK(config_residual(ci) < 1e-12);
        check_basis(ci, 1e-12);
        CentralConfig dense = ci;
        dense_eigenbasis(dense);
        CHECK(dense.eigvals[4] == doctest::Approx(ci.eigvals[4]).epsilon(1e-11));
        CHECK(dense.eigvals[5] == doctest::Approx(ci.eigvals[5]).epsilon(1e-11));
        CHECK(std::abs(std::abs(mdot(dense.eigvecs.col(4), ci.eigvecs.col(4), ci.masses)) - 1.0) < 1e-9);
    }
    CHECK_THROWS_AS(solve_lagrange(MassSystem({1, 0, 1})), MassError);
    CHECK_THROWS_AS(solve_lagrange(MassSystem({1, -1, 1})), MassError);
}

TEST_CASE("lagrange masses from beta, m1") {
    auto m = lagrange_masses(0.3, 0.4);
    CHECK(m[0] + m[1] + m[2] == doctest::Approx(1.0));
    CHECK(m[0] * m[1] + m[1] * m[2] + m[0] * m[2] == doctest::Approx(0.3));
    CHECK_THROWS_AS(lagrange_masses(0.5, 0.4), DomainError);
}

TEST_CASE("gradient map identities") {
    auto c = solve_lagrange(MassSystem({0.5, 0.3, 0.2}));
    Mat Dm = hessian_gradient_map(c);
    CHECK((Dm * c.eigvecs.col(2)).norm() < 1e-12);
    CHECK((Dm * c.eigvecs.col(3)).norm() < 1e-12);
    Vec e1 = c.eigvecs.col(0);
    CHECK((Dm * e1 - std::sqrt(c.I) * c.lambda * e1).norm() < 1e-12);
    Eigen::EigenSolver<Mat> es(Dm);
    std::vector<double> got, want;
    for (int i = 0; i < 6; ++i) got.push_back(es.eigenvalues()[i].real());
    for (int i = 0; i < 6; ++i) want.push_back(c.eigvals[i]);
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    for (int i = 0; i < 6; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-10).scale(1e-3));
}

TEST_CASE("two body collinear") {
    auto [c, sp] = solve_collinear(MassSystem({1, 1}));
    CHECK(c.r[2] - c.r[0] == doctest::Approx(std::cbrt(2.0)).epsilon(1e-14));
    double eps = 1e-5;
    auto [c2, sp2] = solve_collinear(MassSystem({1, eps}));
    CHECK(std::abs(c2.r[2] - c2.r[0] - (1 + eps / 3)) < 10 * eps * eps);
    CHECK(sp.iotas[0] == doctest::Approx(1.0));
    CHECK(sp.iotas[1] == doctest::Approx(3.0));
}

TEST_CASE("restricted three body iota") {
    for (double eps : {1e-6, 1e-9}) {
        auto [c, sp] = solve_collinear(MassSystem({1, eps, 0}, true));
        double c2 = std::cbrt(1.0 / 3.0);
        double e3 = std::cbrt(eps);
        CHECK(std::abs(sp.iotas[2] - (9 - 12 * c2 * e3)) < 50 * e3 * e3);
        double r23 = c.r[4] - c.r[2];
        CHECK(std::abs(r23 - (c2 * e3 + std::pow(c2, 5) * e3 * e3)) < 10 * eps);
        CHECK(std::abs(sp.iotas[2] - asymptotic_iota(3, {eps})) < 50 * e3 * e3);
    }
    CHECK(asymptotic_iota(2, {}) == 3.0);
    CHECK(asymptotic_iota(3, {1e-6}) == doctest::Approx(8.9169).epsilon(1e-4));
}

TEST_CASE("collinear general properties") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int n = 3; n <= 6; ++n) {
        std::vector<double> m(n);
        m[0] = 1.0;
        for (int k = 1; k < n; ++k) m[k] = u(rng);
        auto [c, sp] = solve_collinear(MassSystem(m));
        CHECK(config_residual(c) < 1e-12);
        CHECK(sp.iotas[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(sp.iotas[1] == doctest::Approx(3.0).epsilon(1e-12));
        for (int k = 1; k < n; ++k) CHECK(sp.iotas[k] > sp.iotas[k - 1]);
        for (int k = 2; k < n; ++k) {
            CHECK(c.eigvals[2 * k] > 3 * std::sqrt(c.I) * c.lambda);
            CHECK(c.eigvals[2 * k] + 2 * c.eigvals[2 * k + 1] ==
                  doctest::Approx(3 * std::sqrt(c.I) * c.lambda).epsilon(1e-12));
        }
        check_basis(c, 1e-12);
        CentralConfig dense = c;
        dense_eigenbasis(dense);
        for (int k = 4; k < 2 * n; ++k) CHECK(dense.eigvals[k] == doctest::Approx(c.eigvals[k]).epsilon(1e-10));

        auto cn = config_scale(c, Normalization::UnitNorm);
        CHECK(cn.I == doctest::Approx(1.0).epsilon(1e-14));
        auto cnn = config_scale(cn, Normalization::UnitNorm);
        CHECK((cnn.r - cn.r).norm() < 1e-14);
        for (int k = 4; k < 2 * n; ++k)
            CHECK(cn.eigvals[k] / (std::sqrt(cn.I) * cn.lambda) ==
                  doctest::Approx(c.eigvals[k] / (std::sqrt(c.I) * c.lambda)).epsilon(1e-13));
        CHECK(cn.lambda_star() == doctest::Approx(c.lambda_star()).epsilon(1e-13));
        CHECK(config_residual(cn) < 1e-12);

        // reversing the line mirrors the configuration
        std::vector<double> mr(m.rbegin(), m.rend());
        auto [cr, spr] = solve_collinear(MassSystem(mr));
        for (int k = 0; k < n; ++k) CHECK(cr.r[2 * k] == doctest::Approx(-c.r[2 * (n - 1 - k)]).epsilon(1e-12));
    }
}

TEST_CASE("scaling homogeneity") {
    auto c = solve_lagrange(MassSystem({0.2, 0.3, 0.5}));
    CentralConfig s = c;
    s.r *= 2.0;
    double I = moment_of_inertia(s.r, s.masses);
    double lam = potential(s.r, s.masses) / I;
    CHECK(lam == doctest::Approx(c.lambda / 8).epsilon(1e-13));
}

TEST_CASE("euler three body") {
    auto c = solve_euler3(MassSystem({1, 1, 1}));
    CHECK(std::abs(c.sigma) < 1e-13);
    CHECK(c.kappa > 2);
    CHECK(c.I == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(solve_euler3(MassSystem({1, 1, 1}), {0, 0, 2}), OrderError);

    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int t = 0; t < 25; ++t) {
        std::vector<double> m = {u(rng), u(rng), u(rng)};
        auto e = solve_euler3(MassSystem(m), {2, 0, 1});
        const auto& ml = e.masses;
        double m1 = ml[0], m2 = ml[1], m3 = ml[2], s = e.sigma, k = e.kappa, lam = e.lambda;
        CHECK(config_residual(e) < 1e-12);
        CHECK(ml[0] == doctest::Approx(m[2] / (m[0] + m[1] + m[2])));
        CHECK(s > -0.5);
        CHECK(s < 0.5);
        double sp = s + 0.5, sm = 0.5 - s;
        double k3 = k * k * k;
        CHECK(m2 / (sp * sp) + m3 == doctest::Approx(lam * k3 * (m2 * sp + m3)).epsilon(1e-11));
        CHECK(-m1 / (sp * sp) + m3 / (sm * sm) ==
              doctest::Approx(-lam * k3 * (m1 * sp + m3 * (s - 0.5))).epsilon(1e-10).scale(1.0));
        CHECK(m1 + m2 / (sm * sm) == doctest::Approx(lam * k3 * (m2 * sm + m1)).epsilon(1e-11));
        CHECK(k * k * (m1 * m2 * sp * sp + m2 * m3 * sm * sm + m1 * m3) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(lam == doctest::Approx(m1 * m2 / (k * sp) + m1 * m3 / k + m3 * m2 / (k * sm)).epsilon(1e-12));
        double l5 = -lam + 2 * (m1 + m3) / k3 + 2 * (m1 + m2) / (k3 * sp * sp * sp) + 2 * (m2 + m3) / (k3 * sm * sm * sm);
        CHECK(e.eigvals[4] == doctest::Approx(l5).epsilon(1e-11));
        CHECK(e.eigvals[4] + 2 * e.eigvals[5] == doctest::Approx(3 * lam).epsilon(1e-12));
        double as = std::abs(s);
        double poly = -16 * std::pow(as, 4) + 40 * as * as + 7;
        if (as > 1e-12) {
            double fk = -4 * poly * poly / (std::pow(4 * as * as - 1, 3) * (16 * std::pow(as, 4) - 8 * as * as + 49));
            double gk = -poly * poly / (4 * as * std::pow(2 * as - 1, 3) *
                                        (16 * std::pow(as, 4) + 32 * std::pow(as, 3) + 40 * as * as + 24 * as + 21));
            CHECK(fk < k * k);
            CHECK(k * k < gk);
        }
        // eigenvector display, up to normalization and sign
        Vec e5(6);
        e5 << std::sqrt(m2 * m3 / m1) * k * sm, 0, -std::sqrt(m1 * m3 / m2) * k, 0, std::sqrt(m1 * m2 / m3) * k * sp, 0;
        double cosang = mdot(e5, e.eigvecs.col(4), ml) /
                        std::sqrt(mdot(e5, e5, ml) * mdot(e.eigvecs.col(4), e.eigvecs.col(4), ml));
        CHECK(std::abs(std::abs(cosang) - 1.0) < 1e-12);
        // parametrization of the masses by (sigma, kappa, lambda)
        double den = 32 * std::pow(s, 4) - 80 * s * s - 14;
        CHECK(m1 == doctest::Approx(-(2 * s + 1) * (2 * s + 1) * (k3 * lam * std::pow(2 * s - 1, 3) + 8) / den)
                        .epsilon(1e-10));
        CHECK(m2 == doctest::Approx(-std::pow(1 - 4 * s * s, 2) * (k3 * lam - 1) / (den / 2)).epsilon(1e-10));
        CHECK(m3 == doctest::Approx((1 - 2 * s) * (1 - 2 * s) * (k3 * lam * std::pow(2 * s + 1, 3) - 8) / den)
                        .epsilon(1e-10));
        double l6 = (-64 * std::pow(s, 4) + 160 * s * s + 28) / (std::pow(k, 5) * std::pow(4 * s * s - 1, 3));
        CHECK(e.eigvals[5] == doctest::Approx(l6).epsilon(1e-11));
        CHECK(lam == doctest::Approx(l6 - 8 * (4 * s * s + 7) / (k3 * (16 * std::pow(s, 4) - 40 * s * s - 7)))
                         .epsilon(1e-11));
        check_basis(e, 1e-12);
    }
}
