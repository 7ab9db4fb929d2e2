#include <doctest.h>

#include <cmath>
#include <random>

#include "nbre/dynamics.hpp"

using namespace nbre;

namespace {

struct Setup {
    FrameCoefficients f;
    HamiltonianExpansion h;
    SymplecticChart chart;
};

Setup make(const CentralConfig& c) {
    Setup s;
    s.f = potential_expansion(c);
    s.h = build_hamiltonian(c, s.f);
    s.chart = diagonalize(s.h);
    return s;
}

}  // namespace

TEST_CASE("dynamics: equilibrium is fixed") {
    auto s = make(solve_lagrange(MassSystem({0.97, 0.02, 0.01})));
    for (auto F : {Field::reduced(s.f), Field::polynomial(s.h)}) {
        Vec eq = F.equilibrium();
        double t = 25.0;
        CHECK((integrate(F, eq, t) - eq).norm() < 1e-12 * t);
        StepControl g;
        g.method = Method::GaussLegendre4;
        CHECK((integrate(F, eq, t, g) - eq).norm() < 1e-12 * t);
    }
}

TEST_CASE("dynamics: Jacobians against finite differences") {
    auto s = make(solve_euler3(MassSystem({0.2, 0.5, 0.3})));
    std::mt19937 rng(4);
    std::normal_distribution<double> N01(0.0, 0.01);
    for (auto F : {Field::reduced(s.f), Field::polynomial(s.h)}) {
        Vec z = F.equilibrium();
        for (int i = 0; i < z.size(); ++i) z[i] += N01(rng);
        Mat J = F.jacobian(z);
        for (int j = 0; j < z.size(); ++j) {
            double h = 1e-6;
            Vec zp = z, zm = z;
            zp[j] += h;
            zm[j] -= h;
            Vec col = (F(zp) - F(zm)) / (2 * h);
            CHECK((col - J.col(j)).norm() < 1e-7);
        }
    }
}

TEST_CASE("dynamics: time reversal and integrator agreement") {
    auto s = make(solve_lagrange(MassSystem({0.98, 0.01, 0.01})));
    Field F = Field::reduced(s.f);
    Vec z = F.equilibrium();
    z[0] += 0.01;
    z[1] += 0.005;
    z[F.dof() + 2] -= 0.003;
    double t = 40.0;
    Vec zt = integrate(F, z, t);
    Vec back = integrate(F, zt, -t);
    CHECK((back - z).norm() < 1e-9 * t);
    StepControl g;
    g.method = Method::GaussLegendre4;
    g.steps = 4000;
    CHECK((integrate(F, z, t, g) - zt).norm() < 1e-8);
}

TEST_CASE("dynamics: trivial family period tends to 2 pi / w0") {
    auto s = make(solve_lagrange(MassSystem({0.97, 0.02, 0.01})));
    Field F = Field::reduced(s.f);
    double w0 = s.chart.freq.omega0;
    double prev = 1.0;
    for (double a : {1e-2, 5e-3, 2.5e-3}) {
        auto seed = linear_seed(F, s.chart, 0, a);
        CHECK(seed.constraints.family == FamilyKind::Trivial);
        auto o = shoot_periodic(F, seed.state, seed.period, seed.constraints);
        double err = std::abs(o.period - 2 * M_PI / w0);
        CHECK(o.residual < 1e-10);
        // frame coordinates stay at zero on the trivial family
        for (int i = 1; i < F.dof(); ++i) CHECK(std::abs(o.state0[i]) < 1e-12);
        CHECK(err < prev);
        prev = err;
    }
    // amplitude 0 gives the degenerate orbit
    auto seed = linear_seed(F, s.chart, 0, 0.0);
    auto o = shoot_periodic(F, seed.state, seed.period, seed.constraints);
    CHECK(o.degenerate);
    CHECK(o.period == doctest::Approx(2 * M_PI / w0));
}

TEST_CASE("dynamics: Lagrange Lyapunov families") {
    auto s = make(solve_lagrange(MassSystem({0.98, 0.01, 0.01})));
    Field F = Field::reduced(s.f);
    for (int k : {1, 2}) {
        auto seed = linear_seed(F, s.chart, k, 1e-3);
        auto o = shoot_periodic(F, seed.state, seed.period, seed.constraints);
        double lin = 2 * M_PI / s.chart.freq.modes[k].freq;
        CHECK(o.residual < 1e-10);
        CHECK(std::abs(o.period - lin) / o.period < 5e-3);
        auto fl = floquet(o, F);
        CHECK(std::abs(fl.determinant - 1.0) < 1e-8);
        CHECK(fl.pairing_error < 1e-6);
        CHECK(fl.unit_count >= 2);
        // transverse multipliers from linear theory at small amplitude
        auto small = linear_seed(F, s.chart, k, 1e-5);
        auto fs = floquet(shoot_periodic(F, small.state, small.period, small.constraints), F);
        for (int j = 0; j < 3; ++j) {
            if (j == k) continue;
            auto mu = std::polar(1.0, 2 * M_PI * s.chart.freq.modes[j].freq / s.chart.freq.modes[k].freq);
            double best = 1e9;
            for (const auto& m : fs.multipliers) best = std::min(best, std::abs(m - mu));
            CHECK(best < 1e-4);
        }
        auto br = continue_family(F, o, seed.constraints, 10, 1e-3);
        CHECK(!br.ended);
        CHECK(br.orbits.size() == 11);
        for (std::size_t i = 1; i < br.orbits.size(); ++i) {
            CHECK(br.orbits[i].residual < 1e-10);
            CHECK((br.orbits[i].state0 - br.orbits[i - 1].state0).norm() < 2e-3 * s.chart.T.col(k).norm());
            CHECK(std::abs(br.orbits[i].period - br.orbits[i - 1].period) < 0.05 * lin);
        }
    }
}

TEST_CASE("dynamics: Euler equal masses families") {
    auto s = make(solve_euler3(MassSystem({1, 1, 1})));
    Field F = Field::reduced(s.f);
    for (int k : {0, 1}) {
        auto seed = linear_seed(F, s.chart, k, 1e-3);
        auto o = shoot_periodic(F, seed.state, seed.period, seed.constraints);
        double lin = 2 * M_PI / s.chart.freq.modes[k].freq;
        CHECK(o.residual < 1e-10);
        CHECK(std::abs(o.period - lin) / lin < 1e-2);
        // the symplectic stepper reproduces the orbit
        StepControl g;
        g.method = Method::GaussLegendre4;
        g.steps = 2000;
        CHECK((integrate(F, o.state0, o.period, g) - o.state0).norm() < 1e-8);
    }
    CHECK_THROWS_AS(linear_seed(F, s.chart, 2, 1e-3), DomainError);
}

TEST_CASE("dynamics: Weinstein continuation in energy") {
    auto s = make(solve_euler3(MassSystem({1, 1, 1})));
    Field F = Field::reduced(s.f);
    auto seed = linear_seed(F, s.chart, 1, 1e-3, Anchor::Energy);
    CHECK(seed.constraints.family == FamilyKind::Weinstein);
    auto o = shoot_periodic(F, seed.state, seed.period, seed.constraints);
    CHECK(o.residual < 1e-10);
    double E0 = F.energy(F.equilibrium());
    double dE = o.energy - E0;
    auto br = continue_family(F, o, seed.constraints, 5, dE);
    REQUIRE(br.orbits.size() == 6);
    for (std::size_t i = 1; i < br.orbits.size(); ++i) CHECK(br.orbits[i].energy > br.orbits[i - 1].energy);
}

TEST_CASE("dynamics: polynomial and exact fields give nearby orbits") {
    auto s = make(solve_euler3(MassSystem({1, 1, 1})));
    Field Fe = Field::reduced(s.f), Fp = Field::polynomial(s.h);
    auto se = linear_seed(Fe, s.chart, 1, 1e-3);
    auto oe = shoot_periodic(Fe, se.state, se.period, se.constraints);
    auto op = shoot_periodic(Fp, se.state, se.period, se.constraints);
    CHECK(op.residual < 1e-10);
    // fifth-order remainder in the field
    CHECK(std::abs(oe.period - op.period) / oe.period < 1e-6);
}

TEST_CASE("dynamics: theta reconstruction") {
    auto s = make(solve_lagrange(MassSystem({0.97, 0.02, 0.01})));
    ReducedSystem sys(s.f);
    Field F = Field::reduced(s.f);
    auto th = reconstruct_theta(sys, F.equilibrium(), 10.0, 5);
    for (auto [t, v] : th) CHECK(v == doctest::Approx(sys.omega() * t).epsilon(1e-11));
    // angular momentum of the reconstructed Cartesian motion
    auto seed = linear_seed(F, s.chart, 0, 1e-2);
    auto o = shoot_periodic(F, seed.state, seed.period, seed.constraints);
    auto path = reconstruct_theta(sys, o.state0, o.period, 8);
    auto zs = integrate_samples(F, o.state0, {o.period / 8 * 3, o.period / 2, o.period});
    for (const auto& z : zs) {
        Vec r, v;
        sys.to_cartesian(sys.velocities(z), 0.7, r, v);
        CHECK(sys.angular_momentum(r, v) == doctest::Approx(sys.J()).epsilon(1e-9));
    }
    double dth = path.back().second;
    CHECK(dth > 0);
    CHECK(std::isfinite(dth));
}

TEST_CASE("dynamics: Hamilton's equations against the velocity form") {
    auto s = make(solve_lagrange(MassSystem({0.97, 0.02, 0.01})));
    ReducedSystem sys(s.f);
    std::mt19937 rng(21);
    std::normal_distribution<double> N01(0.0, 0.02);
    for (int t = 0; t < 100; ++t) {
        Vec z = Vec::Zero(sys.dim());
        z[0] = 1.0;
        for (int i = 0; i < z.size(); ++i) z[i] += N01(rng);
        CHECK(hamilton_consistency(sys, z) < 1e-9);
    }
}

TEST_CASE("dynamics: symplectic energy conservation over 100 periods") {
    // linearly stable configuration so the trajectory stays near the orbit; sampled off the period
    auto s = make(solve_lagrange(MassSystem({0.98, 0.01, 0.01})));
    Field F = Field::reduced(s.f);
    auto seed = linear_seed(F, s.chart, 1, 1e-2);
    auto o = shoot_periodic(F, seed.state, seed.period, seed.constraints);
    StepControl g;
    g.method = Method::GaussLegendre4;
    g.steps = 100;
    Vec z = o.state0;
    double E0 = F.energy(z), dE = std::abs(E0 - F.energy(F.equilibrium())), drift = 0.0;
    for (int p = 0; p < 700; ++p) {
        z = integrate(F, z, o.period / 7, g);
        drift = std::max(drift, std::abs(F.energy(z) - E0));
    }
    CHECK(drift < 1e-9 * dE);
}

TEST_CASE("dynamics: Cartesian Yoshida conservation") {
    auto s = make(solve_euler3(MassSystem({1, 1, 1})));
    ReducedSystem sys(s.f);
    Field F = Field::reduced(s.f);
    auto seed = linear_seed(F, s.chart, 1, 1e-2);
    auto o = shoot_periodic(F, seed.state, seed.period, seed.constraints);
    CartesianState cs;
    sys.to_cartesian(sys.velocities(o.state0), 0.0, cs.r, cs.v);
    double E0 = cartesian_energy(s.f.masses, cs), L0 = cartesian_angular_momentum(s.f.masses, cs);
    double dE = 0, dL = 0;
    for (int p = 0; p < 100; ++p) {
        cs = yoshida4(s.f.masses, cs, o.period / 5000, 5000);
        dE = std::max(dE, std::abs(cartesian_energy(s.f.masses, cs) - E0));
        dL = std::max(dL, std::abs(cartesian_angular_momentum(s.f.masses, cs) - L0));
    }
    CHECK(dE < 1e-9);
    CHECK(dL < 1e-9);
}
