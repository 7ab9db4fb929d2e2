#include <doctest.h>

#include <cmath>
#include <set>

#include "nbre/resonance.hpp"

using namespace nbre;

namespace {

std::set<std::vector<int>> canon(const ResonanceReport& r) {
    std::set<std::vector<int>> s;
    for (const auto& o : r.offending) {
        auto k = o.k;
        auto neg = k;
        for (auto& v : neg) v = -v;
        s.insert(std::min(k, neg));
    }
    return s;
}

}  // namespace

TEST_CASE("resonance: trivial scans") {
    auto r = scan({1.0, 2.0}, 3, 1e-9);
    REQUIRE(r.offending.size() >= 1);
    CHECK(r.offending[0].k == std::vector<int>{-2, 1});
    CHECK(r.offending[0].value == 0.0);
    auto q = scan({1.0, std::sqrt(2.0)}, 4, 1e-9);
    CHECK(q.nonresonant());
    // min divisor by brute force
    double best = 1e300;
    for (int a = -4; a <= 4; ++a)
        for (int b = -4; b <= 4; ++b)
            if ((a || b) && std::abs(a) + std::abs(b) <= 4) best = std::min(best, std::abs(a + b * std::sqrt(2.0)));
    CHECK(q.min_divisor == doctest::Approx(best).epsilon(1e-14));
}

TEST_CASE("resonance: lattice size and budget") {
    // brute count in 3 dims
    int cnt = 0;
    for (int a = -5; a <= 5; ++a)
        for (int b = -5; b <= 5; ++b)
            for (int c = -5; c <= 5; ++c)
                if ((a || b || c) && std::abs(a) + std::abs(b) + std::abs(c) <= 5) ++cnt;
    CHECK(lattice_size(3, 5) == doctest::Approx(cnt));
    CHECK_THROWS_AS(scan(std::vector<double>(13, 1.0), 2), BudgetError);
    CHECK_THROWS_AS(scan(std::vector<double>(12, 1.0), 12, -1, 1e6), BudgetError);
}

TEST_CASE("resonance: symmetry and homogeneity") {
    std::vector<double> w{0.3, -0.7, 1.1, 0.4};
    auto r = scan(w, 4, 1e-9);
    auto neg = w;
    for (auto& x : neg) x = -x;
    CHECK(canon(scan(neg, 4, 1e-9)) == canon(r));
    auto sc = w;
    for (auto& x : sc) x *= 7.5;
    auto r2 = scan(sc, 4, 7.5e-9);
    CHECK(canon(r2) == canon(r));
    CHECK(r2.min_divisor == doctest::Approx(7.5 * r.min_divisor));
    CHECK(!r.nonresonant());  // 0.3 + 1.1 + 0.4... exact relations such as 0.7 + 0.4 = 1.1
}

TEST_CASE("resonance: Lagrange excluded beta 1/75") {
    double beta = 1.0 / 75;
    auto f = lagrange_frequencies(beta);
    auto r = scan({f.w0, -f.w1, f.w2}, 4);
    REQUIRE(!r.nonresonant());
    // w2 = 3 w1 here
    CHECK(canon(r).count(std::vector<int>{0, -3, -1}) == 1);
    CHECK(!omega_ps_membership(beta, 0.99));
}

TEST_CASE("resonance: a_k sequence") {
    auto a = ak_sequence(30);
    CHECK(a[0] == 1.0);
    CHECK(a[1] == doctest::Approx(std::sqrt(2 * std::sqrt(7.0) - 1)).epsilon(1e-15));
    CHECK(std::abs(a[1] - 2.07159) < 5e-6);
    CHECK(std::abs(ak_ratio_bound() - 1.76186) < 5e-6);
    CHECK(a[2] / a[1] == doctest::Approx(ak_ratio_bound()).epsilon(1e-14));
    for (int k = 1; k + 1 < static_cast<int>(a.size()); ++k) {
        CHECK(a[k + 1] > a[k]);
        CHECK(a[k + 1] / a[k] > std::sqrt(3.0));
        CHECK(a[k + 1] / a[k] <= ak_ratio_bound() + 1e-15);
        if (k >= 2) CHECK(a[k + 1] / a[k] < a[k] / a[k - 1]);
    }
}

TEST_CASE("resonance: a_k nonresonant up to order four") {
    auto rep = verify_ak_nonresonant(12);
    CHECK(rep.a.size() == 11);
    for (const auto& c : rep.cases) {
        CHECK(c.offenders == 0);
        CHECK(c.margin > 0);
        MESSAGE("case " << c.id << " margin " << c.margin);
    }
    CHECK(rep.lattice.nonresonant());
    CHECK(rep.nonresonant());
    // gap bounds used for case 2
    CHECK(1 / std::sqrt(3.0) + 1.0 / 3 < 1.0);
}

TEST_CASE("resonance: case 3 margin decays like 3^(-k/2)") {
    // a_{k+2} - 3 a_k = (4/9) / sqrt(2 3^k) + O(3^(-3k/2))
    auto a = ak_sequence(34);
    for (int k = 6; k + 2 <= 34; ++k) {
        double gap = a[k + 1] - 3 * a[k - 1];
        double lead = 4.0 / 9.0 / std::sqrt(2 * std::pow(3.0, k));
        CHECK(gap > 0);
        CHECK(gap == doctest::Approx(lead).epsilon(0.01));
    }
    // with a tolerance relative to max a_k the relation is flagged for large N
    auto big = verify_ak_nonresonant(25);
    CHECK(!big.nonresonant());
    for (const auto& c : big.cases)
        if (c.id != 3) CHECK(c.offenders == 0);
    for (const auto& o : big.lattice.offending) {
        int nz = 0;
        for (int v : o.k) nz += v != 0;
        CHECK(nz == 2);
    }
}

TEST_CASE("resonance: mass set membership") {
    CHECK(!omega_ps_membership(1.0 / 36, 0.99));
    CHECK(omega_ps_membership(0.0197, 0.98));
    CHECK(!omega_ps_membership(0.02, (std::sqrt(69.0) + 9) / 18));
    CHECK(!omega_ps_membership(0.05, 0.99));
}

TEST_CASE("resonance: Lyapunov exclusion set") {
    for (int n = 2; n <= 10; ++n) {
        auto [b1, b2] = lyapunov_excluded_betas(n);
        auto f1 = lagrange_frequencies(b1);
        auto f2 = lagrange_frequencies(b2);
        CHECK(std::abs(f1.w0 / f1.w1 - n) < 1e-12 * n);
        CHECK(std::abs(f2.w2 / f2.w1 - n) < 1e-12 * n);
    }
}

TEST_CASE("resonance: Diophantine fit") {
    double g = (1 + std::sqrt(5.0)) / 2;
    auto fit = diophantine_fit({1.0, g}, 30);
    REQUIRE(fit.has_value());
    // golden mean: min divisor ~ c / |k|
    CHECK(fit->second == doctest::Approx(1.0).epsilon(0.25));
}
