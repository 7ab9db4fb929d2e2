#include "nbre/normal_form.hpp"

#include <cmath>
#include <iterator>

namespace nbre {

namespace {

// divisor sum c_k (b_k - a_k) for the monomial u^a eta^b
cplx divisor(const std::vector<cplx>& c, const Exps& e) {
    int n = static_cast<int>(c.size());
    cplx d = 0.0;
    for (int k = 0; k < n; ++k) d += c[k] * static_cast<double>(static_cast<int>(e[n + k]) - static_cast<int>(e[k]));
    return d;
}

bool is_action(const Exps& e, int n) {
    for (int k = 0; k < n; ++k)
        if (e[k] != e[n + k]) return false;
    return true;
}

std::vector<int> kvec_of(const Exps& e, int n) {
    std::vector<int> k(n);
    for (int j = 0; j < n; ++j) k[j] = static_cast<int>(e[n + j]) - static_cast<int>(e[j]);
    return k;
}

TruncPoly homological(const std::vector<cplx>& c, const TruncPoly& G, double tol, bool keep_actions,
                      TruncPoly* normal) {
    int n = static_cast<int>(c.size());
    TruncPoly S(G.nvars(), G.max_degree());
    double gscale = poly_norm(G);
    for (const auto& [e, g] : G.terms()) {
        if (g == 0.0) continue;
        if (keep_actions && is_action(e, n)) {
            if (normal) normal->add_term(e, g);
            continue;
        }
        cplx d = divisor(c, e);
        if (std::abs(d) < tol) throw SmallDivisorError("small divisor in the homological equation", kvec_of(e, n));
        S.add_term(e, -g / d);
    }
    return S;
}

cplx kappa(const Mode& m) { return m.elliptic ? cplx(0.0, -1.0) : cplx(1.0, 0.0); }

double poly_eval_horner(const std::vector<double>& coef, double x) {
    double s = 0.0;
    for (auto it = coef.rbegin(); it != coef.rend(); ++it) s = s * x + *it;
    return s;
}

}  // namespace

TruncPoly solve_s3(const std::vector<cplx>& c, const TruncPoly& H3, double tol) {
    return homological(c, H3, tol, false, nullptr);
}

NormalForm solve_s4_and_extract(const std::vector<Mode>& modes, const std::vector<cplx>& c, const TruncPoly& H3,
                                const TruncPoly& S3, const TruncPoly& H4, double tol) {
    int n = static_cast<int>(c.size());
    NormalForm nf;
    nf.modes = modes;
    nf.c = c;
    nf.H3c = H3;
    nf.H4c = H4;
    nf.S3 = S3;
    nf.freq.resize(n);
    for (int k = 0; k < n; ++k) nf.freq[k] = modes[k].signed_freq();
    TruncPoly h34(H3.nvars(), 4);
    for (int k = 0; k < n; ++k) h34 += poly_partial(H3, k) * poly_partial(S3, n + k);
    TruncPoly G = poly_grade(H4, 4) + poly_grade(h34, 4);
    nf.K4 = TruncPoly(H3.nvars(), 4);
    nf.S4 = homological(c, G, tol, true, &nf.K4);
    nf.omega_jk = Mat::Zero(n, n);
    for (const auto& [e, C] : nf.K4.terms()) {
        std::vector<int> idx;
        for (int k = 0; k < n; ++k)
            for (int r = 0; r < e[k]; ++r) idx.push_back(k);
        int j = idx[0], k = idx[1];
        cplx w = j == k ? 2.0 * C * kappa(modes[j]) * kappa(modes[j]) : C * kappa(modes[j]) * kappa(modes[k]);
        nf.omega_imag = std::max(nf.omega_imag, std::abs(w.imag()));
        nf.omega_jk(j, k) = nf.omega_jk(k, j) = w.real();
    }
    for (int k = 0; k < n; ++k)
        if (modes[k].elliptic) nf.center.push_back(k);
    return nf;
}

TruncPoly transformed_hamiltonian(const TruncPoly& Hc, const TruncPoly& S) {
    int nv = Hc.nvars(), n = nv / 2, deg = Hc.max_degree();
    auto var = [&](int i) { return TruncPoly::variable(nv, deg, i); };
    std::vector<TruncPoly> Su, Se;
    for (int k = 0; k < n; ++k) {
        Su.push_back(poly_partial(S, k));
        Se.push_back(poly_partial(S, n + k));
    }
    // eta = v - dS/du(u, eta)
    std::vector<TruncPoly> eta;
    for (int k = 0; k < n; ++k) eta.push_back(var(n + k));
    for (int it = 0; it < deg; ++it) {
        std::vector<TruncPoly> sub;
        for (int k = 0; k < n; ++k) sub.push_back(var(k));
        for (int k = 0; k < n; ++k) sub.push_back(eta[k]);
        std::vector<TruncPoly> next;
        for (int k = 0; k < n; ++k) next.push_back(var(n + k) - poly_compose(Su[k], sub));
        eta = next;
    }
    std::vector<TruncPoly> sub;
    for (int k = 0; k < n; ++k) sub.push_back(var(k));
    for (int k = 0; k < n; ++k) sub.push_back(eta[k]);
    std::vector<TruncPoly> full;
    for (int k = 0; k < n; ++k) full.push_back(var(k) + poly_compose(Se[k], sub));
    for (int k = 0; k < n; ++k) full.push_back(eta[k]);
    return poly_compose(Hc, full);
}

NormalForm normalize(const HamiltonianExpansion& h, const NormalFormOptions& opt) {
    return normalize(h, diagonalize(h, opt.closed_form_chart), opt);
}

NormalForm normalize(const HamiltonianExpansion& h, const SymplecticChart& ch, const NormalFormOptions& opt) {
    int n = ch.n;
    CMat M = ch.full();
    TruncPoly H3c = to_chart(h.H3, M);
    TruncPoly H4c = to_chart(h.H4, M);
    std::vector<cplx> c(n);
    for (int k = 0; k < n; ++k) {
        const Mode& m = ch.freq.modes[k];
        c[k] = m.elliptic ? cplx(0.0, m.signed_freq()) : cplx(m.freq, 0.0);
    }
    double tol = opt.small_divisor * ch.freq.modes[0].freq;
    TruncPoly S3 = solve_s3(c, H3c, tol);
    NormalForm nf = solve_s4_and_extract(ch.freq.modes, c, H3c, S3, H4c, tol);
    if (opt.verify && 2 * n <= opt.verify_max_vars) {
        TruncPoly H2c = to_chart(h.H2, M);
        TruncPoly K = transformed_hamiltonian(H2c + H3c + H4c, S3 + nf.S4);
        double s3 = std::max(poly_norm(H3c), 1e-300);
        // grade-4 rounding is driven by both H4 and the H3 x S3 cross terms
        double s4 = std::max(poly_norm(H4c) + poly_norm(H3c) * poly_norm(S3), 1e-300);
        nf.residual3 = poly_norm(poly_grade(K, 3)) / s3;
        nf.residual4 = poly_distance(poly_grade(K, 4), nf.K4) / s4;
    }
    auto cr = restrict_center(nf);
    nf.det_center = degeneracy_verdict(cr).first;
    return nf;
}

CenterRestriction restrict_center(const NormalForm& nf) {
    CenterRestriction cr;
    cr.indices = nf.center;
    int d = static_cast<int>(cr.indices.size());
    cr.reduced_freq.resize(d);
    cr.reduced_matrix.resize(d, d);
    for (int a = 0; a < d; ++a) {
        cr.reduced_freq[a] = nf.freq[cr.indices[a]];
        for (int b = 0; b < d; ++b) cr.reduced_matrix(a, b) = nf.omega_jk(cr.indices[a], cr.indices[b]);
    }
    return cr;
}

std::pair<double, bool> degeneracy_verdict(const Mat& m, double threshold) {
    double det = m.rows() == 0 ? 1.0 : m.determinant();
    return {det, std::abs(det) > threshold};
}

std::pair<double, bool> degeneracy_verdict(const CenterRestriction& cr, double threshold) {
    return degeneracy_verdict(cr.reduced_matrix, threshold);
}

bool in_omega_ps(double beta, double m1) {
    if (!(beta > 0 && beta < 1.0 / 27)) return false;
    for (double b : {1.0 / 75, 32.0 / 2187, 16.0 / 675, 1.0 / 36, 64.0 / 1875})
        if (std::abs(beta - b) <= 1e-12 * b) return false;
    if (!(m1 > (std::sqrt(69.0) + 9) / 18 && m1 < 1.0)) return false;
    // membership in the mass triangle
    return beta - m1 * (1 - m1) > 0 && 4 * beta <= 1 + 2 * m1 - 3 * m1 * m1 + 1e-14;
}

// the five terms cancel by up to ten decades near the degeneracy curve, so they are summed in extended precision
#ifdef __SIZEOF_FLOAT128__
using wide = __float128;
#else
using wide = long double;
#endif

double lagrange_fdeg(double bd, double m1d) {
    const wide b = bd, m1 = m1d;
    auto P = [&](std::initializer_list<double> c) {
        wide s = 0;
        for (auto it = std::rbegin(c); it != std::rend(c); ++it) s = s * b + *it;
        return s;
    };
    wide u = 1 - 36 * b;
    wide t0 = 2 * u * u / 3 * P({-47632, -9896841, 178185258, 52542675}) * b * b * b * b;
    wide t1 = -11 * P({-59392, 6417616, -243771759, 4055047758, -40790893923, 397050199920}) * b * b * b * m1;
    wide t2 = P({-1857536, 250520816, -13039336341, 327340481715, -3995019640449, 19309935720393, 5465578392450}) *
              b * b * m1 * m1;
    wide t3 = P({2408448, -359200768, 20645100208, -562788423405, 7048034089254, -29436067209393,
                 -15298708984020}) *
              b * m1 * m1 * m1;
    wide t4 = 3 * P({-401408, 59975680, -3452615664, 94244985459, -1182106602432, 4980794507091, 1821859464150}) *
              m1 * m1 * m1 * m1 * (2 * b + m1 * m1 - 2 * m1 + 1);
    return static_cast<double>(t0 + t1 + t2 + t3 + t4);
}

LagrangeOracle oracle_lagrange(double beta, double m1) {
    if (!in_omega_ps(beta, m1)) throw DomainError("(beta, m1) outside the admissible mass set");
    auto m = lagrange_masses(beta, m1);
    LagrangeOracle o;
    o.beta = beta;
    o.m1 = m[0];
    o.m2 = m[1];
    o.m3 = m[2];
    double b = beta, g = std::sqrt(1 - 27 * b), mmm = m[0] * m[1] * m[2];
    o.gamma = g;
    o.w00 = -3.0;
    o.w01 = -std::sqrt(g + 1) * (21 * g * g * g - 40 * g * g + 15 * g + 4) /
            (12 * std::sqrt(6.0) * std::sqrt(b) * g * (2 * g - 1));
    o.w02 = -std::sqrt(g + 1) * (21 * g * g + 19 * g - 4) / (4 * std::sqrt(2.0) * g * (2 * g + 1));
    double A = 360855 * b * b - 32265 * b + 624;
    o.w12 = std::sqrt(3 * b) / (4 * (18225 * b * b - 1107 * b + 16) * mmm) *
            (A * std::pow(m1, 3) - A * m1 * m1 + 3 * b * (120285 * b * b - 10755 * b + 208) * m1 -
             4 * b * b * (432 * b + 43));
    double g2 = g * g, g3 = g2 * g, g4 = g3 * g, b3 = b * b * b;
    o.w11 = (g - 1) * (1211 * g4 - 1336 * g3 + 279 * g2 + 158 * g - 76) / (72 * g2 * (10 * g2 - 11 * g + 3)) -
            3 * b3 * (31 * g2 + 286 * g - 236) / (8 * (g - 1) * g2 * (5 * g - 3) * mmm);
    o.w22 = -(g + 1) * (1211 * g4 + 1336 * g3 + 279 * g2 - 158 * g - 76) / (72 * g2 * (10 * g2 + 11 * g + 3)) -
            3 * b3 * (31 * g2 - 286 * g - 236) / (8 * g2 * (g + 1) * (5 * g + 3) * mmm);
    o.fdeg = lagrange_fdeg(b, m1);
    o.det = -27 * b / (128 * std::pow(16 - 675 * b, 2) * std::pow(1 - 36 * b, 2) * g4 * mmm * mmm) * o.fdeg;
    return o;
}

EulerOracle oracle_euler3(double lam, double l6, double a30, double a4) {
    double r = l6 / lam;
    double t = 0.25 * (5 - 9 * r) + 0.75 * std::sqrt(9 * r * r - 10 * r + 1);
    EulerOracle o;
    o.tau = t;
    auto P = [&](std::vector<double> c) { return poly_eval_horner(c, t); };
    o.w00 = -3.0;
    o.w01 = -(2 * t - 1) * std::sqrt((2 * t * t + 7 * t - 4) / t) * P({-28, -76, 41, 42, 7}) /
            ((t - 1) * P({2, 7, 2}) * P({-16, 19, 8}));
    double first = P({128, -1140, 2640, -2739, 454, 1436, 58, -125, -16}) /
                   (2 * std::pow(t - 1, 2) * t * (t + 4) * (2 * t - 1) * P({-16, 19, 8}));
    double inner = 9 * a30 * a30 * t * P({-120, 140, -472, 544, 434, 131, 28}) / ((4 * t + 1) * P({-6, 7, 4})) -
                   a4 * lam * (t + 4) * P({8, 0, 24, 8, 3});
    double second = 27 * t * inner / (8 * lam * lam * std::pow(t + 4, 2) * (2 * t - 1) * std::pow(t * t - 1, 2));
    o.w11 = first + second;
    o.det = o.w00 * o.w11 - o.w01 * o.w01;
    double d1 = -(t + 4) * std::pow(2 * t - 1, 3) * std::pow(P({-28, -76, 41, 42, 7}), 2) /
                (std::pow(t - 1, 2) * t * std::pow(P({2, 7, 2}), 2) * std::pow(P({-16, 19, 8}), 2));
    double pref = 3.0 / (8 * lam * lam * t * std::pow(t + 4, 2) * (2 * t - 1) * (4 * t + 1) *
                         std::pow(t * t - 1, 2) * P({-6, 7, 4}) * P({-16, 19, 8}));
    double br = -243 * a30 * a30 * t * t * t * P({1920, -4520, 9252, -16552, -384, 10502, 5513, 1580, 224}) +
                27 * a4 * lam * t * t *
                    P({3072, 5824, -17776, 20392, -54352, -16688, 49694, 45319, 19016, 4240, 384}) +
                4 * lam * lam * std::pow(t + 1, 2) *
                    P({3072, -17888, -35208, 243876, -377438, 136889, 277966, -157864, -161192, -15853, 12848,
                       3536, 256});
    o.det_closed = d1 + pref * br;
    return o;
}

double fnum(double i, double c) {
    if (!(i > 25.0 / 9.0)) throw DomainError("Delta is not real for iota <= 25/9");
    double D = std::sqrt((i - 1) * (9 * i - 25));
    double i2 = i * i, i3 = i2 * i, i4 = i3 * i, i5 = i4 * i;
    double a = 9 * (9 * D - 106) * i4 - (165 * D + 1774) * i3 + (1177 * D + 17576) * i2 - 5 * (827 * D + 7161) * i +
               4450 * (D + 5) + 243 * i5;
    double b = -81 * (7 * D - 80) * i4 + 3 * (363 * D + 4430) * i3 - (9097 * D + 131244) * i2 +
               (30667 * D + 276755) * i - 36300 * (D + 5) - 1701 * i5;
    return 3 * c * i * a + b;
}

double fnum_limit(double i) {
    return 2 * (i - 3) *
           (243 * std::pow(i, 4) - 324 * std::pow(i, 3) - 2310 * i * i + 6540 * i - 3125 +
            std::sqrt(9 * i * i - 34 * i + 25) * (81 * std::pow(i, 3) + 45 * i * i + 883 * i - 625));
}

EulerBlockOracle oracle_euler_block(double i, double c, double w, double s1, double eps) {
    if (!(i > 3.0)) throw DomainError("block oracle needs iota > 3");
    EulerBlockOracle o;
    double D = std::sqrt((i - 1) * (9 * i - 25));
    o.delta = D;
    o.fnum = fnum(i, c);
    o.fden = std::pow(D - i + 5, 2) * (D + i - 5) * (5 * (D + 3) - 3 * i) *
             std::pow((3 * D - 34) * i + 5 * (D + 5) + 9 * i * i, 3) * ((3 * D + 34) * i + 5 * (D - 5) - 9 * i * i);
    double w4 = std::pow(w, 4);
    o.w_ee = -6144 * o.fnum * i * (9 * i * i * i - 61 * i * i + 127 * i - 75) * s1 * s1 / (o.fden * w4 * eps);
    double br = 162 * std::pow(i, 4) - 1029 * std::pow(i, 3) + 2457 * i * i - 2695 * i + 825 -
                c * i * (81 * std::pow(i, 4) - 555 * std::pow(i, 3) + 1397 * i * i - 1545 * i + 550);
    o.w_eh = 9 * std::sqrt(2.0) * s1 * s1 /
             (eps * i * std::sqrt((i - 3) * i) * (9 * i * i - 34 * i + 25) * (27 * i * i - 95 * i + 50) * w4) * br;
    return o;
}

HamiltonianExpansion h_eps(double iota, double w, double s1, double s2, double eps) {
    HamiltonianExpansion h;
    h.N = 0;
    h.dof = 2;
    h.omega = w;
    h.lambda_star = w * w;
    h.constant = 0.0;
    int nv = 4, deg = 4;
    auto V = [&](int i) { return TruncPoly::variable(nv, deg, i); };
    TruncPoly x1 = V(0), x2 = V(1), y1 = V(2), y2 = V(3);
    h.H2 = 0.5 * (y1 * y1 + y2 * y2 + 2 * w * (x2 * y1 - x1 * y2) + w * w * (1 - iota) * (x1 * x1) +
                  w * w * (iota - 1) / 2 * (x2 * x2));
    double se = std::sqrt(eps);
    h.H3 = (s1 / se) * (x1 * x1 * x1) - (1.5 * s1 / se) * (x1 * x2 * x2);
    h.H4 = -(s2 / eps) * (x1 * x1 * x1 * x1 + 0.375 * (x2 * x2 * x2 * x2) - 3.0 * (x1 * x1 * x2 * x2));
    return h;
}

nlohmann::json normal_form_to_json(const NormalForm& nf) {
    nlohmann::json j;
    j["freq"] = std::vector<double>(nf.freq.data(), nf.freq.data() + nf.freq.size());
    std::vector<std::vector<double>> w(nf.omega_jk.rows());
    for (int a = 0; a < nf.omega_jk.rows(); ++a)
        for (int b = 0; b < nf.omega_jk.cols(); ++b) w[a].push_back(nf.omega_jk(a, b));
    j["omega_jk"] = w;
    j["center"] = nf.center;
    j["det_center"] = nf.det_center;
    j["resonant"] = {{"flag", nf.resonant}, {"kvec", nf.kvec}};
    j["residuals"] = {{"grade3", nf.residual3}, {"grade4_off_normal", nf.residual4}, {"omega_imag", nf.omega_imag}};
    return j;
}

}  // namespace nbre
