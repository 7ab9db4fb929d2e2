#include "nbre/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

namespace nbre {

namespace {

double mass_dot(const Vec& a, const Vec& b, const std::vector<double>& m) {
    double s = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) s += m[k] * (a[2 * k] * b[2 * k] + a[2 * k + 1] * b[2 * k + 1]);
    return s;
}

Eigen::Vector2d pair_diff(const Vec& u, int p, int q) {
    return {u[2 * q] - u[2 * p], u[2 * q + 1] - u[2 * p + 1]};
}

Vec rotate(const Vec& r, double th) {
    double c = std::cos(th), s = std::sin(th);
    Vec o(r.size());
    for (int k = 0; k < r.size() / 2; ++k) {
        o[2 * k] = c * r[2 * k] - s * r[2 * k + 1];
        o[2 * k + 1] = s * r[2 * k] + c * r[2 * k + 1];
    }
    return o;
}

}  // namespace

double potential_directional(const Vec& r, const std::vector<double>& m, const std::vector<Vec>& dirs) {
    int n = static_cast<int>(m.size());
    int ord = static_cast<int>(dirs.size());
    if (ord > 4) throw DomainError("directional derivatives are available up to order 4");
    double total = 0.0;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) {
            Eigen::Vector2d dv = pair_diff(r, p, q);
            double rr = dv.norm();
            if (rr == 0.0) throw SingularityError("collision in configuration");
            std::vector<Eigen::Vector2d> u;
            for (auto& w : dirs) u.push_back(pair_diff(w, p, q));
            std::vector<double> a(ord);
            for (int i = 0; i < ord; ++i) a[i] = dv.dot(u[i]);
            auto G = [&](int i, int j) { return u[i].dot(u[j]); };
            double r2 = rr * rr, r3 = r2 * rr, r5 = r3 * r2, r7 = r5 * r2, r9 = r7 * r2;
            double val = 0.0;
            switch (ord) {
                case 0: val = 1.0 / rr; break;
                case 1: val = -a[0] / r3; break;
                case 2: val = -G(0, 1) / r3 + 3.0 * a[0] * a[1] / r5; break;
                case 3:
                    val = 3.0 * (G(0, 1) * a[2] + G(0, 2) * a[1] + G(1, 2) * a[0]) / r5 - 15.0 * a[0] * a[1] * a[2] / r7;
                    break;
                case 4:
                    val = 3.0 * (G(0, 1) * G(2, 3) + G(0, 2) * G(1, 3) + G(0, 3) * G(1, 2)) / r5 -
                          15.0 *
                              (G(0, 1) * a[2] * a[3] + G(0, 2) * a[1] * a[3] + G(0, 3) * a[1] * a[2] +
                               G(1, 2) * a[0] * a[3] + G(1, 3) * a[0] * a[2] + G(2, 3) * a[0] * a[1]) /
                              r7 +
                          105.0 * a[0] * a[1] * a[2] * a[3] / r9;
                    break;
            }
            total += m[p] * m[q] * val;
        }
    return total;
}

FrameCoefficients potential_expansion(const CentralConfig& c0) {
    for (double x : c0.masses)
        if (!(x > 0.0)) throw MassError("frame expansion needs positive masses");
    CentralConfig c = c0.norm == Normalization::UnitNorm && std::abs(c0.I - 1.0) < 1e-14
                          ? c0
                          : config_scale(c0, Normalization::UnitNorm);
    FrameCoefficients f;
    f.N = c.N();
    f.d = 2 * f.N - 4;
    f.masses = c.masses;
    f.source_norm = c0.norm;
    f.time_multiplier = std::pow(c0.I, 0.75);
    f.momentum_multiplier = std::pow(c0.I, 0.25);
    f.lambda_star = c.lambda_star();
    int d = f.d, n = f.N;
    f.E3hat = c.r / std::sqrt(c.I);
    f.Ehat.resize(2 * n, d);
    f.lambda_star_k.resize(d);
    for (int k = 0; k < d; ++k) {
        f.Ehat.col(k) = c.unit_vec(k + 5);
        f.lambda_star_k[k] = c.lambda_star_k(k + 5);
    }
    f.Q.resize(d, d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) f.Q(j, k) = mass_dot(f.Ehat.col(j), perp(f.Ehat.col(k)), f.masses);

    f.a3.assign(static_cast<std::size_t>(d) * d * d, 0.0);
    f.a4.assign(static_cast<std::size_t>(d) * d * d * d, 0.0);
    std::vector<double> al(d);
    Mat G(d, d);
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) {
            Eigen::Vector2d dv = pair_diff(f.E3hat, p, q);
            double rr = dv.norm();
            if (rr == 0.0) throw SingularityError("collision in configuration");
            std::vector<Eigen::Vector2d> u(d);
            for (int i = 0; i < d; ++i) {
                u[i] = pair_diff(f.Ehat.col(i), p, q);
                al[i] = dv.dot(u[i]);
            }
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) G(i, j) = u[i].dot(u[j]);
            double mm = f.masses[p] * f.masses[q];
            double r2 = rr * rr, r5 = r2 * r2 * rr, r7 = r5 * r2, r9 = r7 * r2;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    for (int k = 0; k < d; ++k) {
                        f.a3[(i * d + j) * d + k] +=
                            mm * (3.0 * (G(i, j) * al[k] + G(i, k) * al[j] + G(j, k) * al[i]) / r5 -
                                  15.0 * al[i] * al[j] * al[k] / r7);
                        for (int h = 0; h < d; ++h) {
                            double v = 3.0 * (G(h, i) * G(j, k) + G(h, j) * G(i, k) + G(h, k) * G(i, j)) / r5 -
                                       15.0 *
                                           (G(h, i) * al[j] * al[k] + G(h, j) * al[i] * al[k] +
                                            G(h, k) * al[i] * al[j] + G(i, j) * al[h] * al[k] +
                                            G(i, k) * al[h] * al[j] + G(j, k) * al[h] * al[i]) /
                                           r7 +
                                       105.0 * al[h] * al[i] * al[j] * al[k] / r9;
                            f.a4[((h * d + i) * d + j) * d + k] += mm * v;
                        }
                    }
        }
    return f;
}

TruncPoly HamiltonianExpansion::total() const { return H2 + H3 + H4; }

HamiltonianExpansion build_hamiltonian(const CentralConfig& c, const FrameCoefficients& f) {
    HamiltonianExpansion h;
    h.N = f.N;
    h.dof = 1 + f.d;
    h.omega = std::sqrt(f.lambda_star);
    h.constant = -0.5 * f.lambda_star;
    h.masses = f.masses;
    h.lambda_star = f.lambda_star;
    h.norm = c.norm;
    h.time_multiplier = f.time_multiplier;

    int d = f.d, nv = 2 * h.dof, deg = 4;
    double w = h.omega, w2 = f.lambda_star;
    auto X = [&](int k) { return TruncPoly::variable(nv, deg, 1 + k); };
    auto Y = [&](int k) { return TruncPoly::variable(nv, deg, h.dof + 1 + k); };
    TruncPoly x0 = TruncPoly::variable(nv, deg, 0);
    TruncPoly y0 = TruncPoly::variable(nv, deg, h.dof);
    TruncPoly zero(nv, deg);

    TruncPoly s = zero, yy = zero, P = zero, xy = zero;
    for (int k = 0; k < d; ++k) {
        s += X(k) * X(k);
        yy += Y(k) * Y(k);
        xy += X(k) * Y(k);
        for (int j = 0; j < d; ++j)
            if (f.Q(k, j) != 0.0) P += f.Q(k, j) * (X(j) * Y(k));
    }
    auto bracket = [&](double div) {
        TruncPoly b = w2 * (x0 * x0) + yy - (2.0 * w) * P;
        for (int k = 0; k < d; ++k) b += (w2 - f.lambda_star_k[k] / div) * (X(k) * X(k));
        return b;
    };
    TruncPoly A3 = zero, A4 = zero;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                Exps e(nv, 0);
                e[1 + i]++;
                e[1 + j]++;
                e[1 + k]++;
                A3.add_term(e, f.A3(i, j, k));
                for (int l = 0; l < d; ++l) {
                    Exps e4 = e;
                    e4[1 + l]++;
                    A4.add_term(e4, f.A4(i, j, k, l));
                }
            }
    TruncPoly weighted = zero;
    for (int k = 0; k < d; ++k) weighted += (f.lambda_star_k[k] - 0.5 * w2) * (X(k) * X(k));

    h.H2 = 0.5 * (y0 * y0) + 0.5 * bracket(1.0);
    h.H3 = -1.0 * (x0 * bracket(2.0)) - (1.0 / 6.0) * A3;
    TruncPoly pw = P - w * s;
    h.H4 = 0.5 * (pw * pw - xy * xy) + (1.0 / 6.0) * (x0 * A3) + 1.5 * (x0 * x0 * bracket(3.0)) -
           0.75 * (s * weighted) - (1.0 / 24.0) * A4;
    h.H2 = poly_grade(h.H2, 2);
    h.H3 = poly_grade(h.H3, 3);
    h.H4 = poly_grade(h.H4, 4);
    return h;
}

nlohmann::json hamiltonian_to_json(const HamiltonianExpansion& h) {
    nlohmann::json j;
    j["metadata"] = {{"N", h.N},
                     {"masses", h.masses},
                     {"lambda_star", h.lambda_star},
                     {"omega", h.omega},
                     {"normalization", to_string(h.norm)},
                     {"time_multiplier", h.time_multiplier},
                     {"variables", "x0,x5..x2N,y0,y5..y2N"}};
    j["constant"] = h.constant;
    j["H2"] = poly_to_json(h.H2);
    j["H3"] = poly_to_json(h.H3);
    j["H4"] = poly_to_json(h.H4);
    return j;
}

ReducedSystem::ReducedSystem(const FrameCoefficients& f, double J)
    : d_(f.d), N_(f.N), Q_(f.Q), Ehat_(f.Ehat), E3_(f.E3hat), m_(f.masses) {
    lambda_star_ = f.lambda_star;
    omega_ = std::sqrt(f.lambda_star);
    J_ = J < 0.0 ? omega_ : J;
}

Vec ReducedSystem::momenta(const Vec& st) const {
    int d = d_;
    double x0 = st[0];
    Vec x = st.segment(1, d), v = st.segment(d + 2, d);
    double c = 1.0 - x.squaredNorm();
    check_chart(x0, c);
    Vec w = Q_ * x;
    Vec Mv = v + x * (x.dot(v) / c) - w * w.dot(v);
    Vec z(dim());
    z[0] = x0;
    z.segment(1, d) = x;
    z[d + 1] = st[d + 1];
    z.segment(d + 2, d) = x0 * x0 * Mv + J_ * w;
    return z;
}

Vec ReducedSystem::velocities(const Vec& z) const {
    int d = d_;
    double x0 = z[0];
    Vec x = z.segment(1, d), y = z.segment(d + 2, d);
    double c = 1.0 - x.squaredNorm();
    check_chart(x0, c);
    Vec w = Q_ * x;
    Vec p = y - J_ * w;
    Vec st(dim());
    st[0] = x0;
    st.segment(1, d) = x;
    st[d + 1] = z[d + 1];
    st.segment(d + 2, d) = (p - x * x.dot(p) + w * (w.dot(p) / c)) / (x0 * x0);
    return st;
}

double ReducedSystem::energy(const Vec& st) const {
    int d = d_;
    double x0 = st[0];
    Vec x = st.segment(1, d), v = st.segment(d + 2, d);
    double c = 1.0 - x.squaredNorm();
    check_chart(x0, c);
    Vec w = Q_ * x;
    double xv = x.dot(v), wv = w.dot(v);
    double vMv = v.squaredNorm() + xv * xv / c - wv * wv;
    double U = potential<double>(x);
    return 0.5 * st[d + 1] * st[d + 1] + 0.5 * x0 * x0 * vMv + J_ * J_ / (2 * x0 * x0) - U / x0;
}

double ReducedSystem::hamiltonian(const Vec& z) const {
    int d = d_;
    double x0 = z[0];
    Vec x = z.segment(1, d), y = z.segment(d + 2, d);
    double s = x.squaredNorm(), c = 1.0 - s;
    check_chart(x0, c);
    Vec w = Q_ * x;
    Vec p = y - J_ * w;
    double xp = x.dot(p), wp = w.dot(p);
    double U = potential<double>(x);
    return 0.5 * z[d + 1] * z[d + 1] + (J_ * J_ + p.squaredNorm() - xp * xp + wp * wp / c) / (2 * x0 * x0) - U / x0;
}

double ReducedSystem::theta_dot(const Vec& st) const {
    int d = d_;
    Vec x = st.segment(1, d), v = st.segment(d + 2, d);
    return J_ / (st[0] * st[0]) - v.dot(Q_ * x);
}

void ReducedSystem::to_cartesian(const Vec& st, double theta, Vec& r, Vec& v) const {
    int d = d_;
    double x0 = st[0], x0d = st[d + 1];
    Vec x = st.segment(1, d), xd = st.segment(d + 2, d);
    double c = 1.0 - x.squaredNorm();
    check_chart(x0, c);
    double x3 = std::sqrt(c);
    double x3d = -x.dot(xd) / x3;
    Vec zh = x3 * E3_ + Ehat_ * x;
    Vec zd = x3d * E3_ + Ehat_ * xd;
    double thd = theta_dot(st);
    r = rotate(x0 * zh, theta);
    v = rotate(x0d * zh + x0 * zd, theta) + thd * perp(r);
}

Vec ReducedSystem::from_cartesian(const Vec& r, const Vec& v, double& theta) const {
    int d = d_;
    double x0 = std::sqrt(mass_dot(r, r, m_));
    Vec rh = r / x0;
    theta = std::atan2(mass_dot(perp(E3_), r, m_), mass_dot(E3_, r, m_));
    double x0d = mass_dot(rh, v, m_);
    Vec x(d), a(d), b(d);
    Vec vt = (v - x0d * rh) / x0;
    for (int k = 0; k < d; ++k) {
        Vec ek = rotate(Ehat_.col(k), theta);
        x[k] = mass_dot(ek, rh, m_);
        a[k] = mass_dot(ek, vt, m_);
        b[k] = mass_dot(perp(ek), rh, m_);
    }
    double Jc = angular_momentum(r, v);
    Vec Qx = Q_ * x;
    double thd = (Jc / (x0 * x0) - a.dot(Qx)) / (1.0 + b.dot(Qx));
    Vec st(dim());
    st[0] = x0;
    st.segment(1, d) = x;
    st[d + 1] = x0d;
    st.segment(d + 2, d) = a + thd * b;
    return st;
}

double ReducedSystem::angular_momentum(const Vec& r, const Vec& v) const {
    double s = 0.0;
    for (int k = 0; k < N_; ++k) s += m_[k] * (r[2 * k] * v[2 * k + 1] - r[2 * k + 1] * v[2 * k]);
    return s;
}

}  // namespace nbre
