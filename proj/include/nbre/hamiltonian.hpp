#pragma once

#include <cmath>
#include <type_traits>
#include <vector>

#include "nbre/central_config.hpp"
#include "nbre/errors.hpp"
#include "nbre/poly.hpp"

namespace nbre {

namespace detail {
template <class T>
double val(const T& v) {
    if constexpr (std::is_arithmetic_v<T>)
        return static_cast<double>(v);
    else
        return val(v.value());
}
}  // namespace detail

struct FrameCoefficients {
    int N = 0;
    int d = 0;  // 2N - 4 frame directions
    double lambda_star = 0.0;
    std::vector<double> lambda_star_k;  // k = 5..2N
    std::vector<double> a3;             // d^3, row-major
    std::vector<double> a4;             // d^4
    Mat Q;                              // q_jk = <E_j, E_k^perp>
    Mat Ehat;                           // unit eigenvectors E5..E2N as columns
    Vec E3hat;
    std::vector<double> masses;
    double time_multiplier = 1.0;  // physical time / reduced time
    double momentum_multiplier = 1.0;
    Normalization source_norm = Normalization::UnitNorm;

    double A3(int i, int j, int k) const { return a3[(i * d + j) * d + k]; }
    double A4(int h, int i, int j, int k) const { return a4[((h * d + i) * d + j) * d + k]; }
};

// d^n U at r along the given directions (n = dirs.size() <= 4), closed form in 1/|r_ij|
double potential_directional(const Vec& r, const std::vector<double>& m, const std::vector<Vec>& dirs);

FrameCoefficients potential_expansion(const CentralConfig& c);

struct HamiltonianExpansion {
    int N = 0;
    int dof = 0;  // 1 + (2N - 4)
    double omega = 0.0;
    double constant = 0.0;
    TruncPoly H2, H3, H4;
    std::vector<double> masses;
    double lambda_star = 0.0;
    Normalization norm = Normalization::UnitNorm;
    double time_multiplier = 1.0;

    TruncPoly total() const;  // without the constant
    int nvars() const { return 2 * dof; }
    // index helpers for (x0, x5.., y0, y5..)
    int ix(int k) const { return k == 0 ? 0 : k - 4; }
    int iy(int k) const { return dof + (k == 0 ? 0 : k - 4); }
};

HamiltonianExpansion build_hamiltonian(const CentralConfig& c, const FrameCoefficients& f);

nlohmann::json hamiltonian_to_json(const HamiltonianExpansion& h);

// Exact reduced dynamics at the unit-norm scale. Velocity state layout:
// (x0, x_5..x_2N, x0dot, x_5dot..x_2Ndot) with x0 unshifted (x0 = 1 at equilibrium).
class ReducedSystem {
public:
    ReducedSystem() = default;
    explicit ReducedSystem(const FrameCoefficients& f, double J = -1.0);

    int d() const { return d_; }
    int dim() const { return 2 * (d_ + 1); }
    double J() const { return J_; }
    double omega() const { return omega_; }
    const Mat& Q() const { return Q_; }

    template <class T>
    T potential(const Eigen::Matrix<T, Eigen::Dynamic, 1>& x) const;
    template <class T>
    void potential_and_gradient(const Eigen::Matrix<T, Eigen::Dynamic, 1>& x, T& U,
                                Eigen::Matrix<T, Eigen::Dynamic, 1>& g) const;

    template <class T>
    Eigen::Matrix<T, Eigen::Dynamic, 1> rhs(const Eigen::Matrix<T, Eigen::Dynamic, 1>& s) const;
    // canonical (x0, x, y0, y), unshifted x0
    template <class T>
    Eigen::Matrix<T, Eigen::Dynamic, 1> canonical_rhs(const Eigen::Matrix<T, Eigen::Dynamic, 1>& z) const;

    Vec momenta(const Vec& s) const;        // velocity state -> canonical state
    Vec velocities(const Vec& z) const;     // canonical state -> velocity state
    double energy(const Vec& s) const;
    double hamiltonian(const Vec& z) const;
    double theta_dot(const Vec& s) const;

    // Cartesian positions and velocities (interleaved, 2N each) at rotation angle theta
    void to_cartesian(const Vec& s, double theta, Vec& r, Vec& v) const;
    // inverse map; returns the velocity state and sets theta
    Vec from_cartesian(const Vec& r, const Vec& v, double& theta) const;
    double angular_momentum(const Vec& r, const Vec& v) const;

private:
    int d_ = 0;
    int N_ = 0;
    double J_ = 0.0;
    double omega_ = 0.0;
    double lambda_star_ = 0.0;
    Mat Q_;
    Mat Ehat_;
    Vec E3_;
    std::vector<double> m_;

    template <class T>
    void check_chart(const T& x0, const T& c) const;
};

template <class T>
void ReducedSystem::check_chart(const T& x0, const T& c) const {
    if (!(detail::val(c) > 1e-12)) throw ChartError("state left the moving-frame chart");
    if (!(detail::val(x0) > 0.0)) throw SingularityError("x0 must stay positive");
}

template <class T>
void ReducedSystem::potential_and_gradient(const Eigen::Matrix<T, Eigen::Dynamic, 1>& x, T& U,
                                           Eigen::Matrix<T, Eigen::Dynamic, 1>& g) const {
    using std::sqrt;
    using VT = Eigen::Matrix<T, Eigen::Dynamic, 1>;
    T s = x.squaredNorm();
    T x3 = sqrt(T(1.0) - s);
    int n2 = 2 * N_;
    VT z(n2);
    for (int a = 0; a < n2; ++a) {
        z[a] = x3 * E3_[a];
        for (int k = 0; k < d_; ++k) z[a] += x[k] * Ehat_(a, k);
    }
    U = T(0.0);
    VT gz = VT::Zero(n2);
    for (int p = 0; p < N_; ++p)
        for (int q = p + 1; q < N_; ++q) {
            T dx = z[2 * q] - z[2 * p], dy = z[2 * q + 1] - z[2 * p + 1];
            T r2 = dx * dx + dy * dy;
            T r = sqrt(r2);
            if (detail::val(r) == 0.0) throw SingularityError("collision in reduced state");
            T mm = T(m_[p] * m_[q]);
            U += mm / r;
            T f = mm / (r2 * r);
            gz[2 * q] -= f * dx;
            gz[2 * q + 1] -= f * dy;
            gz[2 * p] += f * dx;
            gz[2 * p + 1] += f * dy;
        }
    g.resize(d_);
    for (int k = 0; k < d_; ++k) {
        T acc = T(0.0);
        for (int a = 0; a < n2; ++a) acc += gz[a] * (Ehat_(a, k) - x[k] / x3 * E3_[a]);
        g[k] = acc;
    }
}

template <class T>
T ReducedSystem::potential(const Eigen::Matrix<T, Eigen::Dynamic, 1>& x) const {
    T U;
    Eigen::Matrix<T, Eigen::Dynamic, 1> g;
    potential_and_gradient(x, U, g);
    return U;
}

template <class T>
Eigen::Matrix<T, Eigen::Dynamic, 1> ReducedSystem::rhs(const Eigen::Matrix<T, Eigen::Dynamic, 1>& st) const {
    using VT = Eigen::Matrix<T, Eigen::Dynamic, 1>;
    using MT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
    int d = d_;
    T x0 = st[0];
    VT x = st.segment(1, d);
    T x0d = st[d + 1];
    VT v = st.segment(d + 2, d);
    T s = x.squaredNorm();
    T c = T(1.0) - s;
    check_chart(x0, c);
    MT Qt = Q_.template cast<T>();
    VT w = Qt * x;
    VT Qv = Qt * v;
    T xv = x.dot(v);
    T wv = w.dot(v);
    // v^T M v
    T vMv = v.squaredNorm() + xv * xv / c - wv * wv;
    VT Mv = v + x * (xv / c) - w * wv;
    VT grad_vMv = v * (T(2.0) * xv / c) + x * (T(2.0) * xv * xv / (c * c)) + Qv * (T(2.0) * wv);
    // Mdot v
    T sd = T(2.0) * xv;
    VT Mdv = (v * xv + x * v.squaredNorm()) / c + x * (xv * sd / (c * c)) - Qv * w.dot(v) - w * Qv.dot(v);
    T U;
    VT gU;
    potential_and_gradient(x, U, gU);
    T J = T(J_);
    VT F = grad_vMv * (x0 * x0 / T(2.0)) - Mdv * (x0 * x0) - Mv * (T(2.0) * x0 * x0d) - Qv * (T(2.0) * J) + gU / x0;
    // M^{-1} = I - x x^T + w w^T / c
    VT acc = (F - x * x.dot(F) + w * (w.dot(F) / c)) / (x0 * x0);
    VT out(2 * (d + 1));
    out[0] = x0d;
    out.segment(1, d) = v;
    out[d + 1] = x0 * vMv + J * J / (x0 * x0 * x0) - U / (x0 * x0);
    out.segment(d + 2, d) = acc;
    return out;
}

template <class T>
Eigen::Matrix<T, Eigen::Dynamic, 1> ReducedSystem::canonical_rhs(const Eigen::Matrix<T, Eigen::Dynamic, 1>& z) const {
    using VT = Eigen::Matrix<T, Eigen::Dynamic, 1>;
    using MT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
    int d = d_;
    T x0 = z[0];
    VT x = z.segment(1, d);
    T y0 = z[d + 1];
    VT y = z.segment(d + 2, d);
    T s = x.squaredNorm();
    T c = T(1.0) - s;
    check_chart(x0, c);
    MT Qt = Q_.template cast<T>();
    VT w = Qt * x;
    T J = T(J_);
    VT p = y - w * J;
    VT v = (p - x * x.dot(p) + w * (w.dot(p) / c)) / (x0 * x0);
    T xv = x.dot(v);
    T wv = w.dot(v);
    VT Qv = Qt * v;
    T vMv = v.squaredNorm() + xv * xv / c - wv * wv;
    VT grad_vMv = v * (T(2.0) * xv / c) + x * (T(2.0) * xv * xv / (c * c)) + Qv * (T(2.0) * wv);
    T U;
    VT gU;
    potential_and_gradient(x, U, gU);
    VT out(2 * (d + 1));
    out[0] = y0;
    out.segment(1, d) = v;
    out[d + 1] = x0 * vMv + J * J / (x0 * x0 * x0) - U / (x0 * x0);
    out.segment(d + 2, d) = grad_vMv * (x0 * x0 / T(2.0)) - Qv * J + gU / x0;
    return out;
}

}  // namespace nbre
