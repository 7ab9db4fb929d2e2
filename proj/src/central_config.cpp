#include "nbre/central_config.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nbre/errors.hpp"

namespace nbre {

std::string to_string(Normalization n) { return n == Normalization::UnitNorm ? "unit_norm" : "unit_lambda"; }

std::string to_string(ConfigKind k) {
    switch (k) {
        case ConfigKind::Lagrange: return "lagrange";
        case ConfigKind::Euler: return "euler";
        default: return "collinear";
    }
}

Normalization normalization_from_string(const std::string& s) {
    if (s == "unit_norm") return Normalization::UnitNorm;
    if (s == "unit_lambda") return Normalization::UnitLambda;
    throw DomainError("unknown normalization '" + s + "'");
}

double MassSystem::total() const { return std::accumulate(m.begin(), m.end(), 0.0); }

void MassSystem::validate() const {
    if (m.size() < 2) throw MassError("at least two bodies are required");
    int positive = 0;
    for (double x : m) {
        if (!std::isfinite(x) || x < 0.0 || (x == 0.0 && !allow_zero))
            throw MassError("masses must be positive");
        if (x > 0.0) ++positive;
    }
    if (positive < 1) throw MassError("no positive mass");
}

double CentralConfig::lambda_star() const { return lambda * std::pow(I, 1.5); }

double CentralConfig::lambda_star_k(int k) const { return eigvals[k - 1] * I; }

Vec CentralConfig::unit_vec(int k) const { return eigvecs.col(k - 1) / std::sqrt(gs[k - 1]); }

Mat mass_metric(const std::vector<double>& m) {
    int n = static_cast<int>(m.size());
    Vec d(2 * n);
    for (int k = 0; k < n; ++k) d[2 * k] = d[2 * k + 1] = m[k];
    return d.asDiagonal();
}

double potential(const Vec& r, const std::vector<double>& m) {
    int n = static_cast<int>(m.size());
    double u = 0.0;
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            double dx = r[2 * k] - r[2 * j], dy = r[2 * k + 1] - r[2 * j + 1];
            double d = std::hypot(dx, dy);
            if (d == 0.0) throw SingularityError("collision in configuration");
            u += m[j] * m[k] / d;
        }
    return u;
}

double moment_of_inertia(const Vec& r, const std::vector<double>& m) {
    double s = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) s += m[k] * (r[2 * k] * r[2 * k] + r[2 * k + 1] * r[2 * k + 1]);
    return s;
}

Vec potential_gradient(const Vec& r, const std::vector<double>& m) {
    int n = static_cast<int>(m.size());
    Vec g = Vec::Zero(2 * n);
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            double dx = r[2 * k] - r[2 * j], dy = r[2 * k + 1] - r[2 * j + 1];
            double d = std::hypot(dx, dy);
            if (d == 0.0) throw SingularityError("collision in configuration");
            double f = m[j] * m[k] / (d * d * d);
            g[2 * k] -= f * dx;
            g[2 * k + 1] -= f * dy;
            g[2 * j] += f * dx;
            g[2 * j + 1] += f * dy;
        }
    return g;
}

Mat potential_hessian(const Vec& r, const std::vector<double>& m) {
    int n = static_cast<int>(m.size());
    Mat B = Mat::Zero(2 * n, 2 * n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            if (j == k) continue;
            Eigen::Vector2d d(r[2 * k] - r[2 * j], r[2 * k + 1] - r[2 * j + 1]);
            double rr = d.norm();
            if (rr == 0.0) throw SingularityError("collision in configuration");
            Eigen::Matrix2d blk =
                m[j] * m[k] / (rr * rr * rr) * (Eigen::Matrix2d::Identity() - 3.0 * d * d.transpose() / (rr * rr));
            B.block<2, 2>(2 * j, 2 * k) = blk;
            B.block<2, 2>(2 * k, 2 * k) -= blk;
        }
    return B;
}

Vec perp(const Vec& r) {
    Vec p(r.size());
    for (int k = 0; k < r.size() / 2; ++k) {
        p[2 * k] = -r[2 * k + 1];
        p[2 * k + 1] = r[2 * k];
    }
    return p;
}

double config_residual(const CentralConfig& c) {
    Vec g = potential_gradient(c.r, c.masses);
    double res = 0.0;
    for (int k = 0; k < c.N(); ++k)
        for (int a = 0; a < 2; ++a)
            res = std::max(res, std::abs(g[2 * k + a] + c.lambda * c.masses[k] * c.r[2 * k + a]));
    return res;
}

namespace {

double mass_dot(const Vec& a, const Vec& b, const std::vector<double>& m) {
    double s = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) s += m[k] * (a[2 * k] * b[2 * k] + a[2 * k + 1] * b[2 * k + 1]);
    return s;
}

void fix_sign(Eigen::Ref<Vec> v) {
    double mx = v.cwiseAbs().maxCoeff();
    for (int i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) > 1e-12 * mx) {
            if (v[i] < 0) v = -v;
            return;
        }
}

void fill_trivial_basis(CentralConfig& c) {
    int n = c.N(), d = 2 * n;
    c.eigvecs = Mat::Zero(d, d);
    c.eigvals = Vec::Zero(d);
    c.gs = Vec::Zero(d);
    for (int k = 0; k < n; ++k) {
        c.eigvecs(2 * k, 0) = 1.0;
        c.eigvecs(2 * k + 1, 1) = 1.0;
    }
    c.eigvecs.col(2) = c.r;
    c.eigvecs.col(3) = perp(c.r);
    double mt = std::accumulate(c.masses.begin(), c.masses.end(), 0.0);
    c.gs[0] = c.gs[1] = mt;
    c.gs[2] = c.gs[3] = c.I;
    c.eigvals[0] = c.eigvals[1] = std::sqrt(c.I) * c.lambda;
}

void finish_config(CentralConfig& c) {
    c.I = moment_of_inertia(c.r, c.masses);
}

}  // namespace

Mat hessian_gradient_map(const CentralConfig& c) {
    for (double x : c.masses)
        if (x <= 0.0) throw MassError("gradient map needs positive masses");
    int d = 2 * c.N();
    Mat M = mass_metric(c.masses);
    Mat Minv = M.inverse();
    Mat B = potential_hessian(c.r, c.masses);
    double sI = std::sqrt(c.I);
    return sI * (c.lambda * Mat::Identity(d, d) + Minv * B) - 3.0 * c.lambda / sI * c.r * c.r.transpose() * M;
}

void dense_eigenbasis(CentralConfig& c) {
    int n = c.N(), d = 2 * n;
    fill_trivial_basis(c);
    if (n < 3) return;
    Mat Dm = hessian_gradient_map(c);
    Mat M = mass_metric(c.masses);
    Vec sq = M.diagonal().cwiseSqrt();
    Mat Hs = sq.asDiagonal() * Dm * sq.cwiseInverse().asDiagonal();
    Hs = 0.5 * (Hs + Hs.transpose()).eval();
    Mat fixed(d, 4);
    for (int k = 0; k < 4; ++k) fixed.col(k) = sq.asDiagonal() * c.eigvecs.col(k);
    Eigen::HouseholderQR<Mat> qr(fixed);
    Mat Qfull = qr.householderQ() * Mat::Identity(d, d);
    Mat Qc = Qfull.rightCols(d - 4);
    Mat C = Qc.transpose() * Hs * Qc;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (C + C.transpose()));
    Mat V = sq.cwiseInverse().asDiagonal() * (Qc * es.eigenvectors());
    Vec ev = es.eigenvalues();

    bool collinear = true;
    for (int k = 0; k < n; ++k)
        if (std::abs(c.r[2 * k + 1]) > 1e-13 * c.r.cwiseAbs().maxCoeff()) collinear = false;

    std::vector<int> picked;
    if (collinear) {
        for (int i = 0; i < d - 4; ++i) {
            double ysum = 0.0, xsum = 0.0;
            for (int k = 0; k < n; ++k) {
                xsum += std::abs(V(2 * k, i));
                ysum += std::abs(V(2 * k + 1, i));
            }
            if (xsum > ysum) picked.push_back(i);
        }
        std::sort(picked.begin(), picked.end(), [&](int a, int b) { return ev[a] < ev[b]; });
        for (std::size_t j = 0; j < picked.size(); ++j) {
            Vec v = Vec::Zero(d);
            for (int k = 0; k < n; ++k) v[2 * k] = V(2 * k, picked[j]);
            v /= std::sqrt(mass_dot(v, v, c.masses));
            fix_sign(v);
            int col = 4 + 2 * static_cast<int>(j);
            c.eigvecs.col(col) = v;
            c.eigvecs.col(col + 1) = perp(v);
            c.eigvals[col] = ev[picked[j]];
            c.eigvals[col + 1] = 1.5 * std::sqrt(c.I) * c.lambda - 0.5 * ev[picked[j]];
        }
    } else if (n == 3) {
        Vec v = V.col(0);
        fix_sign(v);
        c.eigvecs.col(4) = v;
        c.eigvecs.col(5) = perp(v);
        c.eigvals[4] = ev[0];
        c.eigvals[5] = ev[1];
    } else {
        for (int i = 0; i < d - 4; ++i) {
            Vec v = V.col(i);
            fix_sign(v);
            c.eigvecs.col(4 + i) = v;
            c.eigvals[4 + i] = ev[i];
        }
    }
    for (int k = 4; k < d; ++k) c.gs[k] = mass_dot(c.eigvecs.col(k), c.eigvecs.col(k), c.masses);
}

std::array<double, 3> lagrange_masses(double beta, double m1) {
    // factored forms keep the small masses accurate when m1 is close to 1
    double u = 1.0 - m1;
    double disc = u * (1.0 + 3.0 * m1) - 4.0 * beta;
    double prod = beta - m1 * u;
    if (!(beta > 0.0 && beta <= 1.0 / 3.0 + 1e-15) || !(m1 > 0.0 && m1 < 1.0) || disc < -1e-14 || prod <= 0.0)
        throw DomainError("(beta, m1) outside the mass triangle");
    double s = std::sqrt(std::max(disc, 0.0));
    double m2 = 0.5 * (u + s);
    double m3 = prod / m2;
    return {m1, m2, m3};
}

CentralConfig solve_lagrange(const MassSystem& ms) {
    if (ms.N() != 3) throw MassError("Lagrange configuration needs three bodies");
    for (double x : ms.m)
        if (!(x > 0.0) || !std::isfinite(x)) throw MassError("masses must be positive");
    double mt = ms.total();
    double m1 = ms.m[0] / mt, m2 = ms.m[1] / mt, m3 = ms.m[2] / mt;
    double beta = m1 * m2 + m2 * m3 + m1 * m3;
    double alpha = std::sqrt(std::max(0.0, 1.0 - 3.0 * beta));
    double sb = std::sqrt(beta), s3 = std::sqrt(3.0);

    CentralConfig c;
    c.kind = ConfigKind::Lagrange;
    c.norm = Normalization::UnitNorm;
    c.masses = {m1, m2, m3};
    c.r.resize(6);
    c.r << -s3 * m3 / (2 * sb), (2 * m2 + m3) / (2 * sb), -s3 * m3 / (2 * sb), -(2 * m1 + m3) / (2 * sb),
        s3 * (m1 + m2) / (2 * sb), -(m1 - m2) / (2 * sb);
    c.lambda = std::pow(beta, 1.5);
    finish_config(c);
    fill_trivial_basis(c);

    double l5 = 1.5 * (1.0 - alpha) * c.lambda, l6 = 1.5 * (1.0 + alpha) * c.lambda;
    Vec e5(6);
    double pref = std::sqrt(3.0 * m1 * m2 / (4.0 * beta * m3 * (2.0 * alpha * alpha + alpha - 3.0 * alpha * m2)));
    e5 << (m1 - m3) / (m1 / m3), (3 * m2 - 2 * alpha - 1) / (s3 * m1 / m3), (m2 - alpha - m1) / (m2 / m3),
        (alpha + 3 * m3 - 1) / (s3 * m2 / m3), alpha - m2 + m3, (alpha + 3 * m1 - 1) / s3;
    e5 *= pref;

    Mat Dm = hessian_gradient_map(c);
    bool ok = e5.allFinite() && e5.norm() > 0.0;
    if (ok) {
        double nrm = std::sqrt(mass_dot(e5, e5, c.masses));
        ok = nrm > 1e-8;
        if (ok) {
            e5 /= nrm;
            ok = (Dm * e5 - l5 * e5).norm() <= 1e-9 * std::max(1.0, c.lambda);
        }
    }
    if (!ok) {
        dense_eigenbasis(c);
        return c;
    }
    fix_sign(e5);
    c.eigvecs.col(4) = e5;
    c.eigvecs.col(5) = perp(e5);
    c.eigvals[4] = l5;
    c.eigvals[5] = l6;
    c.gs[4] = c.gs[5] = 1.0;
    return c;
}

CollinearSpectrum collinear_spectrum(const Vec& xi, const std::vector<double>& m, double lambda) {
    int n = static_cast<int>(m.size());
    CollinearSpectrum s;
    s.xi = xi;
    s.D = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        s.D(k, k) = lambda;
        for (int j = 0; j < n; ++j) {
            if (j == k) continue;
            double r = std::abs(xi[j] - xi[k]);
            double f = 2.0 * m[j] / (r * r * r);
            s.D(k, j) = -f;
            s.D(k, k) += f;
        }
    }
    Eigen::EigenSolver<Mat> es(s.D);
    Vec ev = es.eigenvalues().real();
    Mat V = es.eigenvectors().real();
    double scale = s.D.cwiseAbs().maxCoeff();
    for (int i = 0; i < n; ++i)
        if (std::abs(es.eigenvalues()[i].imag()) > 1e-9 * scale) throw ClassificationError("complex collinear spectrum");
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return ev[a] < ev[b]; });
    s.iotas.resize(n);
    s.evecs.resize(n, n);
    for (int j = 0; j < n; ++j) {
        s.iotas[j] = ev[idx[j]] / lambda;
        Vec v = V.col(idx[j]);
        if (j == 0) {
            v = Vec::Ones(n);
        } else if (j == 1) {
            v = xi;
        } else {
            double mn = 0.0;
            for (int k = 0; k < n; ++k) mn += m[k] * v[k] * v[k];
            v /= mn > 1e-300 ? std::sqrt(mn) : v.norm();
            fix_sign(v);
        }
        s.evecs.col(j) = v;
    }
    return s;
}

namespace {

Vec collinear_F(const Vec& xi, const std::vector<double>& m) {
    int n = static_cast<int>(m.size());
    Vec F = xi;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            if (j == k) continue;
            double d = xi[j] - xi[k];
            F[k] += m[j] * d / std::pow(std::abs(d), 3);
        }
    return F;
}

Mat collinear_J(const Vec& xi, const std::vector<double>& m) {
    int n = static_cast<int>(m.size());
    Mat D = Mat::Identity(n, n);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            if (j == k) continue;
            double r = std::abs(xi[j] - xi[k]);
            double f = 2.0 * m[j] / (r * r * r);
            D(k, j) = -f;
            D(k, k) += f;
        }
    return D;
}

bool ordered(const Vec& xi) {
    for (int k = 1; k < xi.size(); ++k)
        if (!(xi[k] > xi[k - 1])) return false;
    return true;
}

void center(Vec& xi, const std::vector<double>& m) {
    double mt = 0.0, s = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
        mt += m[k];
        s += m[k] * xi[k];
    }
    if (mt > 0) xi.array() -= s / mt;
}

void rescale_virial(Vec& xi, const std::vector<double>& m) {
    int n = static_cast<int>(m.size());
    double u = 0.0, I = 0.0;
    for (int j = 0; j < n; ++j) {
        I += m[j] * xi[j] * xi[j];
        for (int k = j + 1; k < n; ++k) u += m[j] * m[k] / std::abs(xi[k] - xi[j]);
    }
    if (u > 0 && I > 0) xi *= std::cbrt(u / I);
}

Vec guess_cascade(const std::vector<double>& m) {
    int n = static_cast<int>(m.size());
    Vec xi = Vec::Zero(n);
    xi[1] = std::cbrt(m[0] + m[1]);
    for (int k = 2; k < n; ++k) xi[k] = xi[k - 1] + std::cbrt(m[k - 1] / std::pow(3.0, k - 1));
    center(xi, m);
    return xi;
}

Vec guess_uniform(const std::vector<double>& m) {
    int n = static_cast<int>(m.size());
    Vec xi(n);
    for (int k = 0; k < n; ++k) xi[k] = k - 0.5 * (n - 1);
    center(xi, m);
    rescale_virial(xi, m);
    return xi;
}

struct NewtonResult {
    bool ok = false;
    bool order_fail = false;
    Vec xi;
    double res = 0.0;
};

NewtonResult newton(Vec xi, const std::vector<double>& m, const CollinearOptions& opt) {
    NewtonResult out;
    if (!ordered(xi) || !xi.allFinite()) {
        out.order_fail = true;
        return out;
    }
    Vec F = collinear_F(xi, m);
    double phi = F.squaredNorm();
    int order_budget = opt.order_retries;
    for (int it = 0; it < opt.max_iter; ++it) {
        double scale = 1.0 + xi.cwiseAbs().maxCoeff();
        if (F.cwiseAbs().maxCoeff() <= opt.tol * scale) {
            out.ok = true;
            break;
        }
        Vec step = collinear_J(xi, m).partialPivLu().solve(-F);
        double a = 1.0;
        bool accepted = false;
        for (int h = 0; h < 60; ++h, a *= 0.5) {
            Vec trial = xi + a * step;
            if (!ordered(trial)) {
                if (--order_budget < 0) {
                    out.order_fail = true;
                    out.xi = xi;
                    return out;
                }
                continue;
            }
            Vec Ft = collinear_F(trial, m);
            double pt = Ft.squaredNorm();
            if (pt < (1.0 - 1e-4 * a) * phi || pt == 0.0) {
                xi = trial;
                F = Ft;
                phi = pt;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // stagnation at round-off level counts as converged
            out.ok = F.cwiseAbs().maxCoeff() <= 1e3 * opt.tol * scale;
            break;
        }
    }
    out.xi = xi;
    out.res = F.cwiseAbs().maxCoeff();
    if (!out.ok) out.ok = out.res <= opt.tol * (1.0 + xi.cwiseAbs().maxCoeff());
    return out;
}

}  // namespace

std::pair<CentralConfig, CollinearSpectrum> solve_collinear(const MassSystem& ms, const CollinearOptions& opt) {
    ms.validate();
    const auto& m = ms.m;
    int n = ms.N();
    if (m[0] <= 0.0 || m[1] <= 0.0) throw MassError("the first two bodies must carry mass");

    bool cascade_ok = true;
    for (int k = 2; k < n; ++k)
        if (!(m[k - 1] > 0.0)) cascade_ok = false;

    NewtonResult best;
    bool any_order_fail = false;
    std::vector<Vec> guesses;
    if (cascade_ok) guesses.push_back(guess_cascade(m));
    guesses.push_back(guess_uniform(m));
    for (auto& g : guesses) {
        best = newton(g, m, opt);
        any_order_fail |= best.order_fail;
        if (best.ok) break;
    }
    if (!best.ok) {
        // homotopy from equal masses
        double mean = std::accumulate(m.begin(), m.end(), 0.0) / n;
        std::vector<double> mh(n, mean);
        NewtonResult cur = newton(guess_uniform(mh), mh, opt);
        const int steps = 40;
        for (int s = 1; s <= steps && cur.ok; ++s) {
            double t = static_cast<double>(s) / steps;
            for (int k = 0; k < n; ++k) mh[k] = (1 - t) * mean + t * m[k];
            cur = newton(cur.xi, mh, opt);
            any_order_fail |= cur.order_fail;
        }
        best = cur;
    }
    if (!best.ok) {
        if (any_order_fail && best.order_fail) throw OrderError("collinear Newton could not keep the body ordering");
        throw ConvergenceError("collinear Newton did not converge", best.res);
    }

    Vec xi = best.xi;
    CentralConfig c;
    c.kind = ConfigKind::Collinear;
    c.norm = Normalization::UnitLambda;
    c.masses = m;
    c.r = Vec::Zero(2 * n);
    for (int k = 0; k < n; ++k) c.r[2 * k] = xi[k];
    c.lambda = 1.0;
    finish_config(c);
    fill_trivial_basis(c);

    CollinearSpectrum sp = collinear_spectrum(xi, m, 1.0);
    double sI = std::sqrt(c.I);
    for (int j = 2; j < n; ++j) {
        Vec v = Vec::Zero(2 * n);
        for (int k = 0; k < n; ++k) v[2 * k] = sp.evecs(k, j);
        int col = 2 * j;
        c.eigvecs.col(col) = v;
        c.eigvecs.col(col + 1) = perp(v);
        c.eigvals[col] = sI * c.lambda * sp.iotas[j];
        c.eigvals[col + 1] = sI * c.lambda * (3.0 - sp.iotas[j]) / 2.0;
        c.gs[col] = c.gs[col + 1] = mass_dot(v, v, m);
    }
    return {c, sp};
}

CentralConfig solve_euler3(const MassSystem& ms, std::array<int, 3> order) {
    if (ms.N() != 3) throw MassError("Euler configuration needs three bodies");
    std::array<int, 3> chk = order;
    std::sort(chk.begin(), chk.end());
    if (chk != std::array<int, 3>{0, 1, 2}) throw OrderError("ordering must be a permutation of the three bodies");
    for (double x : ms.m)
        if (!(x > 0.0) || !std::isfinite(x)) throw MassError("masses must be positive");
    double mt = ms.total();
    std::vector<double> ml(3);
    for (int i = 0; i < 3; ++i) ml[i] = ms.m[order[i]] / mt;

    auto [col, sp] = solve_collinear(MassSystem(ml));
    CentralConfig c = config_scale(col, Normalization::UnitNorm);
    c.kind = ConfigKind::Euler;
    c.line_order = order;
    c.kappa = c.r[4] - c.r[0];
    c.sigma = (c.r[2] - c.r[0]) / c.kappa - 0.5;
    return c;
}

CentralConfig config_scale(const CentralConfig& c, Normalization target) {
    double s = target == Normalization::UnitNorm ? 1.0 / std::sqrt(c.I) : std::cbrt(c.lambda);
    CentralConfig o = c;
    o.norm = target;
    o.r *= s;
    o.lambda = c.lambda / (s * s * s);
    o.I = c.I * s * s;
    o.eigvals = c.eigvals / (s * s);
    o.eigvecs.col(2) *= s;
    o.eigvecs.col(3) *= s;
    o.gs[2] = o.gs[3] = o.I;
    if (std::isfinite(o.kappa)) o.kappa *= s;
    return o;
}

double asymptotic_iota(int n, const std::vector<double>& eps) {
    if (n <= 1) return 1.0;
    if (n == 2) return 3.0;
    if (eps.empty()) throw DomainError("asymptotic iota needs the leading small mass");
    double c2 = std::cbrt(1.0 / 3.0);
    return std::pow(3.0, n - 1) * (1.0 - 4.0 / 3.0 * c2 * std::cbrt(eps[0]));
}

nlohmann::json config_to_json(const CentralConfig& c) {
    auto vec = [](const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
    nlohmann::json j;
    j["kind"] = to_string(c.kind);
    j["normalization"] = to_string(c.norm);
    j["masses"] = c.masses;
    j["positions"] = vec(c.r);
    j["lambda"] = c.lambda;
    j["I"] = c.I;
    j["eigvals"] = vec(c.eigvals);
    j["g"] = vec(c.gs);
    auto ev = nlohmann::json::array();
    for (int k = 0; k < c.eigvecs.cols(); ++k) ev.push_back(vec(c.eigvecs.col(k)));
    j["eigvecs"] = ev;
    if (c.kind == ConfigKind::Euler) {
        j["sigma"] = c.sigma;
        j["kappa"] = c.kappa;
        j["line_order"] = c.line_order;
    }
    return j;
}

}  // namespace nbre
