#include "nbre/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/AutoDiff>

namespace nbre {

namespace odeint = boost::numeric::odeint;

struct Field::Poly {
    TruncPoly H;
    std::vector<CompiledPoly> grad;
    std::vector<std::vector<CompiledPoly>> hess;
    double constant = 0.0;
};

Field Field::reduced(const FrameCoefficients& f) {
    Field out;
    out.kind_ = FieldKind::Reduced;
    out.sys_ = std::make_shared<ReducedSystem>(f);
    out.dim_ = out.sys_->dim();
    return out;
}

Field Field::polynomial(const HamiltonianExpansion& h) {
    Field out;
    out.kind_ = FieldKind::Polynomial;
    out.dim_ = h.nvars();
    auto p = std::make_shared<Poly>();
    p->H = h.total();
    p->constant = h.constant;
    int n = out.dim_;
    std::vector<TruncPoly> g;
    for (int i = 0; i < n; ++i) {
        g.push_back(poly_partial(p->H, i));
        p->grad.emplace_back(g.back());
    }
    p->hess.resize(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) p->hess[i].emplace_back(poly_partial(g[i], j));
    out.poly_ = p;
    return out;
}

Vec Field::equilibrium() const {
    Vec z = Vec::Zero(dim_);
    z[0] = 1.0;
    return z;
}

Vec Field::operator()(const Vec& z) const {
    if (kind_ == FieldKind::Reduced) return sys_->canonical_rhs<double>(z);
    int n = dof();
    Vec u = z;
    u[0] -= 1.0;
    Vec out(dim_);
    for (int i = 0; i < n; ++i) {
        out[i] = poly_->grad[n + i].value(u.data());
        out[n + i] = -poly_->grad[i].value(u.data());
    }
    return out;
}

namespace {

// fixed-size derivative vectors keep constants coherent with seeded variables
template <int D>
Mat ad_jacobian(const ReducedSystem& sys, const Vec& z) {
    using AD = Eigen::AutoDiffScalar<Eigen::Matrix<double, D, 1>>;
    Eigen::Matrix<AD, Eigen::Dynamic, 1> za(D);
    for (int i = 0; i < D; ++i) za[i] = AD(z[i], D, i);
    auto r = sys.canonical_rhs<AD>(za);
    Mat J(D, D);
    for (int i = 0; i < D; ++i) J.row(i) = r[i].derivatives().transpose();
    return J;
}

}  // namespace

Mat Field::jacobian(const Vec& z) const {
    int n = dof();
    if (kind_ == FieldKind::Reduced) {
        switch (dim_) {
            case 6: return ad_jacobian<6>(*sys_, z);
            case 10: return ad_jacobian<10>(*sys_, z);
            case 14: return ad_jacobian<14>(*sys_, z);
            case 18: return ad_jacobian<18>(*sys_, z);
            default: break;
        }
        Mat J(dim_, dim_);
        for (int j = 0; j < dim_; ++j) {
            double h = 1e-6 * std::max(1.0, std::abs(z[j]));
            Vec zp = z, zm = z;
            zp[j] += h;
            zm[j] -= h;
            J.col(j) = (sys_->canonical_rhs<double>(zp) - sys_->canonical_rhs<double>(zm)) / (2 * h);
        }
        return J;
    }
    Vec u = z;
    u[0] -= 1.0;
    Mat J(dim_, dim_);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < dim_; ++j) {
            J(i, j) = poly_->hess[n + i][j].value(u.data());
            J(n + i, j) = -poly_->hess[i][j].value(u.data());
        }
    return J;
}

double Field::energy(const Vec& z) const {
    if (kind_ == FieldKind::Reduced) return sys_->hamiltonian(z);
    Vec u = z;
    u[0] -= 1.0;
    return poly_->constant + poly_->H.eval_real(u.data());
}

namespace {

using State = std::vector<double>;

void check_finite(const Vec& z) {
    if (!z.allFinite()) throw StiffnessError("integration produced non-finite values");
}

template <class Rhs>
void run_adaptive(Rhs rhs, State& y, double t, const StepControl& ctrl) {
    if (t == 0.0) return;
    try {
        auto stepper = odeint::make_controlled(ctrl.atol, ctrl.rtol, odeint::runge_kutta_fehlberg78<State>());
        double h = std::copysign(std::min(std::abs(ctrl.h0), std::abs(t)), t);
        odeint::integrate_adaptive(stepper, rhs, y, 0.0, t, h);
    } catch (const odeint::step_adjustment_error& e) {
        throw StiffnessError(std::string("step size underflow: ") + e.what());
    } catch (const odeint::no_progress_error& e) {
        throw StiffnessError(std::string("integrator made no progress: ") + e.what());
    }
}

// one step of the two-stage Gauss-Legendre collocation method
Vec gauss_step(const Field& f, const Vec& z, double h) {
    const double s3 = std::sqrt(3.0) / 6.0;
    const double a11 = 0.25, a12 = 0.25 - s3, a21 = 0.25 + s3, a22 = 0.25;
    int n = f.dim();
    Vec k1 = f(z), k2 = k1;
    Mat Jz = f.jacobian(z);
    Mat A(2 * n, 2 * n);
    A << Mat::Identity(n, n) - h * a11 * Jz, -h * a12 * Jz, -h * a21 * Jz, Mat::Identity(n, n) - h * a22 * Jz;
    Eigen::PartialPivLU<Mat> lu(A);
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 30; ++it) {
        Vec r(2 * n);
        r << k1 - f(z + h * (a11 * k1 + a12 * k2)), k2 - f(z + h * (a21 * k1 + a22 * k2));
        Vec dk = lu.solve(-r);
        k1 += dk.head(n);
        k2 += dk.tail(n);
        double d = dk.norm(), scale = 1.0 + k1.norm() + k2.norm();
        if (d <= 1e-15 * scale) break;
        // roundoff floor: corrections stopped shrinking
        if (d <= 1e-12 * scale && d >= 0.5 * prev) break;
        prev = d;
        if (it == 29) throw StiffnessError("implicit stage equations did not converge");
    }
    return z + 0.5 * h * (k1 + k2);
}

Vec run_gauss(const Field& f, Vec z, double t, const StepControl& ctrl) {
    long steps = ctrl.steps > 0 ? ctrl.steps : std::max<long>(1, std::lround(std::ceil(200.0 * std::abs(t))));
    double h = t / steps;
    for (long i = 0; i < steps; ++i) z = gauss_step(f, z, h);
    check_finite(z);
    return z;
}

}  // namespace

Vec integrate(const Field& f, const Vec& z, double t, const StepControl& ctrl) {
    if (ctrl.method == Method::GaussLegendre4) return run_gauss(f, z, t, ctrl);
    State y(z.data(), z.data() + z.size());
    auto rhs = [&](const State& u, State& du, double) {
        Vec r = f(Eigen::Map<const Vec>(u.data(), u.size()));
        du.assign(r.data(), r.data() + r.size());
    };
    run_adaptive(rhs, y, t, ctrl);
    Vec out = Eigen::Map<Vec>(y.data(), y.size());
    check_finite(out);
    return out;
}

std::vector<Vec> integrate_samples(const Field& f, const Vec& z, const std::vector<double>& times,
                                   const StepControl& ctrl) {
    std::vector<Vec> out;
    Vec cur = z;
    double t = 0.0;
    for (double tk : times) {
        cur = integrate(f, cur, tk - t, ctrl);
        t = tk;
        out.push_back(cur);
    }
    return out;
}

std::pair<Vec, Mat> integrate_variational(const Field& f, const Vec& z, double t, const StepControl& ctrl) {
    int n = f.dim();
    State y(n + n * n, 0.0);
    for (int i = 0; i < n; ++i) {
        y[i] = z[i];
        y[n + i * n + i] = 1.0;
    }
    auto rhs = [&](const State& u, State& du, double) {
        Eigen::Map<const Vec> zz(u.data(), n);
        Eigen::Map<const Mat> P(u.data() + n, n, n);
        du.resize(u.size());
        Vec r = f(zz);
        Mat dP = f.jacobian(zz) * P;
        std::copy(r.data(), r.data() + n, du.begin());
        std::copy(dP.data(), dP.data() + n * n, du.begin() + n);
    };
    run_adaptive(rhs, y, t, ctrl);
    Vec zt = Eigen::Map<Vec>(y.data(), n);
    Mat P = Eigen::Map<Mat>(y.data() + n, n, n);
    check_finite(zt);
    if (!P.allFinite()) throw StiffnessError("variational equations blew up");
    return {zt, P};
}

std::string family_name(FamilyKind k) {
    switch (k) {
        case FamilyKind::Trivial: return "trivial";
        case FamilyKind::Lyapunov: return "lyapunov";
        case FamilyKind::Weinstein: return "weinstein";
    }
    return "unknown";
}

namespace {

double anchor_value(const Field& f, const ShootConstraints& c, const Vec& z) {
    if (c.anchor == Anchor::Energy) return f.energy(z);
    return c.direction.dot(z - f.equilibrium());
}

Vec anchor_gradient(const Field& f, const ShootConstraints& c, const Vec& z) {
    if (c.anchor == Anchor::Amplitude) return c.direction;
    // grad H = -J field with J = [[0, I], [-I, 0]]
    int n = f.dof();
    Vec v = f(z), g(f.dim());
    g.head(n) = -v.tail(n);
    g.tail(n) = v.head(n);
    return g;
}

}  // namespace

PeriodicOrbit shoot_periodic(const Field& f, const Vec& guess, double period_guess, const ShootConstraints& c,
                             const ShootOptions& opt) {
    int n = f.dim();
    Vec eq = f.equilibrium();
    PeriodicOrbit orb;
    orb.family = c.family;
    orb.index = c.index;
    if (c.anchor == Anchor::Amplitude && c.value == 0.0) {
        orb.state0 = eq;
        orb.period = period_guess;
        orb.degenerate = true;
        orb.energy = f.energy(eq);
        return orb;
    }
    Vec z = guess;
    double T = period_guess;
    Vec zb = z;
    double Tb = T, best = std::numeric_limits<double>::infinity();
    int polish = 0;
    for (int it = 0; it < opt.max_iter; ++it) {
        auto [zT, P] = integrate_variational(f, z, T, opt.ctrl);
        Vec R = zT - z;
        double res = R.norm();
        double ares = anchor_value(f, c, z) - c.value;
        bool ok = std::abs(ares) < opt.tol;
        if (ok && res < best) {
            // a few extra steps past the tolerance sharpen the unit Floquet pair
            if (best < opt.tol && res > 0.1 * best) break;
            best = res;
            zb = z;
            Tb = T;
        } else if (ok && best < opt.tol) {
            break;
        }
        if (best < opt.tol && ++polish > 3) break;
        Mat A = Mat::Zero(n + 2, n + 1);
        Vec b = Vec::Zero(n + 2);
        A.topLeftCorner(n, n) = P - Mat::Identity(n, n);
        A.block(0, n, n, 1) = f(zT);
        b.head(n) = -R;
        // correction orthogonal to the flow direction
        A.block(n, 0, 1, n) = f(z).transpose();
        A.block(n + 1, 0, 1, n) = anchor_gradient(f, c, z).transpose();
        b[n + 1] = -ares;
        Vec du = A.colPivHouseholderQr().solve(b);
        double step = 1.0;
        // keep the state inside the chart
        for (int k = 0; k < 8; ++k) {
            Vec zn = z + step * du.head(n);
            try {
                f(zn);
                z = zn;
                T += step * du[n];
                break;
            } catch (const ChartError&) {
                step *= 0.5;
            } catch (const SingularityError&) {
                step *= 0.5;
            }
        }
        if (!(T > 0)) throw ConvergenceError("period became non-positive", best);
    }
    if (!(best < opt.tol)) throw ConvergenceError("Newton shooting stalled", best);
    z = zb;
    T = Tb;
    double res = best;
    orb.state0 = z;
    orb.period = T;
    orb.residual = res;
    orb.energy = f.energy(z);
    orb.amplitude = c.anchor == Anchor::Amplitude ? c.value : anchor_value(f, c, z);
    Vec dz = z - eq;
    int dof = f.dof();
    double frame = 0.0;
    for (int i = 1; i < dof; ++i) frame += dz[i] * dz[i] + dz[dof + i] * dz[dof + i];
    frame = std::sqrt(frame);
    if (dz.norm() < 1e-12) throw FamilyCollapseError("orbit collapsed onto the equilibrium");
    if (c.family != FamilyKind::Trivial && dof > 1 && frame < 1e-8 * dz.norm())
        throw FamilyCollapseError("orbit fell onto the trivial family");
    return orb;
}

Seed linear_seed(const Field& f, const SymplecticChart& chart, int mode, double amplitude, Anchor anchor) {
    int n = chart.n;
    if (mode < 0 || mode >= n) throw DimensionError("mode index out of range");
    const Mode& m = chart.freq.modes[mode];
    if (!m.elliptic) throw DomainError("periodic families need an elliptic mode");
    Mat J = symplectic_J(n);
    // T^{-1} = -J T^T J
    Mat Tinv = -J * chart.T.transpose() * J;
    Seed s;
    s.state = f.equilibrium() + amplitude * chart.T.col(mode);
    s.period = 2 * M_PI / m.freq;
    s.constraints.family = mode == 0 ? FamilyKind::Trivial : FamilyKind::Lyapunov;
    s.constraints.index = mode;
    s.constraints.direction = Tinv.row(mode).transpose();
    s.constraints.anchor = anchor;
    if (anchor == Anchor::Amplitude) {
        s.constraints.value = amplitude;
    } else {
        s.constraints.family = mode == 0 ? FamilyKind::Trivial : FamilyKind::Weinstein;
        s.constraints.value = f.energy(s.state);
    }
    return s;
}

Branch continue_family(const Field& f, const PeriodicOrbit& seed, const ShootConstraints& c, int steps, double delta,
                       const ShootOptions& opt) {
    Branch br;
    br.orbits.push_back(seed);
    ShootConstraints cc = c;
    double value = c.value;
    double d = delta;
    while (static_cast<int>(br.orbits.size()) < steps + 1) {
        const PeriodicOrbit& last = br.orbits.back();
        bool done = false;
        for (int halving = 0; halving < 4 && !done; ++halving) {
            double target = value + d;
            Vec zg = last.state0;
            double Tg = last.period;
            if (br.orbits.size() >= 2) {
                const PeriodicOrbit& prev = br.orbits[br.orbits.size() - 2];
                double span = anchor_value(f, c, last.state0) - anchor_value(f, c, prev.state0);
                if (std::abs(span) > 0) {
                    double r = d / span;
                    zg = last.state0 + r * (last.state0 - prev.state0);
                    Tg = last.period + r * (last.period - prev.period);
                }
            }
            cc.value = target;
            try {
                PeriodicOrbit o = shoot_periodic(f, zg, Tg, cc, opt);
                br.orbits.push_back(o);
                value = target;
                done = true;
            } catch (const ConvergenceError&) {
                d *= 0.5;
            } catch (const StiffnessError&) {
                d *= 0.5;
            } catch (const ChartError&) {
                d *= 0.5;
            }
        }
        if (!done) {
            br.ended = true;
            br.reason = "continuation stalled after step halving";
            break;
        }
    }
    return br;
}

FloquetResult floquet(const PeriodicOrbit& orbit, const Field& f, const StepControl& ctrl) {
    auto [zT, P] = integrate_variational(f, orbit.state0, orbit.period, ctrl);
    Eigen::EigenSolver<Mat> es(P);
    FloquetResult r;
    for (int i = 0; i < P.rows(); ++i) r.multipliers.push_back(es.eigenvalues()[i]);
    std::stable_sort(r.multipliers.begin(), r.multipliers.end(),
                     [](const std::complex<double>& a, const std::complex<double>& b) { return std::abs(a) < std::abs(b); });
    r.determinant = P.determinant();
    for (const auto& mu : r.multipliers) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& nu : r.multipliers) best = std::min(best, std::abs(mu * nu - 1.0));
        r.pairing_error = std::max(r.pairing_error, best);
        if (std::abs(mu - 1.0) < 1e-6) ++r.unit_count;
    }
    return r;
}

std::vector<std::pair<double, double>> reconstruct_theta(const ReducedSystem& sys, const Vec& z0, double t,
                                                         int samples, double theta0) {
    int n = sys.dim();
    State y(n + 1);
    for (int i = 0; i < n; ++i) y[i] = z0[i];
    y[n] = theta0;
    auto rhs = [&](const State& u, State& du, double) {
        Vec z = Eigen::Map<const Vec>(u.data(), n);
        Vec r = sys.canonical_rhs<double>(z);
        du.assign(r.data(), r.data() + n);
        du.push_back(sys.theta_dot(sys.velocities(z)));
    };
    std::vector<std::pair<double, double>> out{{0.0, theta0}};
    double dt = t / samples;
    for (int k = 1; k <= samples; ++k) {
        run_adaptive(rhs, y, dt, StepControl{});
        out.emplace_back(k * dt, y[n]);
    }
    return out;
}

double hamilton_consistency(const ReducedSystem& sys, const Vec& z) {
    Vec s = sys.velocities(z);
    Vec ds = sys.rhs<double>(s);
    double h = 1e-5;
    // D momenta(s) . ds by a fourth-order central difference along ds
    Vec dm = (-sys.momenta(s + 2 * h * ds) + 8 * sys.momenta(s + h * ds) - 8 * sys.momenta(s - h * ds) +
              sys.momenta(s - 2 * h * ds)) /
             (12 * h);
    return (dm - sys.canonical_rhs<double>(z)).norm();
}

CartesianState yoshida4(const std::vector<double>& m, CartesianState s, double h, long steps) {
    const double w1 = 1.0 / (2.0 - std::cbrt(2.0)), w0 = -std::cbrt(2.0) * w1;
    const double c[4] = {w1 / 2, (w0 + w1) / 2, (w0 + w1) / 2, w1 / 2};
    const double dk[3] = {w1, w0, w1};
    int N = static_cast<int>(m.size());
    auto kick = [&](double dt) {
        Vec g = potential_gradient(s.r, m);
        for (int k = 0; k < N; ++k) {
            s.v[2 * k] += dt * g[2 * k] / m[k];
            s.v[2 * k + 1] += dt * g[2 * k + 1] / m[k];
        }
    };
    for (long i = 0; i < steps; ++i) {
        for (int j = 0; j < 3; ++j) {
            s.r += c[j] * h * s.v;
            kick(dk[j] * h);
        }
        s.r += c[3] * h * s.v;
    }
    return s;
}

double cartesian_energy(const std::vector<double>& m, const CartesianState& s) {
    double T = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k)
        T += 0.5 * m[k] * (s.v[2 * k] * s.v[2 * k] + s.v[2 * k + 1] * s.v[2 * k + 1]);
    return T - potential(s.r, m);
}

double cartesian_angular_momentum(const std::vector<double>& m, const CartesianState& s) {
    double L = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) L += m[k] * (s.r[2 * k] * s.v[2 * k + 1] - s.r[2 * k + 1] * s.v[2 * k]);
    return L;
}

nlohmann::json orbit_to_json(const PeriodicOrbit& o) {
    nlohmann::json j;
    j["family"] = family_name(o.family);
    j["index"] = o.index;
    j["amplitude"] = o.amplitude;
    j["period"] = o.period;
    j["state0"] = std::vector<double>(o.state0.data(), o.state0.data() + o.state0.size());
    j["residual"] = o.residual;
    nlohmann::json mu = nlohmann::json::array();
    for (const auto& m : o.floquet) mu.push_back({m.real(), m.imag()});
    j["multipliers"] = mu;
    j["energy"] = o.energy;
    j["degenerate"] = o.degenerate;
    if (std::isfinite(o.dtheta)) j["dtheta"] = o.dtheta;
    return j;
}

}  // namespace nbre
