#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "nbre/spectrum.hpp"

namespace nbre {

enum class FieldKind { Reduced, Polynomial };

// Hamiltonian vector field on canonical states (x0, x5.., y0, y5..) with x0 unshifted.
// The polynomial field uses H2 + H3 + H4 evaluated at x0 - 1.
class Field {
public:
    static Field reduced(const FrameCoefficients& f);
    static Field polynomial(const HamiltonianExpansion& h);

    FieldKind kind() const { return kind_; }
    int dim() const { return dim_; }
    int dof() const { return dim_ / 2; }
    Vec operator()(const Vec& z) const;
    Mat jacobian(const Vec& z) const;
    double energy(const Vec& z) const;
    Vec equilibrium() const;
    const ReducedSystem* system() const { return sys_.get(); }

private:
    struct Poly;
    FieldKind kind_ = FieldKind::Reduced;
    int dim_ = 0;
    std::shared_ptr<ReducedSystem> sys_;
    std::shared_ptr<Poly> poly_;
};

enum class Method { RKF78, GaussLegendre4 };

struct StepControl {
    Method method = Method::RKF78;
    double rtol = 1e-13;
    double atol = 1e-13;
    double h0 = 1e-2;
    int steps = 0;  // fixed-step count for the symplectic method; 0 picks 200 per unit time
};

Vec integrate(const Field& f, const Vec& z, double t, const StepControl& ctrl = {});
// states at the given increasing times starting from time 0
std::vector<Vec> integrate_samples(const Field& f, const Vec& z, const std::vector<double>& times,
                                   const StepControl& ctrl = {});
// flow and its derivative (adaptive method only)
std::pair<Vec, Mat> integrate_variational(const Field& f, const Vec& z, double t, const StepControl& ctrl = {});

enum class FamilyKind { Trivial, Lyapunov, Weinstein };
std::string family_name(FamilyKind k);

struct PeriodicOrbit {
    FamilyKind family = FamilyKind::Lyapunov;
    int index = 0;  // mode index in the chart ordering
    Vec state0;
    double period = 0.0;
    double residual = 0.0;
    std::vector<std::complex<double>> floquet;
    double energy = 0.0;
    double amplitude = 0.0;
    bool degenerate = false;  // equilibrium returned with the linear period
    double dtheta = std::numeric_limits<double>::quiet_NaN();
};

enum class Anchor { Amplitude, Energy };

struct ShootConstraints {
    Anchor anchor = Anchor::Amplitude;
    Vec direction;  // amplitude functional: a = direction . (z - eq)
    double value = 0.0;
    FamilyKind family = FamilyKind::Lyapunov;
    int index = 0;
};

struct ShootOptions {
    int max_iter = 40;
    double tol = 1e-10;
    StepControl ctrl;
};

PeriodicOrbit shoot_periodic(const Field& f, const Vec& guess, double period_guess, const ShootConstraints& c,
                             const ShootOptions& opt = {});

// linear-theory seed on the eigenplane of mode k: state eq + a q_k, period 2 pi / w_k, amplitude anchor q_k = a
struct Seed {
    Vec state;
    double period;
    ShootConstraints constraints;
};
Seed linear_seed(const Field& f, const SymplecticChart& chart, int mode, double amplitude,
                 Anchor anchor = Anchor::Amplitude);

struct Branch {
    std::vector<PeriodicOrbit> orbits;
    bool ended = false;  // continuation stopped before the requested number of steps
    std::string reason;
};

// continuation in the anchor value with a secant predictor and step halving on stalls
Branch continue_family(const Field& f, const PeriodicOrbit& seed, const ShootConstraints& c, int steps, double delta,
                       const ShootOptions& opt = {});

struct FloquetResult {
    std::vector<std::complex<double>> multipliers;  // sorted by modulus
    double determinant = 0.0;
    double pairing_error = 0.0;  // max over mu of min |mu nu - 1|
    int unit_count = 0;          // multipliers within 1e-6 of 1
};
FloquetResult floquet(const PeriodicOrbit& orbit, const Field& f, const StepControl& ctrl = {});

// theta along a reduced trajectory, J pinned to the equilibrium value
std::vector<std::pair<double, double>> reconstruct_theta(const ReducedSystem& sys, const Vec& z0, double t,
                                                         int samples, double theta0 = 0.0);

// |d/dt momenta(s(t)) - canonical field| at a canonical state, with s(t) from the velocity-form equations
double hamilton_consistency(const ReducedSystem& sys, const Vec& z);

// Cartesian N-body with the fourth-order Yoshida composition of leapfrog
struct CartesianState {
    Vec r, v;  // interleaved positions and velocities
};
CartesianState yoshida4(const std::vector<double>& m, CartesianState s, double h, long steps);
double cartesian_energy(const std::vector<double>& m, const CartesianState& s);
double cartesian_angular_momentum(const std::vector<double>& m, const CartesianState& s);

nlohmann::json orbit_to_json(const PeriodicOrbit& o);

}  // namespace nbre
