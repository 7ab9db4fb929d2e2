#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace nbre {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class Normalization { UnitNorm, UnitLambda };
enum class ConfigKind { Lagrange, Euler, Collinear };

std::string to_string(Normalization n);
std::string to_string(ConfigKind k);
Normalization normalization_from_string(const std::string& s);

struct MassSystem {
    std::vector<double> m;
    // admits zero masses for restricted problems
    bool allow_zero = false;

    MassSystem() = default;
    MassSystem(std::vector<double> masses, bool zero_ok = false) : m(std::move(masses)), allow_zero(zero_ok) {}
    int N() const { return static_cast<int>(m.size()); }
    double total() const;
    void validate() const;
};

struct CentralConfig {
    ConfigKind kind = ConfigKind::Collinear;
    Normalization norm = Normalization::UnitNorm;
    std::vector<double> masses;
    Vec r;  // interleaved (x1, y1, x2, y2, ...)
    double lambda = 0.0;
    double I = 0.0;
    Vec eigvals;
    Mat eigvecs;  // columns E1..E2N
    Vec gs;
    // Euler parametrization; NaN otherwise
    double sigma = std::numeric_limits<double>::quiet_NaN();
    double kappa = std::numeric_limits<double>::quiet_NaN();
    std::array<int, 3> line_order{0, 1, 2};

    int N() const { return static_cast<int>(masses.size()); }
    double g3() const { return I; }
    // U at the unit-norm copy, equal to omega^2 of the relative equilibrium there
    double lambda_star() const;
    // eigenvalues of the unit-norm copy
    double lambda_star_k(int k) const;
    // unit-norm eigenvector E_k, k counted from 1
    Vec unit_vec(int k) const;
};

struct CollinearSpectrum {
    Vec iotas;   // eigenvalues of the collinear Jacobian divided by lambda, ascending
    Mat evecs;   // columns e1..eN
    Mat D;       // Jacobian at lambda = 1 scale
    Vec xi;
};

Mat mass_metric(const std::vector<double>& m);
double potential(const Vec& r, const std::vector<double>& m);
double moment_of_inertia(const Vec& r, const std::vector<double>& m);
Vec potential_gradient(const Vec& r, const std::vector<double>& m);
Mat potential_hessian(const Vec& r, const std::vector<double>& m);
Vec perp(const Vec& r);
double config_residual(const CentralConfig& c);

CentralConfig solve_lagrange(const MassSystem& m);
// masses of the Lagrange family from (beta, m1); throws DomainError outside the mass triangle
std::array<double, 3> lagrange_masses(double beta, double m1);

// order lists the bodies from left to right; the returned config relabels them in that order
CentralConfig solve_euler3(const MassSystem& m, std::array<int, 3> order = {0, 1, 2});

struct CollinearOptions {
    int max_iter = 200;
    int order_retries = 60;
    double tol = 1e-14;
};
std::pair<CentralConfig, CollinearSpectrum> solve_collinear(const MassSystem& m,
                                                            const CollinearOptions& opt = {});
CollinearSpectrum collinear_spectrum(const Vec& xi, const std::vector<double>& m, double lambda);

Mat hessian_gradient_map(const CentralConfig& c);
// eigenbasis E5..E2N from a dense eigensolve restricted to the complement of E1..E4
void dense_eigenbasis(CentralConfig& c);
double asymptotic_iota(int n, const std::vector<double>& eps);
CentralConfig config_scale(const CentralConfig& c, Normalization target);

nlohmann::json config_to_json(const CentralConfig& c);

}  // namespace nbre
