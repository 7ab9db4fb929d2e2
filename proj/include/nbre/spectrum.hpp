#pragma once

#include <complex>
#include <limits>
#include <vector>

#include "nbre/hamiltonian.hpp"

namespace nbre {

using CMat = Eigen::MatrixXcd;

struct Mode {
    bool elliptic = true;
    double freq = 0.0;  // positive
    int sign = 1;       // H2 on the mode is sign*freq*(p^2+q^2)/2 for elliptic modes
    int block = 0;
    std::vector<int> dofs;  // degrees of freedom of the block
    double signed_freq() const { return elliptic ? sign * freq : freq; }
};

struct FrequencyData {
    double omega0 = 0.0;
    std::vector<double> elliptic;    // excluding omega0
    std::vector<double> hyperbolic;
    double gamma = std::numeric_limits<double>::quiet_NaN();
    std::vector<Mode> modes;  // mode 0 is the x0 oscillator
    Vec signed_freqs() const;
};

// Real and complex symplectic charts. Original variables z = (x0, x5.., y0, y5..),
// real chart w = (q_0..q_{n-1}, p_0..p_{n-1}) with z = T w and T^T J T = J, J = [[0, I], [-I, 0]].
// Complex variables c = (zeta_0..zeta_{n-1}, eta_0..eta_{n-1}) with w = Tc c:
// elliptic p = (zeta + i eta)/sqrt2, q = (eta + i zeta)/sqrt2; hyperbolic p = zeta, q = eta.
// eta plays the role of position: deta/dt = dH/dzeta, dzeta/dt = -dH/deta.
struct SymplecticChart {
    int n = 0;
    FrequencyData freq;
    Mat T;
    CMat Tc;
    std::vector<bool> from_closed_form;  // per block
    CMat full() const { return T.cast<std::complex<double>>() * Tc; }
};

// Hessian of a quadratic form in the given variables
Mat quadratic_matrix(const TruncPoly& h2);
Mat symplectic_J(int n);

FrequencyData frequencies(const HamiltonianExpansion& h);
SymplecticChart diagonalize(const HamiltonianExpansion& h, bool use_closed_form = true);
void complexify(SymplecticChart& chart);

// closed-form chart of a collinear 2-dof block with H2 = [p1^2+p2^2+2w(p1 q2 - p2 q1)+(w^2-l5)q1^2+(w^2-l6)q2^2]/2,
// l5 = 3w^2 - 2 l6; returns a 4x4 map (q1,q2,p1,p2) <- (qf1,qf2,pf1,pf2); false if the normalizers are not positive
bool collinear_block_chart(double omega, double lambda6, Mat& T4, double& w1, double& w2);

// closed-form collinear frequencies from lambda6 = lambda_{2k}
double collinear_elliptic_freq(double omega, double lambda6);
double collinear_hyperbolic_freq(double omega, double lambda6);

// Lagrange closed forms at unit norm with total mass one
struct LagrangeFreqs {
    double beta, gamma, w0, w1, w2;
};
LagrangeFreqs lagrange_frequencies(double beta);

// Transform a polynomial in z to the chart variables: P(z = M c)
TruncPoly to_chart(const TruncPoly& p, const CMat& M);

nlohmann::json chart_to_json(const SymplecticChart& c);

}  // namespace nbre
