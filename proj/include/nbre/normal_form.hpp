#pragma once

#include <limits>
#include <vector>

#include "nbre/spectrum.hpp"

namespace nbre {

struct NormalFormOptions {
    double small_divisor = 1e-9;  // relative to omega0
    bool closed_form_chart = true;
    bool verify = true;            // explicit transform check
    int verify_max_vars = 12;
};

struct NormalForm {
    std::vector<Mode> modes;
    Vec freq;                  // signed frequencies
    std::vector<cplx> c;       // H2 = sum c_k zeta_k eta_k
    Mat omega_jk;              // over all action indices
    double omega_imag = 0.0;   // largest imaginary residue met while reading omega_jk
    TruncPoly H3c, H4c, S3, S4, K4;
    double det_center = std::numeric_limits<double>::quiet_NaN();
    bool resonant = false;
    std::vector<int> kvec;
    double residual3 = std::numeric_limits<double>::quiet_NaN();
    double residual4 = std::numeric_limits<double>::quiet_NaN();
    std::vector<int> center;  // indices of elliptic modes
};

struct CenterRestriction {
    std::vector<int> indices;
    Vec reduced_freq;
    Mat reduced_matrix;
};

// S3 from the homological equation sum c_k (eta_k d/deta_k - u_k d/du_k) S3 + H3 = 0; variables (u, eta)
TruncPoly solve_s3(const std::vector<cplx>& c, const TruncPoly& H3, double tol);
NormalForm solve_s4_and_extract(const std::vector<Mode>& modes, const std::vector<cplx>& c, const TruncPoly& H3,
                                const TruncPoly& S3, const TruncPoly& H4, double tol);

// full pipeline on a Hamiltonian expansion
NormalForm normalize(const HamiltonianExpansion& h, const NormalFormOptions& opt = {});
// the same pipeline from a precomputed chart
NormalForm normalize(const HamiltonianExpansion& h, const SymplecticChart& chart, const NormalFormOptions& opt = {});

// explicit near-identity map of the generating function applied to H2+H3+H4 (in complex chart variables)
TruncPoly transformed_hamiltonian(const TruncPoly& Hc, const TruncPoly& S);

CenterRestriction restrict_center(const NormalForm& nf);
std::pair<double, bool> degeneracy_verdict(const CenterRestriction& cr, double threshold = 1e-10);
std::pair<double, bool> degeneracy_verdict(const Mat& m, double threshold = 1e-10);

// closed forms for the Lagrange family, unit norm and unit total mass
struct LagrangeOracle {
    double beta, m1, m2, m3, gamma;
    double w00, w01, w02, w12, w11, w22;
    double fdeg, det;
};
bool in_omega_ps(double beta, double m1);
LagrangeOracle oracle_lagrange(double beta, double m1);
double lagrange_fdeg(double beta, double m1);

// closed forms for the Euler three-body center block; a30 and a4 are sphere coefficients of U
struct EulerOracle {
    double tau, w00, w01, w11, det, det_closed;
};
EulerOracle oracle_euler3(double lambda, double lambda6, double a30, double a4);

// H_eps block
struct EulerBlockOracle {
    double w_ee, w_eh, fnum, fden, delta;
};
EulerBlockOracle oracle_euler_block(double iota, double c_ring, double omega_ring = 1.0, double sigma1 = 1.0,
                                    double eps = 1.0);
double fnum(double iota, double c_ring);
double fnum_limit(double iota);
// standalone H_eps with variables (x_{2N-1}, x_{2N}, y_{2N-1}, y_{2N})
HamiltonianExpansion h_eps(double iota, double omega_ring, double sigma1, double sigma2, double eps);

nlohmann::json normal_form_to_json(const NormalForm& nf);

}  // namespace nbre
