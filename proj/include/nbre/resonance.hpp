#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "nbre/normal_form.hpp"

namespace nbre {

struct Offender {
    std::vector<int> k;
    double value;  // |k . w|
};

struct ResonanceReport {
    int order_checked = 0;
    double tol = 0.0;
    std::vector<Offender> offending;  // sorted by value
    double min_divisor = std::numeric_limits<double>::infinity();
    std::vector<int> min_k;
    std::optional<std::pair<double, double>> diophantine_fit;  // (c, upsilon)
    bool nonresonant() const { return offending.empty(); }
};

// number of nonzero integer vectors in Z^n with |k|_1 <= m
double lattice_size(int n, int m);

// exhaustive scan over 1 <= |k|_1 <= m, one representative per pair +-k (last nonzero entry positive);
// tol < 0 selects 1e-9 max|w|
ResonanceReport scan(const std::vector<double>& freqs, int m, double tol = -1.0, double budget = 5e7);

// least-squares fit of log min_{|k|<=s} |k.w| = log c - upsilon log s over s = 1..max_order
std::optional<std::pair<double, double>> diophantine_fit(const std::vector<double>& freqs, int max_order = 30);

// a_1..a_K of the collinear cascade
std::vector<double> ak_sequence(int K);
// closed form of sup a_{k+1}/a_k over k >= 2
double ak_ratio_bound();

struct AkCase {
    int id;                // 1..5
    double margin;         // min |lhs - rhs| over all index tuples
    std::vector<int> arg;  // indices (1-based) realizing the margin
    int offenders = 0;
};

struct AkReport {
    int Nmax = 0;
    std::vector<double> a;  // a_1..a_{Nmax-1}
    std::vector<AkCase> cases;
    ResonanceReport lattice;  // every relation of order <= 4
    bool nonresonant() const;
};

// checks the five relation types among a_1..a_{Nmax-1} plus an exhaustive order-4 scan
AkReport verify_ak_nonresonant(int Nmax, double tol = 1e-9);

bool omega_ps_membership(double beta, double m1);

// beta values for which w0/w1 = n or w2/w1 = n along the Lagrange family
std::pair<double, double> lyapunov_excluded_betas(int n);

nlohmann::json resonance_to_json(const ResonanceReport& r);
nlohmann::json ak_report_to_json(const AkReport& r);

}  // namespace nbre
