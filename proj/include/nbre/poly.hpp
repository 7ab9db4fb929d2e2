#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include <json.hpp>

namespace nbre {

using cplx = std::complex<double>;
using Exps = std::vector<std::uint8_t>;

// Graded lexicographic: lower total degree first, then larger leading exponents first.
struct GradedLex {
    bool operator()(const Exps& a, const Exps& b) const;
};

int total_degree(const Exps& e);

class TruncPoly {
public:
    using TermMap = std::map<Exps, cplx, GradedLex>;

    TruncPoly() = default;
    TruncPoly(int nvars, int max_degree, double prune_rel = 0.0);

    static TruncPoly constant(int nvars, int max_degree, cplx c);
    static TruncPoly variable(int nvars, int max_degree, int i, cplx c = 1.0);
    static TruncPoly monomial(int nvars, int max_degree, const Exps& e, cplx c);

    int nvars() const { return nvars_; }
    int max_degree() const { return max_degree_; }
    double prune_rel() const { return prune_rel_; }
    void set_prune_rel(double r) { prune_rel_ = r; }
    const TermMap& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    // accumulates; terms above max_degree are dropped silently
    void add_term(const Exps& e, cplx c);
    cplx coeff(const Exps& e) const;
    double max_abs() const;
    int degree() const;

    TruncPoly& prune();
    TruncPoly& prune_abs(double tol);

    cplx eval(const std::vector<cplx>& x) const;
    double eval_real(const double* x) const;

    TruncPoly operator-() const;
    TruncPoly& operator+=(const TruncPoly& o);
    TruncPoly& operator-=(const TruncPoly& o);
    TruncPoly& operator*=(cplx s);

private:
    int nvars_ = 0;
    int max_degree_ = 0;
    double prune_rel_ = 0.0;
    TermMap terms_;
};

TruncPoly poly_add(const TruncPoly& a, const TruncPoly& b);
TruncPoly poly_sub(const TruncPoly& a, const TruncPoly& b);
TruncPoly poly_scale(const TruncPoly& a, cplx s);
TruncPoly poly_mul(const TruncPoly& a, const TruncPoly& b);
// subst[i] replaces variable i; result lives in the variable space of the substitutes.
// With require_no_constant, any substitute carrying a constant term is rejected.
TruncPoly poly_compose(const TruncPoly& p, const std::vector<TruncPoly>& subst,
                       bool require_no_constant = false);
TruncPoly poly_grade(const TruncPoly& p, int d);
TruncPoly poly_partial(const TruncPoly& p, int var);
TruncPoly poly_real_part(const TruncPoly& p);
// max |coefficient| over terms
double poly_norm(const TruncPoly& p);
// max |coefficient| of a - b
double poly_distance(const TruncPoly& a, const TruncPoly& b);
TruncPoly poly_with_degree(const TruncPoly& p, int max_degree);

inline TruncPoly operator+(const TruncPoly& a, const TruncPoly& b) { return poly_add(a, b); }
inline TruncPoly operator-(const TruncPoly& a, const TruncPoly& b) { return poly_sub(a, b); }
inline TruncPoly operator*(const TruncPoly& a, const TruncPoly& b) { return poly_mul(a, b); }
inline TruncPoly operator*(cplx s, const TruncPoly& a) { return poly_scale(a, s); }
inline TruncPoly operator*(double s, const TruncPoly& a) { return poly_scale(a, s); }
inline TruncPoly operator*(const TruncPoly& a, double s) { return poly_scale(a, s); }

nlohmann::json poly_to_json(const TruncPoly& p);
TruncPoly poly_from_json(const nlohmann::json& j);

// Fast real evaluation of the real part.
class CompiledPoly {
public:
    CompiledPoly() = default;
    explicit CompiledPoly(const TruncPoly& p);
    double value(const double* x) const;
    int nvars() const { return nvars_; }

private:
    struct Term {
        double c;
        std::vector<std::pair<int, int>> factors;
    };
    int nvars_ = 0;
    std::vector<Term> terms_;
};

}  // namespace nbre
