#include "nbre/poly.hpp"

#include <algorithm>
#include <cmath>

#include "nbre/errors.hpp"

namespace nbre {

bool GradedLex::operator()(const Exps& a, const Exps& b) const {
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
        if (a[i] != b[i]) return a[i] > b[i];
    return a.size() < b.size();
}

int total_degree(const Exps& e) {
    int d = 0;
    for (auto v : e) d += v;
    return d;
}

TruncPoly::TruncPoly(int nvars, int max_degree, double prune_rel)
    : nvars_(nvars), max_degree_(max_degree), prune_rel_(prune_rel) {
    if (nvars < 0 || max_degree < 0) throw DimensionError("negative poly dimensions");
}

TruncPoly TruncPoly::constant(int nvars, int max_degree, cplx c) {
    TruncPoly p(nvars, max_degree);
    p.add_term(Exps(nvars, 0), c);
    return p;
}

TruncPoly TruncPoly::variable(int nvars, int max_degree, int i, cplx c) {
    if (i < 0 || i >= nvars) throw DimensionError("variable index out of range");
    Exps e(nvars, 0);
    e[i] = 1;
    TruncPoly p(nvars, max_degree);
    p.add_term(e, c);
    return p;
}

TruncPoly TruncPoly::monomial(int nvars, int max_degree, const Exps& e, cplx c) {
    TruncPoly p(nvars, max_degree);
    p.add_term(e, c);
    return p;
}

void TruncPoly::add_term(const Exps& e, cplx c) {
    if (static_cast<int>(e.size()) != nvars_) throw DimensionError("exponent length mismatch");
    if (total_degree(e) > max_degree_) return;
    if (c == cplx(0.0)) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == cplx(0.0)) terms_.erase(it);
    }
}

cplx TruncPoly::coeff(const Exps& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? cplx(0.0) : it->second;
}

double TruncPoly::max_abs() const {
    double m = 0.0;
    for (auto& [e, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

int TruncPoly::degree() const {
    int d = -1;
    for (auto& [e, c] : terms_) d = std::max(d, total_degree(e));
    return d;
}

TruncPoly& TruncPoly::prune() { return prune_abs(prune_rel_ * max_abs()); }

TruncPoly& TruncPoly::prune_abs(double tol) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) <= tol)
            it = terms_.erase(it);
        else
            ++it;
    }
    return *this;
}

cplx TruncPoly::eval(const std::vector<cplx>& x) const {
    if (static_cast<int>(x.size()) != nvars_) throw DimensionError("eval dimension mismatch");
    cplx s = 0.0;
    for (auto& [e, c] : terms_) {
        cplx t = c;
        for (int i = 0; i < nvars_; ++i)
            for (int k = 0; k < e[i]; ++k) t *= x[i];
        s += t;
    }
    return s;
}

double TruncPoly::eval_real(const double* x) const {
    double s = 0.0;
    for (auto& [e, c] : terms_) {
        double t = c.real();
        for (int i = 0; i < nvars_; ++i)
            for (int k = 0; k < e[i]; ++k) t *= x[i];
        s += t;
    }
    return s;
}

TruncPoly TruncPoly::operator-() const { return poly_scale(*this, -1.0); }

static void check_same(const TruncPoly& a, const TruncPoly& b) {
    if (a.nvars() != b.nvars()) throw DimensionError("poly variable count mismatch");
}

TruncPoly& TruncPoly::operator+=(const TruncPoly& o) {
    check_same(*this, o);
    for (auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

TruncPoly& TruncPoly::operator-=(const TruncPoly& o) {
    check_same(*this, o);
    for (auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

TruncPoly& TruncPoly::operator*=(cplx s) {
    if (s == cplx(0.0)) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
}

TruncPoly poly_add(const TruncPoly& a, const TruncPoly& b) {
    check_same(a, b);
    if (a.max_degree() != b.max_degree()) throw DimensionError("poly max_degree mismatch");
    TruncPoly r = a;
    r += b;
    return r.prune();
}

TruncPoly poly_sub(const TruncPoly& a, const TruncPoly& b) {
    check_same(a, b);
    if (a.max_degree() != b.max_degree()) throw DimensionError("poly max_degree mismatch");
    TruncPoly r = a;
    r -= b;
    return r.prune();
}

TruncPoly poly_scale(const TruncPoly& a, cplx s) {
    TruncPoly r = a;
    r *= s;
    return r;
}

TruncPoly poly_mul(const TruncPoly& a, const TruncPoly& b) {
    check_same(a, b);
    int n = a.nvars();
    int md = std::min(a.max_degree(), b.max_degree());
    TruncPoly r(n, md, a.prune_rel());
    Exps e(n);
    for (auto& [ea, ca] : a.terms()) {
        int da = total_degree(ea);
        for (auto& [eb, cb] : b.terms()) {
            // terms are degree-ordered, so the rest of b is too high
            if (da + total_degree(eb) > md) break;
            for (int i = 0; i < n; ++i) e[i] = static_cast<std::uint8_t>(ea[i] + eb[i]);
            r.add_term(e, ca * cb);
        }
    }
    return r.prune();
}

TruncPoly poly_compose(const TruncPoly& p, const std::vector<TruncPoly>& subst,
                       bool require_no_constant) {
    if (static_cast<int>(subst.size()) != p.nvars())
        throw DimensionError("compose: substitution count differs from variable count");
    if (subst.empty()) {
        TruncPoly r(0, p.max_degree(), p.prune_rel());
        for (auto& [e, c] : p.terms()) r.add_term(e, c);
        return r;
    }
    int m = subst[0].nvars();
    int md = subst[0].max_degree();
    for (auto& s : subst) {
        if (s.nvars() != m) throw DimensionError("compose: substitutes disagree on variable count");
        md = std::min(md, s.max_degree());
        if (require_no_constant && s.coeff(Exps(m, 0)) != cplx(0.0))
            throw DimensionError("compose: substitute has a constant term");
    }
    int n = p.nvars();
    std::vector<std::vector<TruncPoly>> powers(n);
    auto power = [&](int i, int k) -> const TruncPoly& {
        auto& pw = powers[i];
        if (pw.empty()) pw.push_back(TruncPoly::constant(m, md, 1.0));
        while (static_cast<int>(pw.size()) <= k) pw.push_back(poly_mul(pw.back(), poly_with_degree(subst[i], md)));
        return pw[k];
    };
    TruncPoly r(m, md, p.prune_rel());
    for (auto& [e, c] : p.terms()) {
        TruncPoly t = TruncPoly::constant(m, md, c);
        for (int i = 0; i < n; ++i)
            if (e[i] > 0) t = poly_mul(t, power(i, e[i]));
        r += t;
    }
    return r.prune();
}

TruncPoly poly_grade(const TruncPoly& p, int d) {
    TruncPoly r(p.nvars(), p.max_degree(), p.prune_rel());
    for (auto& [e, c] : p.terms())
        if (total_degree(e) == d) r.add_term(e, c);
    return r;
}

TruncPoly poly_partial(const TruncPoly& p, int var) {
    if (var < 0 || var >= p.nvars()) throw DimensionError("partial: variable index out of range");
    TruncPoly r(p.nvars(), p.max_degree(), p.prune_rel());
    for (auto& [e, c] : p.terms()) {
        if (e[var] == 0) continue;
        Exps f = e;
        f[var] -= 1;
        r.add_term(f, c * static_cast<double>(e[var]));
    }
    return r;
}

TruncPoly poly_real_part(const TruncPoly& p) {
    TruncPoly r(p.nvars(), p.max_degree(), p.prune_rel());
    for (auto& [e, c] : p.terms()) r.add_term(e, c.real());
    return r;
}

double poly_norm(const TruncPoly& p) { return p.max_abs(); }

double poly_distance(const TruncPoly& a, const TruncPoly& b) {
    check_same(a, b);
    TruncPoly r(a.nvars(), std::max(a.max_degree(), b.max_degree()));
    for (auto& [e, c] : a.terms()) r.add_term(e, c);
    for (auto& [e, c] : b.terms()) r.add_term(e, -c);
    return r.max_abs();
}

TruncPoly poly_with_degree(const TruncPoly& p, int max_degree) {
    TruncPoly r(p.nvars(), max_degree, p.prune_rel());
    for (auto& [e, c] : p.terms()) r.add_term(e, c);
    return r;
}

nlohmann::json poly_to_json(const TruncPoly& p) {
    nlohmann::json j;
    j["vars"] = p.nvars();
    j["max_degree"] = p.max_degree();
    auto terms = nlohmann::json::array();
    for (auto& [e, c] : p.terms()) {
        std::vector<int> ex(e.begin(), e.end());
        terms.push_back({{"exps", ex}, {"re", c.real()}, {"im", c.imag()}});
    }
    j["terms"] = terms;
    return j;
}

TruncPoly poly_from_json(const nlohmann::json& j) {
    TruncPoly p(j.at("vars").get<int>(), j.at("max_degree").get<int>());
    for (auto& t : j.at("terms")) {
        auto ex = t.at("exps").get<std::vector<int>>();
        Exps e(ex.begin(), ex.end());
        p.add_term(e, cplx(t.at("re").get<double>(), t.value("im", 0.0)));
    }
    return p;
}

CompiledPoly::CompiledPoly(const TruncPoly& p) : nvars_(p.nvars()) {
    for (auto& [e, c] : p.terms()) {
        Term t{c.real(), {}};
        for (int i = 0; i < nvars_; ++i)
            if (e[i]) t.factors.emplace_back(i, e[i]);
        terms_.push_back(std::move(t));
    }
}

double CompiledPoly::value(const double* x) const {
    double s = 0.0;
    for (auto& t : terms_) {
        double v = t.c;
        for (auto [i, k] : t.factors)
            for (int r = 0; r < k; ++r) v *= x[i];
        s += v;
    }
    return s;
}

}  // namespace nbre
