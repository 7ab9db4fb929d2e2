#include "nbre/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace nbre {

namespace {

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// visit every k with |k|_1 <= m whose last nonzero entry is positive
void enumerate(int n, int m, const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> k(n, 0);
    std::function<void(int, int, bool)> rec = [&](int i, int left, bool any) {
        if (i < 0) {
            if (any) f(k);
            return;
        }
        // walking from the last entry, the first nonzero one met must be positive
        int lo = any ? -left : 0;
        for (int v = lo; v <= left; ++v) {
            k[i] = v;
            rec(i - 1, left - std::abs(v), any || v != 0);
        }
        k[i] = 0;
    };
    rec(n - 1, m, false);
}

double dot(const std::vector<int>& k, const std::vector<double>& w) {
    double s = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) s += k[i] * w[i];
    return s;
}

}  // namespace

double lattice_size(int n, int m) {
    double s = 0.0;
    for (int i = 1; i <= std::min(n, m); ++i) s += std::pow(2.0, i) * binom(n, i) * binom(m, i);
    return s;
}

namespace {

ResonanceReport scan_lattice(const std::vector<double>& freqs, int m, double tol, double budget) {
    int n = static_cast<int>(freqs.size());
    if (n == 0 || m < 1) throw Error("scan needs frequencies and m >= 1");
    double wmax = 0.0;
    for (double w : freqs) {
        if (w == 0.0) throw Error("zero frequency");
        wmax = std::max(wmax, std::abs(w));
    }
    double size = lattice_size(n, m) / 2;
    if (size > budget)
        throw BudgetError("lattice has " + std::to_string(size) + " points, budget " + std::to_string(budget));
    ResonanceReport r;
    r.order_checked = m;
    r.tol = tol < 0 ? 1e-9 * wmax : tol;
    enumerate(n, m, [&](const std::vector<int>& k) {
        double v = std::abs(dot(k, freqs));
        if (v < r.min_divisor) {
            r.min_divisor = v;
            r.min_k = k;
        }
        if (v < r.tol) r.offending.push_back({k, v});
    });
    std::stable_sort(r.offending.begin(), r.offending.end(),
                     [](const Offender& a, const Offender& b) { return a.value < b.value; });
    return r;
}

}  // namespace

ResonanceReport scan(const std::vector<double>& freqs, int m, double tol, double budget) {
    if (freqs.size() > 12) throw BudgetError("scan supports at most 12 frequencies");
    return scan_lattice(freqs, m, tol, budget);
}

std::optional<std::pair<double, double>> diophantine_fit(const std::vector<double>& freqs, int max_order) {
    int n = static_cast<int>(freqs.size());
    if (n < 2 || lattice_size(n, max_order) / 2 > 5e7) return std::nullopt;
    std::vector<double> best(max_order + 1, std::numeric_limits<double>::infinity());
    enumerate(n, max_order, [&](const std::vector<int>& k) {
        int s = 0;
        for (int v : k) s += std::abs(v);
        best[s] = std::min(best[s], std::abs(dot(k, freqs)));
    });
    double run = std::numeric_limits<double>::infinity();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int s = 1; s <= max_order; ++s) {
        run = std::min(run, best[s]);
        if (!(run > 0)) return std::nullopt;
        double x = std::log(s), y = std::log(run);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    double icpt = (sy - slope * sx) / cnt;
    return std::make_pair(std::exp(icpt), -slope);
}

std::vector<double> ak_sequence(int K) {
    std::vector<double> a;
    for (int k = 1; k <= K; ++k) {
        if (k == 1) {
            a.push_back(1.0);
            continue;
        }
        double t = std::pow(3.0, k);
        a.push_back(0.5 * std::sqrt(std::sqrt(9.0 * t * t - 34.0 * t + 25.0) - t + 5.0));
    }
    return a;
}

double ak_ratio_bound() { return std::sqrt((std::sqrt(1417.0) - 11.0) / (4.0 * std::sqrt(7.0) - 2.0)); }

bool AkReport::nonresonant() const {
    for (const auto& c : cases)
        if (c.offenders) return false;
    return lattice.nonresonant();
}

AkReport verify_ak_nonresonant(int Nmax, double tol) {
    if (Nmax < 2 || Nmax > 40) throw DomainError("Nmax must lie in [2, 40]");
    AkReport rep;
    rep.Nmax = Nmax;
    int K = Nmax - 1;
    rep.a = ak_sequence(K);
    const auto& a = rep.a;
    double scale = *std::max_element(a.begin(), a.end());
    for (int id = 1; id <= 5; ++id) rep.cases.push_back({id, std::numeric_limits<double>::infinity(), {}, 0});
    auto note = [&](int id, double diff, std::vector<int> idx) {
        AkCase& c = rep.cases[id - 1];
        double d = std::abs(diff);
        if (d < c.margin) {
            c.margin = d;
            c.arg = std::move(idx);
        }
        if (d < tol * scale) ++c.offenders;
    };
    for (int i = 0; i < K; ++i)
        for (int j = i + 1; j < K; ++j) {
            note(1, a[j] - 2 * a[i], {i + 1, j + 1});
            note(3, a[j] - 3 * a[i], {i + 1, j + 1});
            for (int l = j + 1; l < K; ++l) {
                note(2, a[l] - a[j] - a[i], {i + 1, j + 1, l + 1});
                note(4, a[l] - a[j] - 2 * a[i], {i + 1, j + 1, l + 1});
                note(4, a[l] - 2 * a[j] - a[i], {i + 1, j + 1, l + 1});
                note(4, a[l] - 2 * a[j] + a[i], {i + 1, j + 1, l + 1});
                for (int q = l + 1; q < K; ++q) note(5, a[q] - a[l] - a[j] - a[i], {i + 1, j + 1, l + 1, q + 1});
            }
        }
    rep.lattice = scan_lattice(a, 4, tol * scale, 5e7);
    return rep;
}

bool omega_ps_membership(double beta, double m1) { return in_omega_ps(beta, m1); }

std::pair<double, double> lyapunov_excluded_betas(int n) {
    if (n < 2) throw DomainError("n must be at least 2");
    double g1 = 1.0 - 2.0 / (n * n), g2 = 1.0 - 2.0 / (n * n + 1.0);
    return {(1.0 - g1 * g1) / 27.0, (1.0 - g2 * g2) / 27.0};
}

nlohmann::json resonance_to_json(const ResonanceReport& r) {
    nlohmann::json j;
    j["order_checked"] = r.order_checked;
    j["tol"] = r.tol;
    j["min_divisor"] = r.min_divisor;
    j["min_k"] = r.min_k;
    nlohmann::json off = nlohmann::json::array();
    for (const auto& o : r.offending) off.push_back({{"k", o.k}, {"value", o.value}});
    j["offending"] = off;
    if (r.diophantine_fit) j["diophantine_fit"] = {{"c", r.diophantine_fit->first}, {"upsilon", r.diophantine_fit->second}};
    return j;
}

nlohmann::json ak_report_to_json(const AkReport& r) {
    nlohmann::json j;
    j["Nmax"] = r.Nmax;
    j["a"] = r.a;
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : r.cases) cs.push_back({{"case", c.id}, {"margin", c.margin}, {"arg", c.arg}, {"offenders", c.offenders}});
    j["cases"] = cs;
    j["lattice"] = resonance_to_json(r.lattice);
    j["nonresonant"] = r.nonresonant();
    return j;
}

}  // namespace nbre
