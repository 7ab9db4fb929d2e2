#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "nbre/dynamics.hpp"
#include "nbre/normal_form.hpp"
#include "nbre/resonance.hpp"

using namespace nbre;
using json = nlohmann::json;

namespace {

constexpr int kOk = 0, kNumeric = 1, kDomain = 2, kUsage = 64;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string kind = "lagrange";
    std::vector<double> masses;
    double beta = NAN, m1 = NAN;
    std::vector<int> order{0, 1, 2};
    int resonance_order = 4;
    double resonance_tol = -1.0;
    double small_divisor = 1e-9;
    double det_threshold = 1e-10;
    int verify = -1;  // explicit transform check: -1 picks on for analyze, off for sweep
    std::string out = "-";
    std::string csv;
    std::string brackets;
    // sweep
    std::vector<double> grid_beta{0.0, 1.0 / 27, 100};
    std::vector<double> grid_m1{(std::sqrt(69.0) + 9) / 18, 1.0, 100};
    std::string grid = "fitted";  // fitted: beta spans the realizable interval of each m1 column
    int simplex = 20;
    // orbits
    std::string family = "lyapunov";
    int mode = 1;
    double amplitude = 1e-3;
    int steps = 10;
    double delta = 1e-3;
    bool exact = true;
    // oracle and scan
    std::string target = "lagrange";
    double iota = NAN, c_ring = NAN;
    int nmax = 12;
    std::vector<double> freqs;
    unsigned seed = 0;
};

void to_json(json& j, const RunConfig& c) {
    j = json{{"command", c.command},         {"kind", c.kind},
             {"masses", c.masses},           {"order", c.order},
             {"resonance_order", c.resonance_order},
             {"resonance_tol", c.resonance_tol},
             {"small_divisor", c.small_divisor},
             {"det_threshold", c.det_threshold},
             {"verify", c.verify},
             {"out", c.out},                 {"csv", c.csv},
             {"brackets", c.brackets},       {"grid_beta", c.grid_beta},
             {"grid_m1", c.grid_m1},         {"grid", c.grid},
             {"simplex", c.simplex},
             {"family", c.family},           {"mode", c.mode},
             {"amplitude", c.amplitude},     {"steps", c.steps},
             {"delta", c.delta},             {"exact", c.exact},
             {"target", c.target},           {"nmax", c.nmax},
             {"freqs", c.freqs},             {"seed", c.seed}};
    if (std::isfinite(c.beta)) j["beta"] = c.beta;
    if (std::isfinite(c.m1)) j["m1"] = c.m1;
    if (std::isfinite(c.iota)) j["iota"] = c.iota;
    if (std::isfinite(c.c_ring)) j["c_ring"] = c.c_ring;
}

template <class T>
void take(const json& j, const char* key, T& v) {
    if (j.contains(key) && !j[key].is_null()) v = j[key].get<T>();
}

void from_json(const json& j, RunConfig& c) {
    take(j, "command", c.command);
    take(j, "kind", c.kind);
    take(j, "masses", c.masses);
    take(j, "beta", c.beta);
    take(j, "m1", c.m1);
    take(j, "order", c.order);
    take(j, "resonance_order", c.resonance_order);
    take(j, "resonance_tol", c.resonance_tol);
    take(j, "small_divisor", c.small_divisor);
    take(j, "det_threshold", c.det_threshold);
    take(j, "verify", c.verify);
    take(j, "out", c.out);
    take(j, "csv", c.csv);
    take(j, "brackets", c.brackets);
    take(j, "grid_beta", c.grid_beta);
    take(j, "grid_m1", c.grid_m1);
    take(j, "grid", c.grid);
    take(j, "simplex", c.simplex);
    take(j, "family", c.family);
    take(j, "mode", c.mode);
    take(j, "amplitude", c.amplitude);
    take(j, "steps", c.steps);
    take(j, "delta", c.delta);
    take(j, "exact", c.exact);
    take(j, "target", c.target);
    take(j, "iota", c.iota);
    take(j, "c_ring", c.c_ring);
    take(j, "nmax", c.nmax);
    take(j, "freqs", c.freqs);
    take(j, "seed", c.seed);
}

std::string num(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open " + path);
    f << text;
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

int thread_count() {
    if (const char* s = std::getenv("NBRE_THREADS")) {
        int n = std::atoi(s);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// lagrange mass parameters from the config; masses are sorted so m1 is the largest
std::array<double, 3> lagrange_input(const RunConfig& c, double& beta, double& m1) {
    if (!c.masses.empty()) {
        if (c.masses.size() != 3) throw UsageError("lagrange needs three masses");
        double M = c.masses[0] + c.masses[1] + c.masses[2];
        std::array<double, 3> m{c.masses[0] / M, c.masses[1] / M, c.masses[2] / M};
        beta = m[0] * m[1] + m[1] * m[2] + m[0] * m[2];
        m1 = std::max({m[0], m[1], m[2]});
        return m;
    }
    if (!std::isfinite(c.beta)) throw UsageError("lagrange needs masses or beta");
    beta = c.beta;
    // without m1, take m2 m3 halfway between 0 and its largest value (1 - m1)^2 / 4
    m1 = std::isfinite(c.m1) ? c.m1 : 1.0 - (1.0 - std::sqrt(std::max(0.0, 1.0 - 3.5 * beta))) / 1.75;
    if (!in_omega_ps(beta, m1)) return {NAN, NAN, NAN};
    return lagrange_masses(beta, m1);
}

CentralConfig build_config(const RunConfig& c, json* extra = nullptr) {
    if (c.kind == "lagrange") {
        double beta, m1;
        auto m = lagrange_input(c, beta, m1);
        if (extra) (*extra)["beta"] = beta, (*extra)["m1"] = m1;
        if (!in_omega_ps(beta, m1))
            throw DomainError("mass parameters (beta=" + num(beta) + ", m1=" + num(m1) +
                              ") lie outside the admissible Lagrange set (excluded values include beta = 1/36)");
        return solve_lagrange(MassSystem({m[0], m[1], m[2]}));
    }
    if (c.kind == "euler3") {
        if (c.masses.size() != 3) throw UsageError("euler3 needs three masses");
        if (c.order.size() != 3) throw UsageError("order needs three entries");
        return solve_euler3(MassSystem(c.masses), {c.order[0], c.order[1], c.order[2]});
    }
    if (c.kind == "collinear") {
        if (c.masses.size() < 3) throw UsageError("collinear needs at least three masses");
        return solve_collinear(MassSystem(c.masses)).first;
    }
    throw UsageError("unknown configuration kind '" + c.kind + "'");
}

struct Pipeline {
    CentralConfig cfg;
    FrameCoefficients f;
    HamiltonianExpansion h;
    SymplecticChart chart;
    NormalForm nf;
    CenterRestriction cr;
    double det = NAN;
    bool nondegenerate = false;
    ResonanceReport res;
};

Pipeline run_pipeline(const RunConfig& c, CentralConfig cfg) {
    Pipeline p;
    p.cfg = std::move(cfg);
    p.f = potential_expansion(p.cfg);
    p.h = build_hamiltonian(p.cfg, p.f);
    p.chart = diagonalize(p.h);
    NormalFormOptions opt;
    opt.small_divisor = c.small_divisor;
    opt.verify = c.verify != 0 && !(c.verify < 0 && c.command == "sweep");
    p.nf = normalize(p.h, p.chart, opt);
    p.cr = restrict_center(p.nf);
    std::tie(p.det, p.nondegenerate) = degeneracy_verdict(p.cr, c.det_threshold);
    std::vector<double> w(p.cr.reduced_freq.data(), p.cr.reduced_freq.data() + p.cr.reduced_freq.size());
    p.res = scan(w, c.resonance_order, c.resonance_tol);
    return p;
}

// the transform check fails when coefficient magnitudes span too many decades for doubles
bool reliable(const Pipeline& p) {
    double wmax = p.nf.omega_jk.cwiseAbs().maxCoeff();
    auto ok = [](double r) { return std::isnan(r) || r < 1e-8; };
    return ok(p.nf.residual3) && ok(p.nf.residual4) && p.nf.omega_imag <= 1e-8 * std::max(wmax, 1.0);
}

std::string verdict(const Pipeline& p) {
    if (!reliable(p)) return "unreliable";
    std::string s = p.nondegenerate ? "nondegenerate" : "degenerate";
    return s + (p.res.nonresonant() ? "+nonresonant" : "+resonant");
}

int cmd_analyze(const RunConfig& c) {
    json extra = json::object();
    auto p = run_pipeline(c, build_config(c, &extra));
    json j;
    j["config"] = c;
    j["central_config"] = config_to_json(p.cfg);
    j["chart"] = chart_to_json(p.chart);
    j["normal_form"] = normal_form_to_json(p.nf);
    j["resonance"] = resonance_to_json(p.res);
    j["center"] = {{"indices", p.cr.indices}, {"det", p.det}};
    j["verdict"] = {{"nondegenerate", p.nondegenerate},
                    {"nonresonant", p.res.nonresonant()},
                    {"reliable", reliable(p)},
                    {"summary", verdict(p)}};
    if (c.kind == "lagrange") {
        auto o = oracle_lagrange(extra["beta"], extra["m1"]);
        j["oracle"] = {{"beta", o.beta}, {"m1", o.m1},   {"w00", o.w00}, {"w01", o.w01}, {"w02", o.w02},
                       {"w12", o.w12},   {"w11", o.w11}, {"w22", o.w22}, {"fdeg", o.fdeg}, {"det", o.det}};
    }
    if (c.kind == "collinear") {
        // ratios eps_k = m_{k+1} / m_k of the cascade
        std::vector<double> eps;
        for (std::size_t k = 1; k < p.cfg.masses.size(); ++k) eps.push_back(p.cfg.masses[k] / p.cfg.masses[k - 1]);
        auto spec = solve_collinear(MassSystem(c.masses)).second;
        json rows = json::array();
        for (int n = 1; n <= spec.iotas.size(); ++n) {
            double a = asymptotic_iota(n, eps);
            // size of the first neglected terms: eps_1^(2/3), and eps_k^(1/3) for 2 <= k <= n-2
            double nb = n > 2 ? std::cbrt(eps[0] * eps[0]) : 0.0;
            for (int k = 2; k <= n - 2; ++k) nb = std::max(nb, std::cbrt(eps[k - 1]));
            rows.push_back({{"n", n},
                            {"iota", spec.iotas[n - 1]},
                            {"asymptotic", a},
                            {"difference", spec.iotas[n - 1] - a},
                            {"neglected_scale", std::pow(3.0, n - 1) * nb}});
        }
        j["iota_check"] = {{"eps", eps}, {"rows", rows}};
    }
    write_json(c.out, j);
    if (!reliable(p)) {
        std::cerr << "numerical failure: normal form transform check failed (residuals " << num(p.nf.residual3) << ", "
                  << num(p.nf.residual4) << ")\n";
        return kNumeric;
    }
    return kOk;
}

struct SweepPoint {
    std::vector<double> params;  // beta, m1 or the simplex masses
};

int cmd_sweep(const RunConfig& c) {
    std::vector<SweepPoint> pts;
    std::vector<std::array<int, 2>> cell;
    if (c.kind == "lagrange") {
        if (c.grid_beta.size() != 3 || c.grid_m1.size() != 3) throw UsageError("grids are lo,hi,n");
        int nb = static_cast<int>(c.grid_beta[2]), nm = static_cast<int>(c.grid_m1[2]);
        if (nb < 1 || nm < 1) throw UsageError("grid sizes must be positive");
        // cell centres keep the open interval ends out of the grid
        if (c.grid != "fitted" && c.grid != "box") throw UsageError("grid is fitted or box");
        for (int i = 0; i < nb; ++i)
            for (int k = 0; k < nm; ++k) {
                double m = c.grid_m1[0] + (k + 0.5) * (c.grid_m1[1] - c.grid_m1[0]) / nm;
                double lo = c.grid_beta[0], hi = c.grid_beta[1];
                if (c.grid == "fitted") {
                    // beta = m1 (1 - m1) + m2 m3 with 0 < m2 m3 <= (1 - m1)^2 / 4
                    lo = std::max(lo, m * (1 - m));
                    hi = std::min(hi, m * (1 - m) + (1 - m) * (1 - m) / 4);
                    if (!(hi > lo)) continue;
                }
                double b = lo + (i + 0.5) * (hi - lo) / nb;
                if (!in_omega_ps(b, m)) continue;
                pts.push_back({{b, m}});
                cell.push_back({i, k});
            }
    } else if (c.kind == "euler3") {
        int n = c.simplex;
        if (n < 3) throw UsageError("simplex needs at least 3 subdivisions");
        for (int i = 1; i < n; ++i)
            for (int k = 1; i + k < n; ++k) {
                pts.push_back({{double(i) / n, double(k) / n, double(n - i - k) / n}});
                cell.push_back({i, k});
            }
    } else {
        throw UsageError("sweep supports lagrange and euler3");
    }

    std::vector<std::string> rows(pts.size());
    std::vector<double> dets(pts.size(), NAN);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < pts.size(); i = next++) {
            const auto& q = pts[i].params;
            std::ostringstream row;
            RunConfig rc = c;
            std::vector<double> m;
            if (c.kind == "lagrange") {
                auto mm = lagrange_masses(q[0], q[1]);
                m.assign(mm.begin(), mm.end());
                row << num(q[0]) << ',' << num(q[1]) << ',';
            } else {
                m = q;
            }
            row << num(m[0]) << ',' << num(m[1]) << ',' << num(m[2]) << ',';
            try {
                rc.masses = m;
                rc.beta = rc.m1 = NAN;
                auto p = run_pipeline(rc, c.kind == "lagrange" ? solve_lagrange(MassSystem(m)) : build_config(rc));
                for (const auto& md : p.chart.freq.modes) row << num(md.signed_freq()) << ',';
                dets[i] = p.det;
                row << num(p.det) << ',' << num(p.res.min_divisor) << ',' << verdict(p) << ',';
            } catch (const std::exception& e) {
                row << "nan,nan,nan,";
                std::string msg = e.what();
                for (auto& ch : msg)
                    if (ch == ',' || ch == '\n') ch = ';';
                row << "nan,nan,error," << msg;
            }
            rows[i] = row.str();
        }
    };
    int nt = std::min<int>(thread_count(), std::max<std::size_t>(1, pts.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    std::ostringstream csv;
    if (c.kind == "lagrange")
        csv << "beta,m1,mass1,mass2,mass3,w0,w1,w2,det_center,min_divisor,verdict,error\n";
    else
        csv << "mass1,mass2,mass3,w0,w1,mu,det_center,min_divisor,verdict,error\n";
    for (const auto& r : rows) csv << r << '\n';
    write_text(c.csv.empty() ? c.out : c.csv, csv.str());

    if (!c.brackets.empty()) {
        // neighbouring accepted points along either grid axis where det_center changes sign
        std::map<std::array<int, 2>, std::size_t> at;
        for (std::size_t i = 0; i < cell.size(); ++i) at[cell[i]] = i;
        std::ostringstream b;
        b << "axis,p0,q0,p1,q1,det0,det1,crossing\n";
        for (std::size_t i = 0; i < cell.size(); ++i)
            for (int ax = 0; ax < 2; ++ax) {
                auto nb = cell[i];
                ++nb[ax];
                auto it = at.find(nb);
                if (it == at.end()) continue;
                double d0 = dets[i], d1 = dets[it->second];
                if (!(d0 * d1 < 0)) continue;
                const auto& a = pts[i].params;
                const auto& z = pts[it->second].params;
                b << ax << ',' << num(a[0]) << ',' << num(a[1]) << ',' << num(z[0]) << ',' << num(z[1]) << ','
                  << num(d0) << ',' << num(d1) << ',';
                // a zero of f_deg, or a pole of the prefactor near an excluded beta
                if (c.kind == "lagrange")
                    b << (lagrange_fdeg(a[0], a[1]) * lagrange_fdeg(z[0], z[1]) < 0 ? "zero" : "pole");
                else
                    b << "unknown";
                b << '\n';
            }
        write_text(c.brackets, b.str());
    }
    return kOk;
}

FamilyKind family_from(const std::string& s) {
    if (s == "trivial") return FamilyKind::Trivial;
    if (s == "lyapunov") return FamilyKind::Lyapunov;
    if (s == "weinstein") return FamilyKind::Weinstein;
    throw UsageError("unknown family '" + s + "' (expected trivial, lyapunov or weinstein)");
}

int cmd_orbits(const RunConfig& c) {
    FamilyKind fam = family_from(c.family);
    CentralConfig cfg = build_config(c);
    auto f = potential_expansion(cfg);
    auto h = build_hamiltonian(cfg, f);
    auto chart = diagonalize(h);
    Field F = c.exact ? Field::reduced(f) : Field::polynomial(h);
    int mode = fam == FamilyKind::Trivial ? 0 : c.mode;
    if (mode < 0 || mode >= static_cast<int>(chart.freq.modes.size())) throw UsageError("mode out of range");
    Anchor anchor = fam == FamilyKind::Weinstein ? Anchor::Energy : Anchor::Amplitude;
    auto seed = linear_seed(F, chart, mode, c.amplitude, anchor);
    auto first = shoot_periodic(F, seed.state, seed.period, seed.constraints);
    double delta = c.delta;
    if (anchor == Anchor::Energy && !(delta > 0)) delta = first.energy - F.energy(F.equilibrium());
    auto br = continue_family(F, first, seed.constraints, c.steps, delta);

    json arch;
    arch["config"] = c;
    arch["family"] = family_name(fam);
    arch["mode"] = mode;
    arch["linear_period"] = 2 * M_PI / chart.freq.modes[mode].freq;
    arch["ended"] = br.ended;
    arch["reason"] = br.reason;
    json list = json::array();
    std::ostringstream csv;
    csv << "amplitude,period,energy,max_abs_multiplier,residual\n";
    for (auto& o : br.orbits) {
        double mx = NAN;
        if (!o.degenerate) {
            auto fl = floquet(o, F);
            o.floquet = fl.multipliers;
            mx = fl.multipliers.empty() ? NAN : std::abs(fl.multipliers.back());
        }
        list.push_back(orbit_to_json(o));
        // the anchor value is the energy on energy-anchored branches; report the modal amplitude instead
        double amp = seed.constraints.direction.dot(o.state0 - F.equilibrium());
        csv << num(amp) << ',' << num(o.period) << ',' << num(o.energy) << ',' << num(mx) << ','
            << num(o.residual) << '\n';
    }
    arch["orbits"] = list;
    write_json(c.out, arch);
    if (!c.csv.empty()) write_text(c.csv, csv.str());
    return kOk;
}

int cmd_oracle(const RunConfig& c) {
    json j;
    j["target"] = c.target;
    if (c.target == "lagrange") {
        double beta, m1;
        lagrange_input(c, beta, m1);
        auto lf = lagrange_frequencies(beta);
        auto o = oracle_lagrange(beta, m1);
        j["frequencies"] = {{"beta", lf.beta}, {"gamma", lf.gamma}, {"w0", lf.w0}, {"w1", lf.w1}, {"w2", lf.w2}};
        j["normal_form"] = {{"m1", o.m1},   {"m2", o.m2},   {"m3", o.m3},   {"w00", o.w00},   {"w01", o.w01},
                            {"w02", o.w02}, {"w12", o.w12}, {"w11", o.w11}, {"w22", o.w22}, {"fdeg", o.fdeg},
                            {"det", o.det}};
    } else if (c.target == "euler3") {
        RunConfig rc = c;
        rc.kind = "euler3";
        auto cfg = build_config(rc);
        auto f = potential_expansion(cfg);
        auto o = oracle_euler3(f.lambda_star, f.lambda_star_k[1], f.A3(0, 0, 0) / 6.0, f.A4(0, 0, 0, 0) / 24.0);
        j["normal_form"] = {{"tau", o.tau}, {"w00", o.w00}, {"w01", o.w01}, {"w11", o.w11}, {"det", o.det},
                            {"det_closed", o.det_closed}};
    } else if (c.target == "heps") {
        if (!std::isfinite(c.iota) || !std::isfinite(c.c_ring)) throw UsageError("heps needs iota and c_ring");
        auto o = oracle_euler_block(c.iota, c.c_ring);
        j["block"] = {{"iota", c.iota}, {"c_ring", c.c_ring}, {"w_ee", o.w_ee}, {"w_eh", o.w_eh},
                      {"fnum", o.fnum}, {"fden", o.fden},     {"delta", o.delta}};
    } else if (c.target == "ak") {
        if (c.nmax < 2) throw UsageError("nmax must be at least 2");
        j["a"] = ak_sequence(c.nmax - 1);
        j["ratio_bound"] = ak_ratio_bound();
    } else {
        throw UsageError("unknown oracle target '" + c.target + "'");
    }
    write_json(c.out, j);
    return kOk;
}

int cmd_scan(const RunConfig& c) {
    json j;
    if (c.target == "ak") {
        auto rep = verify_ak_nonresonant(c.nmax);
        j = ak_report_to_json(rep);
    } else {
        std::vector<double> w = c.freqs;
        if (w.empty()) {
            auto cfg = build_config(c);
            auto h = build_hamiltonian(cfg, potential_expansion(cfg));
            for (const auto& m : frequencies(h).modes)
                if (m.elliptic) w.push_back(m.signed_freq());
        }
        auto r = scan(w, c.resonance_order, c.resonance_tol);
        r.diophantine_fit = diophantine_fit(w);
        j = resonance_to_json(r);
        j["freqs"] = w;
        j["nonresonant"] = r.nonresonant();
    }
    write_json(c.out, j);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relative equilibria of the planar N-body problem: normal forms, resonances and periodic orbits"};
    app.require_subcommand(1, 1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);

    RunConfig flags;
    json over = json::object();
    std::vector<CLI::App*> subs;
    const std::pair<const char*, const char*> commands[] = {
        {"analyze", "normal form, resonance and nondegeneracy verdict for one mass vector"},
        {"sweep", "verdicts over a grid of Lagrange or Euler masses"},
        {"orbits", "continue a family of periodic orbits"},
        {"oracle", "closed-form reference values"},
        {"scan", "search a frequency vector for low-order resonances"},
    };
    for (auto [name, help] : commands) {
        auto* s = app.add_subcommand(name, help);
        s->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
        s->add_option("--kind", flags.kind, "lagrange, euler3 or collinear");
        s->add_option("--masses", flags.masses)->delimiter(',');
        s->add_option("--beta", flags.beta);
        s->add_option("--m1", flags.m1);
        s->add_option("--order", flags.order, "left-to-right body order (euler3)")->delimiter(',');
        s->add_option("--resonance-order", flags.resonance_order);
        s->add_option("--resonance-tol", flags.resonance_tol);
        s->add_option("--small-divisor", flags.small_divisor);
        s->add_option("--det-threshold", flags.det_threshold);
        s->add_option("--verify", flags.verify, "explicit transform check (1 on, 0 off)");
        s->add_option("--out,-o", flags.out, "output path, - for stdout");
        s->add_option("--csv", flags.csv);
        s->add_option("--brackets", flags.brackets, "sign-change bracket CSV (sweep)");
        s->add_option("--grid-beta", flags.grid_beta, "lo,hi,n")->delimiter(',');
        s->add_option("--grid-m1", flags.grid_m1, "lo,hi,n")->delimiter(',');
        s->add_option("--grid", flags.grid, "fitted or box (lagrange sweep)");
        s->add_option("--simplex", flags.simplex, "subdivisions of the mass simplex (euler3 sweep)");
        s->add_option("--family", flags.family, "trivial, lyapunov or weinstein");
        s->add_option("--mode", flags.mode);
        s->add_option("--amplitude", flags.amplitude);
        s->add_option("--steps", flags.steps);
        s->add_option("--delta", flags.delta);
        s->add_option("--exact", flags.exact, "exact reduced field (true) or quartic truncation");
        s->add_option("--target", flags.target, "lagrange, euler3, heps or ak");
        s->add_option("--iota", flags.iota);
        s->add_option("--c-ring", flags.c_ring);
        s->add_option("--nmax", flags.nmax);
        s->add_option("--freqs", flags.freqs)->delimiter(',');
        s->add_option("--seed", flags.seed);
        subs.push_back(s);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            json j;
            try {
                in >> j;
            } catch (const json::exception& e) {
                throw UsageError(std::string("bad config: ") + e.what());
            }
            cfg = j.get<RunConfig>();
        }
        CLI::App* sub = nullptr;
        for (auto* s : subs)
            if (s->parsed()) sub = s;
        // flags given on the command line override the file
        json base = cfg, fl = flags;
        for (const auto* opt : sub->get_options()) {
            if (opt->count() == 0 || opt->get_name() == "--config" || opt->get_name() == "--help") continue;
            std::string key = opt->get_name();
            while (!key.empty() && key[0] == '-') key.erase(0, 1);
            if (auto p = key.find(','); p != std::string::npos) key = key.substr(0, p);
            for (auto& ch : key)
                if (ch == '-') ch = '_';
            if (fl.contains(key)) base[key] = fl[key];
        }
        cfg = base.get<RunConfig>();
        cfg.command = sub->get_name();

        if (cfg.command == "analyze") return cmd_analyze(cfg);
        if (cfg.command == "sweep") return cmd_sweep(cfg);
        if (cfg.command == "orbits") return cmd_orbits(cfg);
        if (cfg.command == "oracle") return cmd_oracle(cfg);
        return cmd_scan(cfg);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const DomainError& e) {
        std::cerr << "domain exclusion: " << e.what() << "\n";
        return kDomain;
    } catch (const ResonantLinearError& e) {
        std::cerr << "domain exclusion: " << e.what() << "\n";
        return kDomain;
    } catch (const SmallDivisorError& e) {
        std::cerr << "domain exclusion: " << e.what() << "\n";
        return kDomain;
    } catch (const MassError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumeric;
    }
}
