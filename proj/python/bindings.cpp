#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nbre/dynamics.hpp"
#include "nbre/normal_form.hpp"
#include "nbre/resonance.hpp"

namespace py = pybind11;
using namespace nbre;

namespace {

py::object to_py(const nlohmann::json& j) {
    switch (j.type()) {
        case nlohmann::json::value_t::null: return py::none();
        case nlohmann::json::value_t::boolean: return py::bool_(j.get<bool>());
        case nlohmann::json::value_t::number_integer: return py::int_(j.get<long long>());
        case nlohmann::json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
        case nlohmann::json::value_t::number_float: return py::float_(j.get<double>());
        case nlohmann::json::value_t::string: return py::str(j.get<std::string>());
        case nlohmann::json::value_t::array: {
            py::list l;
            for (const auto& v : j) l.append(to_py(v));
            return l;
        }
        default: {
            py::dict d;
            for (auto it = j.begin(); it != j.end(); ++it) d[py::str(it.key())] = to_py(it.value());
            return d;
        }
    }
}

CentralConfig make_config(const std::string& kind, const std::vector<double>& masses) {
    if (kind == "lagrange") return solve_lagrange(MassSystem(masses));
    if (kind == "euler3") return solve_euler3(MassSystem(masses));
    if (kind == "collinear") return solve_collinear(MassSystem(masses)).first;
    throw DomainError("unknown configuration kind '" + kind + "'");
}

py::dict analyze(const std::string& kind, const std::vector<double>& masses, int order, bool verify) {
    auto c = make_config(kind, masses);
    auto h = build_hamiltonian(c, potential_expansion(c));
    NormalFormOptions opt;
    opt.verify = verify;
    auto nf = normalize(h, opt);
    auto cr = restrict_center(nf);
    auto [det, nondeg] = degeneracy_verdict(cr);
    std::vector<double> w(cr.reduced_freq.data(), cr.reduced_freq.data() + cr.reduced_freq.size());
    auto res = scan(w, order);
    py::dict d;
    d["config"] = to_py(config_to_json(c));
    d["freq"] = nf.freq;
    d["omega_jk"] = nf.omega_jk;
    d["center"] = cr.indices;
    d["center_matrix"] = cr.reduced_matrix;
    d["det_center"] = det;
    d["nondegenerate"] = nondeg;
    d["nonresonant"] = res.nonresonant();
    d["resonance"] = to_py(resonance_to_json(res));
    d["residual3"] = nf.residual3;
    d["residual4"] = nf.residual4;
    return d;
}

py::dict periodic_orbit(const std::string& kind, const std::vector<double>& masses, int mode, double amplitude,
                        bool exact) {
    auto c = make_config(kind, masses);
    auto f = potential_expansion(c);
    auto h = build_hamiltonian(c, f);
    auto chart = diagonalize(h);
    Field F = exact ? Field::reduced(f) : Field::polynomial(h);
    auto seed = linear_seed(F, chart, mode, amplitude);
    auto o = shoot_periodic(F, seed.state, seed.period, seed.constraints);
    if (!o.degenerate) o.floquet = floquet(o, F).multipliers;
    auto d = to_py(orbit_to_json(o)).cast<py::dict>();
    d["linear_period"] = 2 * M_PI / chart.freq.modes[mode].freq;
    return d;
}

}  // namespace

PYBIND11_MODULE(_nbre, m) {
    m.doc() = "Relative equilibria of the planar N-body problem: normal forms, resonances and periodic orbits.";

    auto base = py::register_exception<Error>(m, "NbreError", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<MassError>(m, "MassError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
    py::register_exception<BudgetError>(m, "BudgetError", base.ptr());

    m.def("solve_config", [](const std::string& kind, const std::vector<double>& masses) {
        return to_py(config_to_json(make_config(kind, masses)));
    }, py::arg("kind"), py::arg("masses"));
    m.def("collinear_iotas", [](const std::vector<double>& masses) {
        auto s = solve_collinear(MassSystem(masses)).second;
        return std::vector<double>(s.iotas.data(), s.iotas.data() + s.iotas.size());
    }, py::arg("masses"));
    m.def("asymptotic_iota", &asymptotic_iota, py::arg("n"), py::arg("eps"));

    m.def("lagrange_frequencies", [](double beta) {
        auto f = lagrange_frequencies(beta);
        py::dict d;
        d["beta"] = f.beta;
        d["gamma"] = f.gamma;
        d["w0"] = f.w0;
        d["w1"] = f.w1;
        d["w2"] = f.w2;
        return d;
    }, py::arg("beta"));
    m.def("lagrange_masses", &lagrange_masses, py::arg("beta"), py::arg("m1"));
    m.def("in_omega_ps", &in_omega_ps, py::arg("beta"), py::arg("m1"));
    m.def("lagrange_fdeg", &lagrange_fdeg, py::arg("beta"), py::arg("m1"));
    m.def("oracle_lagrange", [](double beta, double m1) {
        auto o = oracle_lagrange(beta, m1);
        py::dict d;
        for (auto [k, v] : std::initializer_list<std::pair<const char*, double>>{
                 {"w00", o.w00}, {"w01", o.w01}, {"w02", o.w02}, {"w12", o.w12}, {"w11", o.w11}, {"w22", o.w22},
                 {"fdeg", o.fdeg}, {"det", o.det}})
            d[k] = v;
        return d;
    }, py::arg("beta"), py::arg("m1"));
    m.def("oracle_euler_block", [](double iota, double c_ring) {
        auto o = oracle_euler_block(iota, c_ring);
        py::dict d;
        d["w_ee"] = o.w_ee;
        d["w_eh"] = o.w_eh;
        d["fnum"] = o.fnum;
        d["fden"] = o.fden;
        return d;
    }, py::arg("iota"), py::arg("c_ring"));
    m.def("fnum", &fnum, py::arg("iota"), py::arg("c_ring"));

    m.def("analyze", &analyze, py::arg("kind"), py::arg("masses"), py::arg("order") = 4, py::arg("verify") = true);

    m.def("scan", [](const std::vector<double>& freqs, int order, double tol) {
        return to_py(resonance_to_json(scan(freqs, order, tol)));
    }, py::arg("freqs"), py::arg("order") = 4, py::arg("tol") = -1.0);
    m.def("ak_sequence", &ak_sequence, py::arg("K"));
    m.def("ak_ratio_bound", &ak_ratio_bound);
    m.def("verify_ak_nonresonant", [](int nmax, double tol) {
        return to_py(ak_report_to_json(verify_ak_nonresonant(nmax, tol)));
    }, py::arg("nmax"), py::arg("tol") = 1e-9);

    m.def("periodic_orbit", &periodic_orbit, py::arg("kind"), py::arg("masses"), py::arg("mode"),
          py::arg("amplitude"), py::arg("exact") = true);
}
