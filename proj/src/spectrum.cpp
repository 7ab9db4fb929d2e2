#include "nbre/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace nbre {

namespace {

const double kAxisTol = 1e-10;
const double kRepeatTol = 1e-10;

int find_root(std::vector<int>& parent, int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
}

std::vector<std::vector<int>> dof_blocks(const Mat& S, int n) {
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    double scale = S.cwiseAbs().maxCoeff();
    for (int a = 0; a < 2 * n; ++a)
        for (int b = 0; b < 2 * n; ++b)
            if (std::abs(S(a, b)) > 1e-14 * scale) {
                int i = find_root(parent, a % n), j = find_root(parent, b % n);
                if (i != j) parent[std::max(i, j)] = std::min(i, j);
            }
    std::vector<std::vector<int>> blocks;
    std::vector<int> slot(n, -1);
    for (int i = 0; i < n; ++i) {
        int r = find_root(parent, i);
        if (slot[r] < 0) {
            slot[r] = static_cast<int>(blocks.size());
            blocks.emplace_back();
        }
        blocks[slot[r]].push_back(i);
    }
    return blocks;
}

struct BlockModes {
    std::vector<Mode> modes;
    std::vector<Vec> cq, cp;  // local columns (size 2m)
};

Mat block_matrix(const Mat& S, const std::vector<int>& dofs, int n) {
    int m = static_cast<int>(dofs.size());
    Mat B(2 * m, 2 * m);
    for (int a = 0; a < 2 * m; ++a)
        for (int b = 0; b < 2 * m; ++b) {
            int ga = a < m ? dofs[a] : n + dofs[a - m];
            int gb = b < m ? dofs[b] : n + dofs[b - m];
            B(a, b) = S(ga, gb);
        }
    return B;
}

BlockModes generic_block(const Mat& Sb, double scale) {
    int m2 = static_cast<int>(Sb.rows()), m = m2 / 2;
    Mat J = symplectic_J(m);
    Mat A = J * Sb;
    Eigen::EigenSolver<Mat> es(A);
    if (es.info() != Eigen::Success) throw ClassificationError("eigensolver failed on the quadratic part");
    Eigen::VectorXcd ev = es.eigenvalues();
    CMat V = es.eigenvectors();
    struct Cand {
        bool ell;
        double f;
        int idx;
    };
    std::vector<Cand> ell, hyp;
    for (int i = 0; i < m2; ++i) {
        double re = ev[i].real(), im = ev[i].imag();
        if (std::abs(re) <= kAxisTol * scale && im > 0)
            ell.push_back({true, im, i});
        else if (std::abs(im) <= kAxisTol * scale && re > 0)
            hyp.push_back({false, re, i});
        else if (std::abs(re) > kAxisTol * scale && std::abs(im) > kAxisTol * scale)
            throw ClassificationError("eigenvalue off both axes: complex saddle");
    }
    if (static_cast<int>(ell.size() + hyp.size()) != m)
        throw ClassificationError("quadratic part has a zero or non-semisimple eigenvalue");
    auto by_f = [](const Cand& a, const Cand& b) { return a.f < b.f; };
    std::sort(ell.begin(), ell.end(), by_f);
    std::sort(hyp.begin(), hyp.end(), by_f);
    for (auto* list : {&ell, &hyp})
        for (std::size_t k = 1; k < list->size(); ++k)
            if ((*list)[k].f - (*list)[k - 1].f < kRepeatTol * scale)
                throw ResonantLinearError("repeated frequency in the quadratic part");

    BlockModes out;
    for (auto& c : ell) {
        Eigen::VectorXcd v = V.col(c.idx);
        Eigen::Index imax;
        v.cwiseAbs().maxCoeff(&imax);
        v /= v[imax];
        Vec a = v.real(), b = v.imag();
        double s = a.dot(J * b);
        if (std::abs(s) < 1e-6 * a.norm() * b.norm())
            throw ResonantLinearError("linear part is nearly defective (colliding frequencies)");
        Mode md;
        md.elliptic = true;
        md.freq = c.f;
        md.sign = s > 0 ? 1 : -1;
        out.modes.push_back(md);
        out.cq.push_back(a / std::sqrt(std::abs(s)));
        out.cp.push_back(md.sign * b / std::sqrt(std::abs(s)));
    }
    for (auto& c : hyp) {
        int partner = -1;
        double best = 1e300;
        for (int i = 0; i < m2; ++i) {
            double dist = std::abs(ev[i] + ev[c.idx]);
            if (dist < best) best = dist, partner = i;
        }
        auto realvec = [&](int i) {
            Eigen::VectorXcd v = V.col(i);
            Eigen::Index imax;
            v.cwiseAbs().maxCoeff(&imax);
            v /= v[imax];
            return Vec(v.real());
        };
        Vec vp = realvec(c.idx), vm = realvec(partner);
        double s = vp.dot(J * vm);
        Mode md;
        md.elliptic = false;
        md.freq = c.f;
        out.modes.push_back(md);
        out.cq.push_back(vp);
        out.cp.push_back(vm / s);
    }
    return out;
}

struct Prepared {
    Mat S;
    std::vector<std::vector<int>> blocks;
    double scale;
};

Prepared prepare(const HamiltonianExpansion& h) {
    Prepared p;
    p.S = quadratic_matrix(h.H2);
    p.blocks = dof_blocks(p.S, h.dof);
    p.scale = std::max(h.omega, 1e-300);
    return p;
}

bool is_collinear_block(const HamiltonianExpansion& h, const Mat& Sb, double& lambda6) {
    // pattern [p1^2+p2^2+2w(p1 q2 - p2 q1)+(w^2-l5) q1^2+(w^2-l6) q2^2]/2 with l5 + 2 l6 = 3 w^2
    if (Sb.rows() != 4) return false;
    double w = h.omega, tol = 1e-11 * std::max(1.0, h.lambda_star);
    Mat ref = Mat::Zero(4, 4);
    ref(2, 2) = ref(3, 3) = 1.0;
    ref(2, 1) = ref(1, 2) = w;
    ref(3, 0) = ref(0, 3) = -w;
    double l5 = w * w - Sb(0, 0), l6 = w * w - Sb(1, 1);
    ref(0, 0) = Sb(0, 0);
    ref(1, 1) = Sb(1, 1);
    if ((ref - Sb).cwiseAbs().maxCoeff() > tol) return false;
    if (std::abs(l5 + 2 * l6 - 3 * w * w) > 1e-9 * w * w) return false;
    lambda6 = l6;
    return true;
}

}  // namespace

Mat symplectic_J(int n) {
    Mat J = Mat::Zero(2 * n, 2 * n);
    J.topRightCorner(n, n) = Mat::Identity(n, n);
    J.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
    return J;
}

Mat quadratic_matrix(const TruncPoly& h2) {
    int nv = h2.nvars();
    Mat S = Mat::Zero(nv, nv);
    for (const auto& [e, c] : h2.terms()) {
        if (total_degree(e) != 2) throw OrderError("quadratic_matrix expects a homogeneous quadratic");
        std::vector<int> idx;
        for (int i = 0; i < nv; ++i)
            for (int r = 0; r < e[i]; ++r) idx.push_back(i);
        double v = c.real();
        if (idx[0] == idx[1])
            S(idx[0], idx[0]) += 2.0 * v;
        else {
            S(idx[0], idx[1]) += v;
            S(idx[1], idx[0]) += v;
        }
    }
    return S;
}

Vec FrequencyData::signed_freqs() const {
    Vec s(modes.size());
    for (std::size_t k = 0; k < modes.size(); ++k) s[k] = modes[k].signed_freq();
    return s;
}

double collinear_elliptic_freq(double w, double l6) {
    double D = std::sqrt(9 * l6 * l6 - 10 * l6 * w * w + std::pow(w, 4));
    return std::sqrt((D + l6 + w * w) / 2.0);
}

double collinear_hyperbolic_freq(double w, double l6) {
    double D = std::sqrt(9 * l6 * l6 - 10 * l6 * w * w + std::pow(w, 4));
    return std::sqrt((D - l6 - w * w) / 2.0);
}

bool collinear_block_chart(double w0, double l6, Mat& T, double& w1, double& w2) {
    double lam = w0 * w0;
    w1 = collinear_elliptic_freq(w0, l6);
    w2 = collinear_hyperbolic_freq(w0, l6);
    double den1 = -2 * l6 + w1 * w1 + 3 * lam, den2 = 2 * l6 + w2 * w2 - 3 * lam;
    double r1 = w1 * (-l6 + 2 * w1 * w1 - lam) / den1;
    double r2 = -2 * w2 * (l6 + 2 * w2 * w2 + lam) / den2;
    if (!(r1 > 0) || !(r2 > 0) || !std::isfinite(r1) || !std::isfinite(r2)) return false;
    double s1 = std::sqrt(r1), s2 = std::sqrt(r2);
    T = Mat::Zero(4, 4);
    // rows q1, q2, p1, p2; columns qf1, qf2, pf1, pf2
    T(2, 0) = w0 * (2 * l6 + w1 * w1 - 3 * lam) / (s1 * den1);
    T(2, 3) = w0 * (-2 * l6 + w2 * w2 + 3 * lam) / (s2 * den2);
    T(2, 1) = T(2, 3);
    T(3, 2) = w1 * (-2 * l6 + w1 * w1 + lam) / (s1 * den1);
    T(3, 3) = w2 * (-2 * lam / den2 - 1) / s2;
    T(3, 1) = (2 * w2 * lam / den2 + w2) / s2;
    T(0, 2) = -2 * w1 * w0 / (s1 * den1);
    T(0, 3) = -2 * w2 * w0 / (s2 * den2);
    T(0, 1) = 2 * w2 * w0 / (s2 * den2);
    T(1, 0) = 1 / s1;
    T(1, 3) = 1 / s2;
    T(1, 1) = 1 / s2;
    return true;
}

LagrangeFreqs lagrange_frequencies(double beta) {
    if (!(beta > 0 && beta <= 1.0 / 3.0)) throw DomainError("beta outside (0, 1/3]");
    LagrangeFreqs f;
    f.beta = beta;
    f.w0 = std::pow(beta, 0.75);
    double g2 = 1 - 27 * beta;
    f.gamma = g2 >= 0 ? std::sqrt(g2) : std::numeric_limits<double>::quiet_NaN();
    f.w1 = g2 >= 0 ? std::sqrt((1 - f.gamma) / 2) * f.w0 : std::numeric_limits<double>::quiet_NaN();
    f.w2 = g2 >= 0 ? std::sqrt((1 + f.gamma) / 2) * f.w0 : std::numeric_limits<double>::quiet_NaN();
    return f;
}

SymplecticChart diagonalize(const HamiltonianExpansion& h, bool use_closed_form) {
    Prepared pr = prepare(h);
    int n = h.dof;
    SymplecticChart ch;
    ch.n = n;
    ch.T = Mat::Zero(2 * n, 2 * n);
    int next = 0;
    for (std::size_t b = 0; b < pr.blocks.size(); ++b) {
        const auto& dofs = pr.blocks[b];
        int m = static_cast<int>(dofs.size());
        Mat Sb = block_matrix(pr.S, dofs, n);
        BlockModes bm;
        double l6 = 0.0;
        Mat T4;
        double w1, w2;
        bool closed = use_closed_form && is_collinear_block(h, Sb, l6) && collinear_block_chart(h.omega, l6, T4, w1, w2);
        if (closed) {
            Mode e{true, w1, 1}, hy{false, w2, 1};
            bm.modes = {e, hy};
            bm.cq = {T4.col(0), T4.col(1)};
            bm.cp = {T4.col(2), T4.col(3)};
        } else {
            bm = generic_block(Sb, pr.scale);
        }
        ch.from_closed_form.push_back(closed);
        for (int k = 0; k < m; ++k) {
            Mode md = bm.modes[k];
            md.block = static_cast<int>(b);
            md.dofs = dofs;
            int j = next++;
            for (int a = 0; a < 2 * m; ++a) {
                int ga = a < m ? dofs[a] : n + dofs[a - m];
                ch.T(ga, j) = bm.cq[k][a];
                ch.T(ga, n + j) = bm.cp[k][a];
            }
            ch.freq.modes.push_back(md);
        }
    }
    if (ch.freq.modes.empty() || (h.N > 0 && !ch.freq.modes[0].elliptic))
        throw ClassificationError("radial oscillator is not elliptic");
    ch.freq.omega0 = ch.freq.modes[0].freq;
    for (std::size_t k = 1; k < ch.freq.modes.size(); ++k)
        (ch.freq.modes[k].elliptic ? ch.freq.elliptic : ch.freq.hyperbolic).push_back(ch.freq.modes[k].freq);
    if (h.N == 3 && ch.freq.hyperbolic.empty() && ch.freq.elliptic.size() == 2) {
        double e1 = ch.freq.elliptic[0], e2 = ch.freq.elliptic[1];
        ch.freq.gamma = (e2 * e2 - e1 * e1) / (ch.freq.omega0 * ch.freq.omega0);
    }
    complexify(ch);
    return ch;
}

FrequencyData frequencies(const HamiltonianExpansion& h) { return diagonalize(h, false).freq; }

void complexify(SymplecticChart& ch) {
    int n = ch.n;
    ch.Tc = CMat::Zero(2 * n, 2 * n);
    const std::complex<double> I(0.0, 1.0);
    double r = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < n; ++j) {
        if (ch.freq.modes[j].elliptic) {
            ch.Tc(j, j) = I * r;      // q from zeta
            ch.Tc(j, n + j) = r;      // q from eta
            ch.Tc(n + j, j) = r;      // p from zeta
            ch.Tc(n + j, n + j) = I * r;
        } else {
            ch.Tc(j, n + j) = 1.0;
            ch.Tc(n + j, j) = 1.0;
        }
    }
}

TruncPoly to_chart(const TruncPoly& p, const CMat& M) {
    int nv = p.nvars();
    std::vector<TruncPoly> subst;
    for (int a = 0; a < nv; ++a) {
        TruncPoly s(nv, p.max_degree());
        for (int b = 0; b < nv; ++b)
            if (M(a, b) != 0.0) s.add_term([&] {
                    Exps e(nv, 0);
                    e[b] = 1;
                    return e;
                }(), M(a, b));
        subst.push_back(s);
    }
    return poly_compose(p, subst, true);
}

nlohmann::json chart_to_json(const SymplecticChart& c) {
    nlohmann::json j;
    j["variables"] = {{"original", "x0,x5..x2N,y0,y5..y2N"},
                      {"real", "q_0..q_{n-1},p_0..p_{n-1}"},
                      {"complex", "zeta_0..zeta_{n-1},eta_0..eta_{n-1}"}};
    std::vector<std::vector<double>> T(c.T.rows());
    for (int a = 0; a < c.T.rows(); ++a)
        for (int b = 0; b < c.T.cols(); ++b) T[a].push_back(c.T(a, b));
    j["T"] = T;
    std::vector<std::vector<std::array<double, 2>>> Tc(c.Tc.rows());
    for (int a = 0; a < c.Tc.rows(); ++a)
        for (int b = 0; b < c.Tc.cols(); ++b) Tc[a].push_back({c.Tc(a, b).real(), c.Tc(a, b).imag()});
    j["Tc"] = Tc;
    nlohmann::json modes = nlohmann::json::array();
    for (auto& m : c.freq.modes)
        modes.push_back({{"type", m.elliptic ? "elliptic" : "hyperbolic"}, {"freq", m.freq}, {"sign", m.sign}});
    j["modes"] = modes;
    return j;
}

}  // namespace nbre
