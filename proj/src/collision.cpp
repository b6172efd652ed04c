#include "boltzlab/collision.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "boltzlab/parallel.hpp"
#include "boltzlab/quadrature.hpp"

namespace boltzlab {

CollisionConfig default_collision_config(int d) {
    CollisionConfig c;
    c.sphere = sphere_quadrature(d, d == 2 ? 16 : 26);
    return c;
}

std::pair<Vec3, Vec3> post_collision_velocities(const Vec3& v, const Vec3& w, const Vec3& sigma) {
    const double ns = std::sqrt(sigma[0] * sigma[0] + sigma[1] * sigma[1] + sigma[2] * sigma[2]);
    if (std::fabs(ns - 1.0) > 1e-9) throw std::invalid_argument("post_collision_velocities: sigma is not a unit vector");
    double g2 = 0.0;
    for (int j = 0; j < 3; ++j) g2 += (v[j] - w[j]) * (v[j] - w[j]);
    const double half = 0.5 * std::sqrt(g2);
    Vec3 a{}, b{};
    for (int j = 0; j < 3; ++j) {
        const double c = 0.5 * (v[j] + w[j]);
        a[j] = c + half * sigma[j];
        b[j] = c - half * sigma[j];
    }
    return {a, b};
}

namespace {

// Velocity lattice embedded in three axes; the leading 3-d axes are dummies
// of length one so one code path serves d = 1, 2, 3.
struct Lattice {
    int d, n;
    int ne[3];
    std::size_t st[3];
    double h;
    int ws, we;  // v* window in node indices
    std::vector<double> wstar;  // trapezoid weights on the window, per index
};

Lattice make_lattice(const PhaseGrid& vg, const CollisionConfig& cfg) {
    if (vg.mode() != GridMode::homogeneous) throw std::invalid_argument("collision operator needs a velocity grid");
    if (cfg.sphere.d != vg.d()) throw std::invalid_argument("sphere quadrature dimension does not match the grid");
    Lattice L;
    L.d = vg.d();
    L.n = vg.n_v();
    L.h = vg.h_v();
    for (int e = 0; e < 3; ++e) L.ne[e] = e < 3 - L.d ? 1 : L.n;
    L.st[2] = 1;
    L.st[1] = static_cast<std::size_t>(L.ne[2]);
    L.st[0] = L.st[1] * static_cast<std::size_t>(L.ne[1]);
    L.ws = 0;
    L.we = L.n - 1;
    if (cfg.vstar_extent > 0.0) {
        if (cfg.vstar_extent > vg.v_extent() * (1.0 + 1e-12))
            throw std::invalid_argument("vstar_extent exceeds the velocity box");
        L.ws = static_cast<int>(std::ceil((vg.v_extent() - cfg.vstar_extent) / L.h - 1e-9));
        L.we = L.n - 1 - L.ws;
        if (L.we - L.ws < 1) throw std::invalid_argument("vstar window holds fewer than two nodes");
    }
    L.wstar.assign(L.n, 0.0);
    for (int i = L.ws; i <= L.we; ++i) L.wstar[i] = (i == L.ws || i == L.we) ? 0.5 * L.h : L.h;
    return L;
}

struct Padded {
    int pad;
    int m[3];
    std::size_t st[3];
    std::vector<double> raw, coef;
};

Padded make_padded(const double* F, const Lattice& L, InterpolationKind kind) {
    // ṽ lies on the sphere with diameter [v, v*]; along one axis it leaves the
    // box by at most √(d−1)/2·(n−1) nodes.
    const int pad = static_cast<int>(std::ceil(0.5 * std::sqrt(L.d - 1.0) * (L.n - 1))) + 4;
    int n[kMaxAxes];
    double lo[kMaxAxes], h[kMaxAxes];
    for (int a = 0; a < L.d; ++a) {
        n[a] = L.n;
        lo[a] = 0.0;
        h[a] = 1.0;
    }
    Interpolant ip(F, L.d, n, lo, h, kind, pad);
    Padded P;
    P.pad = pad;
    for (int e = 0; e < 3; ++e) P.m[e] = e < 3 - L.d ? 1 : L.n + 2 * pad;
    P.st[2] = 1;
    P.st[1] = static_cast<std::size_t>(P.m[2]);
    P.st[0] = P.st[1] * static_cast<std::size_t>(P.m[1]);
    P.raw = ip.samples();
    if (kind == InterpolationKind::cubic_bspline) P.coef = ip.coefficients();
    return P;
}

struct AxisStencil {
    int taps;
    int start;  // padded source index of the first tap for output offset 0
    double w[4];
};

// Evaluates the interpolant at lattice point (lo + o + shift) for every o in
// the box [0, len) by three separable passes.
void shifted_box(const Padded& P, const Lattice& L, const double shift[3], const int lo[3], const int len[3],
                 InterpolationKind kind, std::vector<double>& t1, std::vector<double>& t2, double* out) {
    AxisStencil ax[3];
    bool integral = true;
    for (int e = 0; e < 3; ++e) {
        if (L.ne[e] == 1) continue;
        if (shift[e] != std::floor(shift[e])) integral = false;
    }
    const double* src;
    for (int e = 0; e < 3; ++e) {
        AxisStencil& s = ax[e];
        if (L.ne[e] == 1) {
            s.taps = 1;
            s.start = 0;
            s.w[0] = 1.0;
            continue;
        }
        const double f = std::floor(shift[e]);
        const double t = shift[e] - f;
        const int base = lo[e] + P.pad + static_cast<int>(f);
        if (integral || (kind == InterpolationKind::multilinear && t == 0.0)) {
            s.taps = 1;
            s.start = base;
            s.w[0] = 1.0;
        } else if (kind == InterpolationKind::multilinear) {
            s.taps = 2;
            s.start = base;
            s.w[0] = 1.0 - t;
            s.w[1] = t;
        } else {
            s.taps = 4;
            s.start = base - 1;
            bspline_weights(t, s.w);
        }
    }
    src = (integral || kind == InterpolationKind::multilinear) ? P.raw.data() : P.coef.data();

    const int e0 = len[0] + ax[0].taps - 1, e1 = len[1] + ax[1].taps - 1, l2 = len[2];
    // Pass along the contiguous axis.
    t1.resize(static_cast<std::size_t>(e0) * e1 * l2);
    for (int i0 = 0; i0 < e0; ++i0) {
        for (int i1 = 0; i1 < e1; ++i1) {
            const double* row = src + static_cast<std::size_t>(ax[0].start + i0) * P.st[0] +
                                static_cast<std::size_t>(ax[1].start + i1) * P.st[1] + ax[2].start;
            double* o = t1.data() + (static_cast<std::size_t>(i0) * e1 + i1) * l2;
            switch (ax[2].taps) {
                case 1:
                    for (int k = 0; k < l2; ++k) o[k] = row[k];
                    break;
                case 2:
                    for (int k = 0; k < l2; ++k) o[k] = ax[2].w[0] * row[k] + ax[2].w[1] * row[k + 1];
                    break;
                default:
                    for (int k = 0; k < l2; ++k)
                        o[k] = ax[2].w[0] * row[k] + ax[2].w[1] * row[k + 1] + ax[2].w[2] * row[k + 2] +
                               ax[2].w[3] * row[k + 3];
            }
        }
    }
    // Pass along axis 1.
    const int l1 = len[1];
    t2.resize(static_cast<std::size_t>(e0) * l1 * l2);
    for (int i0 = 0; i0 < e0; ++i0) {
        for (int o1 = 0; o1 < l1; ++o1) {
            double* o = t2.data() + (static_cast<std::size_t>(i0) * l1 + o1) * l2;
            const double* in = t1.data() + (static_cast<std::size_t>(i0) * e1 + o1) * l2;
            if (ax[1].taps == 1) {
                for (int k = 0; k < l2; ++k) o[k] = in[k];
            } else {
                for (int k = 0; k < l2; ++k) o[k] = ax[1].w[0] * in[k];
                for (int p = 1; p < ax[1].taps; ++p) {
                    const double* q = in + static_cast<std::size_t>(p) * l2;
                    const double wp = ax[1].w[p];
                    for (int k = 0; k < l2; ++k) o[k] += wp * q[k];
                }
            }
        }
    }
    // Pass along axis 0.
    const std::size_t plane = static_cast<std::size_t>(l1) * l2;
    for (int o0 = 0; o0 < len[0]; ++o0) {
        double* o = out + static_cast<std::size_t>(o0) * plane;
        const double* in = t2.data() + static_cast<std::size_t>(o0) * plane;
        if (ax[0].taps == 1) {
            std::copy(in, in + plane, o);
        } else {
            for (std::size_t k = 0; k < plane; ++k) o[k] = ax[0].w[0] * in[k];
            for (int p = 1; p < ax[0].taps; ++p) {
                const double* q = in + static_cast<std::size_t>(p) * plane;
                const double wp = ax[0].w[p];
                for (std::size_t k = 0; k < plane; ++k) o[k] += wp * q[k];
            }
        }
    }
}

std::vector<double> collide(const double* F, const double* G, const PhaseGrid& vg, const CollisionConfig& cfg) {
    const Lattice L = make_lattice(vg, cfg);
    const std::size_t N = vg.size();
    for (std::size_t i = 0; i < N; ++i)
        if (!std::isfinite(F[i]) || !std::isfinite(G[i]))
            throw std::domain_error("collision operator: non-finite input value");

    const Padded PF = make_padded(F, L, cfg.interpolation);
    const Padded PG = (G == F) ? Padded{} : make_padded(G, L, cfg.interpolation);
    const Padded& pg = (G == F) ? PF : PG;

    // Sphere nodes: with F == G the integrand is even in σ, so antipodal
    // pairs collapse onto one node of doubled weight.
    std::vector<Vec3> sig;
    std::vector<double> wsig;
    const auto anti = cfg.sphere.antipodes();
    const bool paired = (G == F) && std::all_of(anti.begin(), anti.end(), [](int j) { return j >= 0; });
    for (std::size_t i = 0; i < cfg.sphere.size(); ++i) {
        if (paired && anti[i] < static_cast<int>(i)) continue;
        sig.push_back(cfg.sphere.nodes[i]);
        wsig.push_back(paired ? 2.0 * cfg.sphere.weights[i] : cfg.sphere.weights[i]);
    }

    std::vector<double> Q(N, 0.0);
    const int first = 3 - L.d;  // first real embedded axis
    const int n = L.n;

    parallel_for(static_cast<std::size_t>(n), [&](std::size_t row_b, std::size_t row_e) {
        std::vector<double> A, B, P, Lk, t1, t2;
        int kk[3] = {0, 0, 0};
        const int kmax = n - 1;
        const int kcount = 2 * kmax + 1;
        long total = 1;
        for (int a = 0; a < L.d; ++a) total *= kcount;
        for (long code = 0; code < total; ++code) {
            long rem = code;
            for (int e = 2; e >= first; --e) {
                kk[e] = static_cast<int>(rem % kcount) - kmax;
                rem /= kcount;
            }
            double k2 = 0.0;
            for (int e = first; e < 3; ++e) k2 += static_cast<double>(kk[e]) * kk[e];
            if (k2 == 0.0) continue;
            const double knorm = std::sqrt(k2);
            int lo[3] = {0, 0, 0}, len[3] = {1, 1, 1};
            bool empty = false;
            for (int e = first; e < 3; ++e) {
                int a = std::max(0, L.ws + kk[e]);
                int b = std::min(n - 1, L.we + kk[e]);
                if (e == first) {
                    a = std::max(a, static_cast<int>(row_b));
                    b = std::min(b, static_cast<int>(row_e) - 1);
                }
                if (a > b) {
                    empty = true;
                    break;
                }
                lo[e] = a;
                len[e] = b - a + 1;
            }
            if (empty) continue;
            const std::size_t cnt = static_cast<std::size_t>(len[0]) * len[1] * len[2];
            A.resize(cnt);
            B.resize(cnt);
            P.resize(cnt);
            Lk.resize(cnt);
            // Weights |v−v*|·w(v*) and the loss product F(v)G(v*) with v* = v−k.
            std::size_t c = 0;
            for (int o0 = 0; o0 < len[0]; ++o0)
                for (int o1 = 0; o1 < len[1]; ++o1)
                    for (int o2 = 0; o2 < len[2]; ++o2, ++c) {
                        const int v0 = lo[0] + o0, v1 = lo[1] + o1, v2 = lo[2] + o2;
                        double w = knorm * L.h;
                        if (L.ne[0] > 1) w *= L.wstar[v0 - kk[0]];
                        if (L.ne[1] > 1) w *= L.wstar[v1 - kk[1]];
                        w *= L.wstar[v2 - kk[2]];
                        const std::size_t iv = v0 * L.st[0] + v1 * L.st[1] + v2;
                        const std::size_t is = (v0 - kk[0]) * L.st[0] + (v1 - kk[1]) * L.st[1] + (v2 - kk[2]);
                        P[c] = w;
                        Lk[c] = F[iv] * G[is];
                    }
            for (std::size_t q = 0; q < sig.size(); ++q) {
                double sa[3], sb[3];
                for (int e = 0; e < 3; ++e) {
                    if (L.ne[e] == 1) {
                        sa[e] = sb[e] = 0.0;
                        continue;
                    }
                    const double s = sig[q][e - first];
                    sa[e] = -0.5 * kk[e] + 0.5 * knorm * s;
                    sb[e] = -0.5 * kk[e] - 0.5 * knorm * s;
                }
                shifted_box(PF, L, sa, lo, len, cfg.interpolation, t1, t2, A.data());
                shifted_box(pg, L, sb, lo, len, cfg.interpolation, t1, t2, B.data());
                const double ws = wsig[q];
                c = 0;
                for (int o0 = 0; o0 < len[0]; ++o0)
                    for (int o1 = 0; o1 < len[1]; ++o1) {
                        double* qrow = Q.data() + (lo[0] + o0) * L.st[0] + (lo[1] + o1) * L.st[1] + lo[2];
                        for (int o2 = 0; o2 < len[2]; ++o2, ++c) qrow[o2] += ws * P[c] * (A[c] * B[c] - Lk[c]);
                    }
            }
        }
    });
    for (double q : Q)
        if (!std::isfinite(q)) throw std::domain_error("collision operator produced a non-finite value");
    return Q;
}


// Fourth-order central differences, falling back to the second-order
// stencils of gradient_component within two nodes of the box edge.
std::vector<double> gradient_fd4(const DensityField& f, int axis) {
    std::vector<double> g = gradient_component(f, axis);
    const PhaseGrid& grid = f.grid;
    const std::size_t st = grid.stride(axis);
    const int n = grid.n(axis);
    const double h = grid.h(axis);
    int idx[kMaxAxes];
    for (std::size_t i = 0; i < f.size(); ++i) {
        grid.unflatten(i, idx);
        if (idx[axis] < 2 || idx[axis] > n - 3) continue;
        const double* v = f.values.data() + i;
        g[i] = (8.0 * (v[st] - v[-static_cast<std::ptrdiff_t>(st)]) - (v[2 * st] - v[-2 * static_cast<std::ptrdiff_t>(st)])) /
               (12.0 * h);
    }
    return g;
}

// Taylor form: F(ṽ)F(ṽ*) − F(v)F(v*) = ∫₀¹ Φ'(θ) dθ with Φ(θ) = G(v+θh, w+2θh)
// and G(v, w) = F(v)F(v−w). Index units throughout; h = −k/2 + |k|σ/2.
std::vector<std::vector<double>> taylor_impl(const double* F, const PhaseGrid& vg, const CollisionConfig& cfg,
                                             int n_theta) {
    if (n_theta < 2) throw std::invalid_argument("taylor form needs n_theta >= 2");
    const Lattice L = make_lattice(vg, cfg);
    const std::size_t N = vg.size();
    const int d = L.d, n = L.n, first = 3 - d;
    DensityField Ff(vg);
    std::copy(F, F + N, Ff.values.begin());
    const Padded PF = make_padded(F, L, cfg.interpolation);
    std::vector<Padded> PD;
    for (int j = 0; j < d; ++j) {
        const auto g = gradient_fd4(Ff, j);
        PD.push_back(make_padded(g.data(), L, cfg.interpolation));
    }
    const auto gl = gauss_legendre(n_theta, 0.0, 1.0);
    std::vector<std::vector<double>> W(2 * d, std::vector<double>(N, 0.0));

    parallel_for(static_cast<std::size_t>(n), [&](std::size_t row_b, std::size_t row_e) {
        std::vector<double> Fa, Fb, t1, t2, P;
        std::vector<std::vector<double>> Da(d), Db(d);
        int kk[3] = {0, 0, 0};
        const int kmax = n - 1, kcount = 2 * kmax + 1;
        long total = 1;
        for (int a = 0; a < d; ++a) total *= kcount;
        for (long code = 0; code < total; ++code) {
            long rem = code;
            for (int e = 2; e >= first; --e) {
                kk[e] = static_cast<int>(rem % kcount) - kmax;
                rem /= kcount;
            }
            double k2 = 0.0;
            for (int e = first; e < 3; ++e) k2 += static_cast<double>(kk[e]) * kk[e];
            if (k2 == 0.0) continue;
            const double knorm = std::sqrt(k2);
            int lo[3] = {0, 0, 0}, len[3] = {1, 1, 1};
            bool empty = false;
            for (int e = first; e < 3; ++e) {
                int a = std::max(0, L.ws + kk[e]), b = std::min(n - 1, L.we + kk[e]);
                if (e == first) {
                    a = std::max(a, static_cast<int>(row_b));
                    b = std::min(b, static_cast<int>(row_e) - 1);
                }
                if (a > b) {
                    empty = true;
                    break;
                }
                lo[e] = a;
                len[e] = b - a + 1;
            }
            if (empty) continue;
            const std::size_t cnt = static_cast<std::size_t>(len[0]) * len[1] * len[2];
            Fa.resize(cnt);
            Fb.resize(cnt);
            for (int j = 0; j < d; ++j) {
                Da[j].resize(cnt);
                Db[j].resize(cnt);
            }
            P.resize(cnt);
            std::size_t c = 0;
            for (int o0 = 0; o0 < len[0]; ++o0)
                for (int o1 = 0; o1 < len[1]; ++o1)
                    for (int o2 = 0; o2 < len[2]; ++o2, ++c) {
                        double w = knorm * L.h;
                        if (L.ne[0] > 1) w *= L.wstar[lo[0] + o0 - kk[0]];
                        if (L.ne[1] > 1) w *= L.wstar[lo[1] + o1 - kk[1]];
                        P[c] = w * L.wstar[lo[2] + o2 - kk[2]];
                    }
            for (std::size_t q = 0; q < cfg.sphere.size(); ++q) {
                double hv[3];
                for (int e = 0; e < 3; ++e)
                    hv[e] = (L.ne[e] == 1) ? 0.0 : -0.5 * kk[e] + 0.5 * knorm * cfg.sphere.nodes[q][e - first];
                // One panel per grid cell crossed by the path: for long jumps the
                // product F(v+θh)F(v*−θh) changes on a θ-scale of 1/|h|.
                double hn = 0.0;
                for (int e = 0; e < 3; ++e) hn += hv[e] * hv[e];
                const int panels = std::max(1, static_cast<int>(std::ceil(std::sqrt(hn) - 1e-12)));
                for (int it = 0; it < n_theta * panels; ++it) {
                    const int pn = it / n_theta, node = it % n_theta;
                    const double th = (pn + gl.nodes[node]) / panels;
                    double sa[3], sb[3];
                    for (int e = 0; e < 3; ++e) {
                        sa[e] = th * hv[e];
                        sb[e] = (L.ne[e] == 1) ? 0.0 : -kk[e] - th * hv[e];
                    }
                    shifted_box(PF, L, sa, lo, len, cfg.interpolation, t1, t2, Fa.data());
                    shifted_box(PF, L, sb, lo, len, cfg.interpolation, t1, t2, Fb.data());
                    for (int j = 0; j < d; ++j) {
                        shifted_box(PD[j], L, sa, lo, len, cfg.interpolation, t1, t2, Da[j].data());
                        shifted_box(PD[j], L, sb, lo, len, cfg.interpolation, t1, t2, Db[j].data());
                    }
                    const double wq = cfg.sphere.weights[q] * gl.weights[node] / panels;
                    for (int j = 0; j < d; ++j) {
                        const double hj = hv[first + j] * L.h;
                        if (hj == 0.0) continue;
                        double* Wv = W[j].data();
                        double* Ww = W[d + j].data();
                        c = 0;
                        for (int o0 = 0; o0 < len[0]; ++o0)
                            for (int o1 = 0; o1 < len[1]; ++o1) {
                                const std::size_t row = (lo[0] + o0) * L.st[0] + (lo[1] + o1) * L.st[1] + lo[2];
                                for (int o2 = 0; o2 < len[2]; ++o2, ++c) {
                                    const double s = wq * P[c];
                                    Wv[row + o2] += s * (Da[j][c] * Fb[c] + Fa[c] * Db[j][c]) * hj;
                                    Ww[row + o2] -= s * Fa[c] * Db[j][c] * 2.0 * hj;
                                }
                            }
                    }
                }
            }
        }
    });
    return W;
}

}  // namespace

std::vector<double> collision_operator(const double* F, const PhaseGrid& vgrid, const CollisionConfig& cfg) {
    return collide(F, F, vgrid, cfg);
}

std::vector<double> collision_operator(const DensityField& F, const CollisionConfig& cfg) {
    return collide(F.values.data(), F.values.data(), F.grid, cfg);
}

std::vector<double> collision_bilinear(const double* F, const double* G, const PhaseGrid& vgrid,
                                       const CollisionConfig& cfg) {
    if (F == G) {
        // Force the unpaired path so the bilinear form is used verbatim.
        std::vector<double> copy(G, G + vgrid.size());
        return collide(F, copy.data(), vgrid, cfg);
    }
    return collide(F, G, vgrid, cfg);
}

std::vector<double> collision_loss(const double* F, const PhaseGrid& vgrid, const CollisionConfig& cfg) {
    const Lattice L = make_lattice(vgrid, cfg);
    double wsum = 0.0;
    for (double w : cfg.sphere.weights) wsum += w;
    const std::size_t N = vgrid.size();
    std::vector<double> out(N, 0.0);
    const int D = vgrid.d();
    parallel_for(N, [&](std::size_t b, std::size_t e) {
        int iv[kMaxAxes], is[kMaxAxes];
        for (std::size_t i = b; i < e; ++i) {
            vgrid.unflatten(i, iv);
            double acc = 0.0;
            for (std::size_t j = 0; j < N; ++j) {
                vgrid.unflatten(j, is);
                double w = 1.0, k2 = 0.0;
                for (int a = 0; a < D; ++a) {
                    w *= L.wstar[is[a]];
                    const double dk = iv[a] - is[a];
                    k2 += dk * dk;
                }
                if (w == 0.0) continue;
                acc += w * std::sqrt(k2) * L.h * F[j];
            }
            out[i] = wsum * F[i] * acc;
        }
    });
    return out;
}

DensityField collision_field(const DensityField& F, const CollisionConfig& cfg) {
    const PhaseGrid vg = F.grid.velocity_grid();
    DensityField Q(F.grid, F.time);
    const std::size_t nv = vg.size();
    for (std::size_t s = 0; s < F.grid.space_size(); ++s) {
        const double* slice = F.values.data() + s * nv;
        bool zero = std::all_of(slice, slice + nv, [](double x) { return x == 0.0; });
        if (zero) continue;
        const auto q = collision_operator(slice, vg, cfg);
        std::copy(q.begin(), q.end(), Q.values.begin() + static_cast<std::ptrdiff_t>(s * nv));
    }
    return Q;
}

namespace {
CollisionMoments moments_impl(const std::vector<double>& Q, const PhaseGrid& vg, bool absolute) {
    CollisionMoments m;
    double v[kMaxAxes];
    for (std::size_t i = 0; i < vg.size(); ++i) {
        const double w = vg.trapezoid_weight(i);
        vg.node_coords(i, v);
        const double q = absolute ? std::fabs(Q[i]) : Q[i];
        m.mass += w * q;
        double v2 = 0.0;
        for (int a = 0; a < vg.d(); ++a) {
            m.momentum[a] += w * (absolute ? std::fabs(v[a]) : v[a]) * q;
            v2 += v[a] * v[a];
        }
        m.energy += w * v2 * q;
    }
    return m;
}
}  // namespace

CollisionMoments collision_moments(const std::vector<double>& Q, const PhaseGrid& vgrid) {
    return moments_impl(Q, vgrid, false);
}

CollisionMoments absolute_moments(const std::vector<double>& Q, const PhaseGrid& vgrid) {
    return moments_impl(Q, vgrid, true);
}

double entropy_production(const double* F, const PhaseGrid& vgrid, const CollisionConfig& cfg) {
    for (std::size_t i = 0; i < vgrid.size(); ++i)
        if (!(F[i] > 0.0)) throw std::domain_error("entropy_production: field must be strictly positive");
    const auto Q = collision_operator(F, vgrid, cfg);
    double r = 0.0;
    for (std::size_t i = 0; i < vgrid.size(); ++i) r -= vgrid.trapezoid_weight(i) * Q[i] * std::log(F[i]);
    return r;
}

}  // namespace boltzlab

namespace boltzlab {

std::vector<std::vector<double>> w_decomposition(const double* F, const PhaseGrid& vgrid, const CollisionConfig& cfg,
                                                 int n_theta) {
    return taylor_impl(F, vgrid, cfg, n_theta);
}

std::vector<double> taylor_form_collision(const double* F, const PhaseGrid& vgrid, const CollisionConfig& cfg,
                                          int n_theta) {
    const auto W = taylor_impl(F, vgrid, cfg, n_theta);
    std::vector<double> Q(vgrid.size(), 0.0);
    for (const auto& w : W)
        for (std::size_t i = 0; i < Q.size(); ++i) Q[i] += w[i];
    return Q;
}

}  // namespace boltzlab
