#include "liftgeo/formulas.hpp"

namespace liftgeo::formulas {

namespace {

// Pointwise base-manifold data shared by the evaluators.
struct BaseData {
    int n = 0;
    MatD gm;           // g_ij
    Tensor3D gam;      // Gamma^k_{ij}
    Tensor3D cubic;    // C_ijk
    Tensor4D rup;      // R^l_{ijk} at [l][i][j][k]
    Tensor4D rlow;     // R_{ijkl} at [i][j][k][l]
    std::vector<double> y;

    BaseData(const MetricField& g, const ConnectionField& conn, const TMPoint& p) {
        n = g.dim();
        gm = g.eval(p.x);
        gam = conn.eval(p.x);
        cubic = cubic_tensor(g, conn, p.x).c;
        CurvatureValue cv = curvature(conn, p.x, &g);
        rup = cv.up;
        rlow = cv.lowered;
        y = p.y;
    }

    // y^r R_{ijr k} contracted on the third slot.
    double yr_rlow(int i, int j, int k) const {
        double s = 0.0;
        for (int r = 0; r < n; ++r) s += y[r] * rlow.at(i, j, r, k);
        return s;
    }

    // (R(y, d_a) d_b)^t
    double ry_up(int t, int a, int b) const {
        double s = 0.0;
        for (int r = 0; r < n; ++r) s += y[r] * rup.at(t, r, a, b);
        return s;
    }
};

struct WeightData {
    std::vector<double> df;    // d_i f
    MatD d2f;                  // d_i d_j f
    std::vector<double> grad;  // (grad f)^i
    MatD P;                    // (nabla_j grad f)^k at [k][j]
    double a = 1.0;            // 1 + |grad f|^2
    std::vector<double> da;    // d_k a

    WeightData(const MetricField& g, const ScalarField& f, const TMPoint& p,
               const Tensor3D& gam) {
        const int n = g.dim();
        Jet fj = f.eval_jet(p.x, 2);
        df.resize(n);
        d2f = MatD(n, n, 0.0);
        for (int i = 0; i < n; ++i) {
            df[i] = fj.d1(i);
            for (int j = 0; j < n; ++j) d2f.at(i, j) = fj.d2(i, j);
        }
        std::vector<Jet> gj = gradient_jet(g, f, p.x, 1);
        grad.resize(n);
        P = MatD(n, n, 0.0);
        for (int k = 0; k < n; ++k) {
            grad[k] = gj[k].value();
            for (int j = 0; j < n; ++j) P.at(k, j) = gj[k].d1(j);
        }
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) P.at(k, j) += gam.at(k, j, l) * grad[l];
        Jet aj = Jet::constant(n, 1, 1.0);
        for (int l = 0; l < n; ++l) aj += gj[l] * fj.derivative(l).truncated(1);
        a = aj.value();
        da.resize(n);
        for (int k = 0; k < n; ++k) da[k] = aj.d1(k);
    }

    // g(nabla_j grad f, d_k)
    double gP(const MatD& gm, int j, int k) const {
        double s = 0.0;
        for (int l = 0; l < gm.n1; ++l) s += gm.at(l, k) * P.at(l, j);
        return s;
    }
};

// g(R(d_r, grad f) d_i, d_j)
double g_r_grad(const BaseData& b, const WeightData& w, int r, int i, int j) {
    double s = 0.0;
    for (int t = 0; t < b.n; ++t)
        for (int u = 0; u < b.n; ++u) s += b.gm.at(t, j) * w.grad[u] * b.rup.at(t, r, u, i);
    return s;
}

// g(A_f(d_i, d_j), d_k)
double g_af(const BaseData& b, const WeightData& w, double fv, int i, int j, int k) {
    double gxy = b.gm.at(i, j);
    double s = w.df[i] * b.gm.at(j, k) + w.df[j] * b.gm.at(i, k);
    for (int l = 0; l < b.n; ++l) s -= gxy * w.grad[l] * b.gm.at(l, k);
    return s / (2.0 * fv);
}

}  // namespace

Tensor3D twisted_horizontal(const MetricField& g, const ConnectionField& conn,
                            const ScalarField& f, const ScalarField& h, const TMPoint& p) {
    const int n = g.dim();
    const int m = 2 * n;
    BaseData b(g, conn, p);
    const double fv = f.eval(p.x), hv = h.eval(p.x);
    Jet fj = f.eval_jet(p.x, 1), hj = h.eval_jet(p.x, 1);
    Tensor3D out(m, m, m, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                out.at(i, j, k) = fj.d1(i) * b.gm.at(j, k) + fv * b.cubic.at(i, j, k);
                out.at(k, n + i, n + j) = hj.d1(k) * b.gm.at(i, j) + hv * b.cubic.at(k, i, j);
            }
    return out;
}

Tensor3D twisted_complete(const MetricField& g, const ConnectionField& conn, const ScalarField& f,
                          const ScalarField& h, const TMPoint& p) {
    const int n = g.dim();
    Tensor3D out = twisted_horizontal(g, conn, f, h, p);
    BaseData b(g, conn, p);
    const double hv = h.eval(p.x);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                // -h y^s R^t_{sij} g_tk
                double s = 0.0;
                for (int t = 0; t < n; ++t) s += b.ry_up(t, i, j) * b.gm.at(t, k);
                out.at(i, j, n + k) = -hv * s;
                out.at(i, n + k, j) = -hv * s;
            }
    return out;
}

Tensor3D sasaki_wrt_lc_twisted(const MetricField& g, const ScalarField& f, const ScalarField& h,
                               const TMPoint& p, int curvature_sign) {
    const int n = g.dim();
    const int m = 2 * n;
    ConnectionField lc = levi_civita(g);
    lc.set_curvature_sign(curvature_sign);
    BaseData b(g, lc, p);
    const double fv = f.eval(p.x), hv = h.eval(p.x);
    WeightData wf(g, f, p, b.gam);
    Jet hj = h.eval_jet(p.x, 1);
    Tensor3D out(m, m, m, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                out.at(i, j, k) = b.cubic.at(i, j, k) - g_af(b, wf, fv, i, j, k) -
                                  g_af(b, wf, fv, i, k, j);
                const double v = 0.5 * b.yr_rlow(i, j, k) * (1.0 - hv / fv);
                out.at(i, j, n + k) = v;
                out.at(i, n + k, j) = v;
                out.at(n + k, i, j) = -(hv / fv) * b.yr_rlow(i, j, k);
                const double w =
                    hj.d1(k) / (2.0 * fv) * b.gm.at(i, j) - hj.d1(k) / (2.0 * hv) * b.gm.at(i, j);
                out.at(n + i, n + j, k) = w;
                out.at(n + i, k, n + j) = w;
                out.at(k, n + i, n + j) =
                    b.cubic.at(k, i, j) - hj.d1(k) / hv * b.gm.at(i, j);
            }
    return out;
}

Tensor3D gradient_wrt_complete(const MetricField& g, const ConnectionField& conn,
                               const ScalarField& f, const TMPoint& p) {
    const int n = g.dim();
    const int m = 2 * n;
    BaseData b(g, conn, p);
    Jet fj = f.eval_jet(p.x, 2);
    Tensor3D out(m, m, m, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                out.at(i, j, k) = b.cubic.at(i, j, k);
                // -g(R(y,d_i)d_j, d_k) - (R(y,d_i)d_j)(f) d_k(f)
                double gr = 0.0, rf = 0.0;
                for (int t = 0; t < n; ++t) {
                    gr += b.ry_up(t, i, j) * b.gm.at(t, k);
                    rf += b.ry_up(t, i, j) * fj.d1(t);
                }
                out.at(i, j, n + k) = -gr - rf * fj.d1(k);
                out.at(i, n + k, j) = out.at(i, j, n + k);
                // nabla_k applied to the vertical block
                double v = b.cubic.at(k, i, j) + fj.d2(k, i) * fj.d1(j) + fj.d1(i) * fj.d2(k, j);
                for (int l = 0; l < n; ++l)
                    v -= b.gam.at(l, k, i) * fj.d1(l) * fj.d1(j) +
                         fj.d1(i) * b.gam.at(l, k, j) * fj.d1(l);
                out.at(k, n + i, n + j) = v;
            }
    return out;
}

Tensor3D sasaki_wrt_lc_gradient(const MetricField& g, const ScalarField& f, const TMPoint& p,
                                int curvature_sign) {
    const int n = g.dim();
    const int m = 2 * n;
    ConnectionField lc = levi_civita(g);
    lc.set_curvature_sign(curvature_sign);
    BaseData b(g, lc, p);
    WeightData w(g, f, p, b.gam);
    Tensor3D out(m, m, m, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                out.at(i, j, k) = b.cubic.at(i, j, k);
                // item 2, verbatim
                double v2 = -b.yr_rlow(i, j, k);
                for (int r = 0; r < n; ++r)
                    v2 -= 0.5 * b.y[r] * w.df[k] * g_r_grad(b, w, r, i, j);
                out.at(i, j, n + k) = v2;
                out.at(i, n + k, j) = v2;
                // item 3
                double v3 = 0.0;
                for (int r = 0; r < n; ++r)
                    v3 += -0.5 * b.y[r] * b.rlow.at(r, k, i, j) -
                          0.5 * b.y[r] * w.df[k] * g_r_grad(b, w, r, i, j) -
                          0.5 * b.y[r] * b.rlow.at(r, k, j, i) -
                          0.5 * b.y[r] * w.df[k] * g_r_grad(b, w, r, j, i);
                out.at(n + k, i, j) = v3;
                // item 4
                double v4 = 0.5 * w.df[i] * w.gP(b.gm, j, k) + 0.5 * w.df[j] * w.gP(b.gm, i, k) -
                            0.5 * w.df[i] * w.gP(b.gm, k, j) -
                            (w.gP(b.gm, k, i) - 0.5 * w.da[k] * w.df[i]) / (2.0 * w.a) * w.df[j];
                out.at(n + i, n + j, k) = v4;
                out.at(n + i, k, n + j) = v4;
                // item 5
                double v5 = b.cubic.at(k, i, j) - 0.5 * w.df[i] * w.gP(b.gm, k, j) -
                            0.5 * w.df[j] * w.gP(b.gm, k, i) -
                            (w.gP(b.gm, k, i) - 0.5 * w.da[k] * w.df[i]) / (2.0 * w.a) * w.df[j] -
                            (w.gP(b.gm, k, j) - 0.5 * w.da[k] * w.df[j]) / (2.0 * w.a) * w.df[i];
                out.at(k, n + i, n + j) = v5;
            }
    return out;
}

Tensor3D twisted_wrt_lc_gradient(const MetricField& g, const ScalarField& f, const ScalarField& h,
                                 const ScalarField& f1, const TMPoint& p, int curvature_sign,
                                 bool repeated_index_verbatim) {
    const int n = g.dim();
    const int m = 2 * n;
    ConnectionField lc = levi_civita(g);
    lc.set_curvature_sign(curvature_sign);
    BaseData b(g, lc, p);
    WeightData w1(g, f1, p, b.gam);
    const double fv = f.eval(p.x), hv = h.eval(p.x);
    Jet fj = f.eval_jet(p.x, 1), hj = h.eval_jet(p.x, 1);
    Tensor3D out(m, m, m, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                out.at(i, j, k) = fj.d1(i) * b.gm.at(j, k) + fv * b.cubic.at(i, j, k);
                // item 2
                double v2 = 0.0;
                for (int r = 0; r < n; ++r) {
                    const double glast = repeated_index_verbatim ? g_r_grad(b, w1, r, j, j)
                                                                 : g_r_grad(b, w1, r, i, j);
                    v2 += 0.5 * b.y[r] *
                          ((hv - fv) * b.rlow.at(i, j, r, k) - fv * w1.df[k] * glast);
                }
                out.at(i, j, n + k) = v2;
                out.at(i, n + k, j) = v2;
                // item 3
                double v3 = 0.5 * w1.df[i] * fv * w1.gP(b.gm, j, k) +
                            0.5 * w1.df[j] * fv * w1.gP(b.gm, i, k) -
                            0.5 * w1.df[i] * hv * w1.gP(b.gm, k, j) -
                            hv / (2.0 * w1.a) * (w1.gP(b.gm, k, i) - 0.5 * w1.da[k] * w1.df[i]) *
                                w1.df[j];
                out.at(n + i, n + j, k) = v3;
                out.at(n + i, k, n + j) = v3;
                // item 4
                double v4 = -0.5 * w1.df[i] * hv * w1.gP(b.gm, k, j) -
                            hv / (2.0 * w1.a) * (w1.gP(b.gm, k, i) - 0.5 * w1.da[k] * w1.df[i]) *
                                w1.df[j] -
                            0.5 * w1.df[j] * hv * w1.gP(b.gm, k, i) -
                            hv / (2.0 * w1.a) * (w1.gP(b.gm, k, j) - 0.5 * w1.da[k] * w1.df[j]) *
                                w1.df[i] +
                            hj.d1(k) * b.gm.at(i, j) + hv * b.cubic.at(k, i, j);
                out.at(k, n + i, n + j) = v4;
            }
    return out;
}

Tensor3D gradientf1_wrt_lc_twisted(const MetricField& g, const ScalarField& f,
                                   const ScalarField& h, const ScalarField& f1, const TMPoint& p,
                                   int curvature_sign) {
    const int n = g.dim();
    const int m = 2 * n;
    ConnectionField lc = levi_civita(g);
    lc.set_curvature_sign(curvature_sign);
    BaseData b(g, lc, p);
    WeightData wf(g, f, p, b.gam);
    const double fv = f.eval(p.x), hv = h.eval(p.x);
    Jet hj = h.eval_jet(p.x, 1);
    Jet f1j = f1.eval_jet(p.x, 2);
    Tensor3D out(m, m, m, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                out.at(i, j, k) = b.cubic.at(i, j, k) - g_af(b, wf, fv, i, j, k) -
                                  g_af(b, wf, fv, i, k, j);
                const double d1i = f1j.d1(i), d1j = f1j.d1(j);
                const double w15 = hj.d1(k) / (2.0 * fv) * b.gm.at(i, j) -
                                   hj.d1(k) / (2.0 * hv) * (b.gm.at(i, j) + d1j * d1i);
                out.at(n + i, n + j, k) = w15;
                out.at(n + i, k, n + j) = w15;
                double w16 = b.cubic.at(k, i, j) -
                             hj.d1(k) / hv * (b.gm.at(i, j) + d1j * d1i) +
                             f1j.d2(k, i) * d1j + f1j.d2(k, j) * d1i;
                for (int l = 0; l < n; ++l)
                    w16 -= b.gam.at(l, k, i) * f1j.d1(l) * d1j +
                           b.gam.at(l, k, j) * f1j.d1(l) * d1i;
                out.at(k, n + i, n + j) = w16;
                // Mixed component, directional-derivative reading of the
                // curvature-vector-applied-to-f1 notation.
                double w17 = 0.0;
                for (int r = 0; r < n; ++r) {
                    double rf1 = 0.0;
                    for (int t = 0; t < n; ++t) rf1 += b.rup.at(t, i, j, r) * f1j.d1(t);
                    w17 += 0.5 * b.y[r] * b.rlow.at(i, j, r, k) + 0.5 * b.y[r] * rf1 * f1j.d1(k) -
                           hv / (2.0 * fv) * b.y[r] * b.rlow.at(r, k, i, j);
                }
                out.at(i, j, n + k) = w17;
                out.at(i, n + k, j) = w17;
                double w17b = 0.0;
                for (int r = 0; r < n; ++r) w17b += b.y[r] * b.rlow.at(r, k, i, j);
                out.at(n + k, i, j) = -(hv / fv) * w17b;
            }
    return out;
}

}  // namespace liftgeo::formulas
