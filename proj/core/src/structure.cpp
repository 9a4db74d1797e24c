#include "liftgeo/structure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace liftgeo {

// ----------------------------------------------------------------- Sampler

std::uint64_t Sampler::next() {
    // splitmix64; a full PRNG quality stream is unnecessary here and this
    // keeps the byte-exactness contract trivial to audit.
    std::uint64_t z = (eng_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double Sampler::uniform(double lo, double hi) {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

double Sampler::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform(0.0, 1.0);
    while (u1 <= 1e-300) u1 = uniform(0.0, 1.0);
    const double u2 = uniform(0.0, 1.0);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
}

std::vector<double> Sampler::chart_point(const std::vector<Interval>& chart) {
    std::vector<double> x(chart.size());
    for (size_t i = 0; i < chart.size(); ++i) {
        const double inset = 0.05 * chart[i].width();
        x[i] = uniform(chart[i].lo + inset, chart[i].hi - inset);
    }
    return x;
}

TMPoint Sampler::tm_point(const std::vector<Interval>& chart, double fiber_range) {
    TMPoint p;
    p.x = chart_point(chart);
    p.y.resize(chart.size());
    for (size_t i = 0; i < chart.size(); ++i) p.y[i] = uniform(-fiber_range, fiber_range);
    return p;
}

std::vector<double> Sampler::unit_direction(const MatD& metric_at) {
    const int m = metric_at.n1;
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<double> v(m);
        for (int i = 0; i < m; ++i) v[i] = gaussian();
        double q = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) q += metric_at.at(i, j) * v[i] * v[j];
        if (q < 1e-12) continue;
        const double s = 1.0 / std::sqrt(q);
        for (double& c : v) c *= s;
        return v;
    }
    throw ZeroDirection("could not sample a direction of non-degenerate norm");
}

// ------------------------------------------------------------------ checks

namespace {

std::vector<double> flat_point(const TMPoint& p) {
    std::vector<double> out = p.x;
    out.insert(out.end(), p.y.begin(), p.y.end());
    return out;
}

// Frame components of a coordinate vector value.
std::vector<double> to_frame(const std::vector<double>& coords, const MatD& finv) {
    const int m = finv.n1;
    std::vector<double> out(m, 0.0);
    for (int A = 0; A < m; ++A)
        for (int g = 0; g < m; ++g) out[A] += coords[g] * finv.at(g, A);
    return out;
}

}  // namespace

CheckReport check_statistical(const TMMetric& metric, const TMConnection& conn,
                              const std::vector<TMPoint>& samples, double tol) {
    const int m = 2 * metric.dim();
    CheckReport rep;
    rep.name = "statistical-tm";
    rep.sample_count = static_cast<int>(samples.size());
    for (const auto& p : samples) {
        const auto fp = flat_point(p);
        Tensor3D t = tm_torsion(conn, p);
        for (int C = 0; C < m; ++C)
            for (int A = 0; A < m; ++A)
                for (int B = 0; B < m; ++B) {
                    const double r = std::fabs(t.at(C, A, B));
                    if (r > rep.max_residual) rep.note(fp, {-1, C, A, B}, r);
                }
        Tensor3D c = tm_cubic_tensor(metric, conn, p);
        for (int A = 0; A < m; ++A)
            for (int B = 0; B < m; ++B)
                for (int C = 0; C < m; ++C) {
                    const double v = c.at(A, B, C);
                    const double r = std::max(std::fabs(v - c.at(B, C, A)),
                                              std::fabs(v - c.at(C, A, B)));
                    if (r > rep.max_residual) rep.note(fp, {A, B, C}, r);
                }
    }
    rep.finalize(tol);
    return rep;
}

CheckReport check_killing_lift(LiftKind kind, const VectorField& X, const TMMetric& metric,
                               const std::vector<TMPoint>& samples, double tol) {
    const int n = metric.dim();
    const int m = 2 * n;
    CheckReport rep;
    rep.name = "killing-lift";
    rep.sample_count = static_cast<int>(samples.size());
    const ConnectionField& fc = metric.frame_connection();
    TMVectorField W = TMVectorField::lift(kind, X, fc);
    std::vector<TMVectorField> frame;
    for (int i = 0; i < n; ++i) frame.push_back(TMVectorField::frame_horizontal(i, fc));
    for (int i = 0; i < n; ++i) frame.push_back(TMVectorField::frame_vertical(i, n));
    for (const auto& p : samples) {
        const auto fp = flat_point(p);
        MatJ blocks = metric.blocks_jet(p, 1);
        MatD blockv(m, m, 0.0);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) blockv.at(a, b) = blocks.at(a, b).value();
        AdaptedFrame fr = adapted_frame(fc, p);
        std::vector<Jet> wj = W.coord_jets(p, 1);
        // Brackets [W, e_A] in frame components.
        std::vector<std::vector<double>> brk(m);
        for (int A = 0; A < m; ++A) {
            std::vector<Jet> b = tm_bracket_jets(W, frame[A], p, 0);
            std::vector<double> coords(m);
            for (int g = 0; g < m; ++g) coords[g] = b[g].value();
            brk[A] = to_frame(coords, fr.inv);
        }
        for (int A = 0; A < m; ++A)
            for (int B = A; B < m; ++B) {
                // W(G(e_A,e_B)) - G([W,e_A],e_B) - G(e_A,[W,e_B])
                double v = 0.0;
                for (int g = 0; g < m; ++g) v += wj[g].value() * blocks.at(A, B).d1(g);
                for (int D = 0; D < m; ++D)
                    v -= brk[A][D] * blockv.at(D, B) + brk[B][D] * blockv.at(A, D);
                const double r = std::fabs(v);
                if (r > rep.max_residual) rep.note(fp, {A, B}, r);
            }
    }
    rep.finalize(tol);
    return rep;
}

CheckReport check_affine_lift(LiftKind kind, const VectorField& X, const TMConnection& conn,
                              const std::vector<TMPoint>& samples, double tol) {
    const int n = conn.dim();
    const int m = 2 * n;
    CheckReport rep;
    rep.name = "affine-lift";
    rep.sample_count = static_cast<int>(samples.size());
    const ConnectionField& fc = conn.base();
    TMVectorField W = TMVectorField::lift(kind, X, fc);
    std::vector<TMVectorField> frame;
    for (int i = 0; i < n; ++i) frame.push_back(TMVectorField::frame_horizontal(i, fc));
    for (int i = 0; i < n; ++i) frame.push_back(TMVectorField::frame_vertical(i, n));
    for (const auto& p : samples) {
        const auto fp = flat_point(p);
        Tensor3J gam = conn.coeffs_jet(p, 1);
        Tensor3D gamv(m, m, m);
        for (int C = 0; C < m; ++C)
            for (int A = 0; A < m; ++A)
                for (int B = 0; B < m; ++B) gamv.at(C, A, B) = gam.at(C, A, B).value();
        Tensor3D base_gam = fc.eval(p.x);
        MatJ fr_jet = adapted_frame_jet(fc, p, 1);
        MatJ finv_jet = adapted_frame_inverse_jet(fc, p, 1);
        AdaptedFrame fr = adapted_frame(fc, p);
        std::vector<Jet> wj = W.coord_jets(p, 1);

        for (int A = 0; A < m; ++A) {
            // [W, e_A] in frame components (values).
            std::vector<Jet> bA = tm_bracket_jets(W, frame[A], p, 0);
            std::vector<double> bAc(m);
            for (int g = 0; g < m; ++g) bAc[g] = bA[g].value();
            std::vector<double> bAf = to_frame(bAc, fr.inv);
            for (int B = 0; B < m; ++B) {
                // P = conn_{e_A} e_B as a field: frame comps Gamma^C_{AB}(x,y).
                // L_W P = [W, P], computed from coordinate components.
                std::vector<double> lwp(m, 0.0);
                {
                    std::vector<Jet> pj(m, Jet::constant(m, 1, 0.0));
                    for (int g = 0; g < m; ++g) {
                        Jet s = Jet::constant(m, 1, 0.0);
                        for (int C = 0; C < m; ++C) s += gam.at(C, A, B) * fr_jet.at(C, g);
                        pj[g] = s;
                    }
                    for (int g = 0; g < m; ++g) {
                        double v = 0.0;
                        for (int a = 0; a < m; ++a)
                            v += wj[a].value() * pj[g].d1(a) - pj[a].value() * wj[g].d1(a);
                        lwp[g] = v;
                    }
                }
                // Q = [W, e_B] as a field; conn_{e_A} Q.
                std::vector<double> caq(m, 0.0);
                {
                    std::vector<Jet> qj = tm_bracket_jets(W, frame[B], p, 1);
                    std::vector<Jet> qf(m, Jet::constant(m, 1, 0.0));
                    for (int C = 0; C < m; ++C) {
                        Jet s = Jet::constant(m, 1, 0.0);
                        for (int g = 0; g < m; ++g) s += qj[g] * finv_jet.at(g, C);
                        qf[C] = s;
                    }
                    for (int C = 0; C < m; ++C) {
                        double v = frame_deriv(qf[C], A, base_gam, p.y);
                        for (int D = 0; D < m; ++D) v += gamv.at(C, A, D) * qf[D].value();
                        caq[C] = v;
                    }
                }
                // conn_{[W,e_A]} e_B.
                std::vector<double> cwb(m, 0.0);
                for (int C = 0; C < m; ++C)
                    for (int D = 0; D < m; ++D) cwb[C] += bAf[D] * gamv.at(C, D, B);
                // Convert L_W P to frame components and combine.
                std::vector<double> lwp_f = to_frame(lwp, fr.inv);
                for (int C = 0; C < m; ++C) {
                    const double r = std::fabs(lwp_f[C] - caq[C] - cwb[C]);
                    if (r > rep.max_residual) rep.note(fp, {C, A, B}, r);
                }
            }
        }
    }
    rep.finalize(tol);
    return rep;
}

JacobiValue jacobi_operator(const TMConnection& conn, const TMPoint& p,
                            std::span<const double> v_frame) {
    const int m = 2 * conn.dim();
    double norm = 0.0;
    for (double c : v_frame) norm += c * c;
    if (norm == 0.0) throw ZeroDirection("Jacobi operator needs a nonzero direction");
    Tensor4D r = tm_curvature(conn, p);
    JacobiValue out;
    out.point = p;
    out.direction.assign(v_frame.begin(), v_frame.end());
    out.matrix = MatD(m, m, 0.0);
    for (int D = 0; D < m; ++D)
        for (int A = 0; A < m; ++A) {
            double s = 0.0;
            for (int B = 0; B < m; ++B)
                for (int C = 0; C < m; ++C) s += r.at(D, A, B, C) * v_frame[B] * v_frame[C];
            out.matrix.at(D, A) = s;
        }
    out.trace = 0.0;
    for (int A = 0; A < m; ++A) out.trace += out.matrix.at(A, A);
    out.spectrum = eigenvalues(out.matrix);
    return out;
}

namespace {

double trace_of_power(const MatD& m, int t) {
    const int n = m.n1;
    MatD acc = m;
    for (int i = 1; i < t; ++i) {
        MatD next(n, n, 0.0);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) s += acc.at(r, k) * m.at(k, c);
                next.at(r, c) = s;
            }
        acc = next;
    }
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += acc.at(i, i);
    return tr;
}

}  // namespace

CheckReport k_stein_check(const TMConnection& conn, const TMMetric& metric, int k,
                          const std::vector<TMPoint>& points, int directions_per_point, double tol,
                          Sampler& sampler) {
    CheckReport rep;
    rep.name = "k-stein";
    rep.sample_count = static_cast<int>(points.size()) * directions_per_point;
    double raw_spread = 0.0;
    for (const auto& p : points) {
        const auto fp = flat_point(p);
        MatD gm = metric.blocks(p);
        std::vector<std::vector<double>> traces(k);
        std::vector<double> raw;
        for (int d = 0; d < directions_per_point; ++d) {
            std::vector<double> v = sampler.unit_direction(gm);
            JacobiValue jv = jacobi_operator(conn, p, v);
            for (int t = 1; t <= k; ++t) traces[t - 1].push_back(trace_of_power(jv.matrix, t));
            // Unnormalized variant: same direction before metric scaling.
            std::vector<double> vr = v;
            for (double& c : vr) c *= 1.7;
            JacobiValue jr = jacobi_operator(conn, p, vr);
            raw.push_back(jr.trace);
        }
        for (int t = 1; t <= k; ++t) {
            const auto [mn, mx] = std::minmax_element(traces[t - 1].begin(), traces[t - 1].end());
            const double spread = *mx - *mn;
            if (spread > rep.max_residual) rep.note(fp, {t}, spread);
        }
        const auto [rn, rx] = std::minmax_element(raw.begin(), raw.end());
        raw_spread = std::max(raw_spread, *rx - *rn);
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "unnormalized_trace_spread=%.6e", raw_spread);
    rep.interpretation_flags.push_back(buf);
    rep.finalize(tol);
    return rep;
}

CheckReport osserman_check(const TMConnection& conn, const TMMetric& metric,
                           const std::vector<TMPoint>& points, int directions_per_point,
                           double tol, Sampler& sampler) {
    CheckReport rep;
    rep.name = "osserman";
    rep.sample_count = static_cast<int>(points.size()) * directions_per_point;
    std::vector<std::complex<double>> ref;
    bool have_ref = false;
    for (const auto& p : points) {
        const auto fp = flat_point(p);
        MatD gm = metric.blocks(p);
        for (int d = 0; d < directions_per_point; ++d) {
            std::vector<double> v = sampler.unit_direction(gm);
            JacobiValue jv = jacobi_operator(conn, p, v);
            if (!have_ref) {
                ref = jv.spectrum;
                have_ref = true;
                continue;
            }
            for (size_t i = 0; i < ref.size(); ++i) {
                const double r = std::abs(jv.spectrum[i] - ref[i]);
                if (r > rep.max_residual) rep.note(fp, {static_cast<int>(i)}, r);
            }
        }
    }
    rep.finalize(tol);
    return rep;
}

}  // namespace liftgeo
