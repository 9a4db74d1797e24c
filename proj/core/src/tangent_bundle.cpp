#include "liftgeo/tangent_bundle.hpp"

#include <cmath>

namespace liftgeo {

namespace {

Jet jconst(int m, int order, double v) { return Jet::constant(m, order, v); }

// Weight functions must stay strictly positive on the chart.
void require_positive(const ScalarField& w, std::span<const double> x, const char* name) {
    if (w.eval(x) <= 0.0)
        throw NonPositiveWeight(std::string("weight function ") + name +
                                " is non-positive at a sampled point");
}

}  // namespace

// ------------------------------------------------------------------ frame

AdaptedFrame adapted_frame(const ConnectionField& conn, const TMPoint& p) {
    const int n = conn.dim();
    Tensor3D gam = conn.eval(p.x);
    AdaptedFrame f;
    f.m = MatD(2 * n, 2 * n, 0.0);
    f.inv = MatD(2 * n, 2 * n, 0.0);
    for (int i = 0; i < n; ++i) {
        f.m.at(i, i) = 1.0;
        f.m.at(n + i, n + i) = 1.0;
        f.inv.at(i, i) = 1.0;
        f.inv.at(n + i, n + i) = 1.0;
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += p.y[k] * gam.at(j, k, i);
            f.m.at(i, n + j) = -s;
            f.inv.at(i, n + j) = s;
        }
    }
    return f;
}

MatJ adapted_frame_jet(const ConnectionField& conn, const TMPoint& p, int order) {
    const int n = conn.dim();
    const int m = 2 * n;
    Tensor3J gam = conn.eval_jet(p.x, order, true, p.y);
    MatJ f(m, m, jconst(m, order, 0.0));
    for (int i = 0; i < n; ++i) {
        f.at(i, i) = jconst(m, order, 1.0);
        f.at(n + i, n + i) = jconst(m, order, 1.0);
        for (int j = 0; j < n; ++j) {
            Jet s = jconst(m, order, 0.0);
            for (int k = 0; k < n; ++k)
                s += Jet::variable(m, order, n + k, p.y[k]) * gam.at(j, k, i);
            f.at(i, n + j) = -s;
        }
    }
    return f;
}

MatJ adapted_frame_inverse_jet(const ConnectionField& conn, const TMPoint& p, int order) {
    const int n = conn.dim();
    MatJ f = adapted_frame_jet(conn, p, order);
    // The inverse is closed form: flip the sign of the off-diagonal block.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) f.at(i, n + j) = -f.at(i, n + j);
    return f;
}

Tensor3D structure_functions(const ConnectionField& conn, const TMPoint& p) {
    Tensor3J j = structure_functions_jet(conn, p, 0);
    const int m = 2 * conn.dim();
    Tensor3D out(m, m, m);
    for (int c = 0; c < m; ++c)
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) out.at(c, a, b) = j.at(c, a, b).value();
    return out;
}

Tensor3J structure_functions_jet(const ConnectionField& conn, const TMPoint& p, int order) {
    const int n = conn.dim();
    const int m = 2 * n;
    Tensor3J out(m, m, m, jconst(m, order, 0.0));
    Tensor3J gam = conn.eval_jet(p.x, order, true, p.y);
    Grid4<Jet> r = conn.curvature_jet(p.x, order, true, p.y);
    // [delta_i, delta_j] = -(R(d_i,d_j)y)^v
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Jet s = jconst(m, order, 0.0);
                for (int t = 0; t < n; ++t)
                    s += Jet::variable(m, order, n + t, p.y[t]) * r.at(k, i, j, t);
                out.at(n + k, i, j) = -s;
            }
    // [delta_i, dbar_j] = Gamma^k_{ji} dbar_k
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                out.at(n + k, i, n + j) = gam.at(k, j, i);
                out.at(n + k, n + j, i) = -gam.at(k, j, i);
            }
    return out;
}

double frame_deriv(const Jet& phi, int A, const Tensor3D& gamma, std::span<const double> y) {
    const int n = static_cast<int>(y.size());
    if (A >= n) return phi.d1(A);
    double v = phi.d1(A);
    for (int j = 0; j < n; ++j) {
        double coef = 0.0;
        for (int k = 0; k < n; ++k) coef += y[k] * gamma.at(j, k, A);
        v -= coef * phi.d1(n + j);
    }
    return v;
}

// ------------------------------------------------------------------ lifts

TMVectorValue lift_vector(LiftKind kind, const VectorField& X, const ConnectionField& conn,
                          const TMPoint& p) {
    const int n = X.dim();
    TMVectorValue out;
    out.horiz.assign(n, 0.0);
    out.vert.assign(n, 0.0);
    out.coords.assign(2 * n, 0.0);
    std::vector<Jet> xj = X.eval_jet(p.x, 1);
    switch (kind) {
        case LiftKind::Vertical:
            for (int i = 0; i < n; ++i) {
                out.vert[i] = xj[i].value();
                out.coords[n + i] = xj[i].value();
            }
            break;
        case LiftKind::Horizontal: {
            Tensor3D gam = conn.eval(p.x);
            for (int i = 0; i < n; ++i) {
                out.horiz[i] = xj[i].value();
                out.coords[i] = xj[i].value();
            }
            for (int k = 0; k < n; ++k) {
                double s = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int i = 0; i < n; ++i) s += p.y[a] * gam.at(k, a, i) * xj[i].value();
                out.coords[n + k] = -s;
            }
            break;
        }
        case LiftKind::Complete: {
            for (int i = 0; i < n; ++i) {
                out.coords[i] = xj[i].value();
                double s = 0.0;
                for (int a = 0; a < n; ++a) s += p.y[a] * xj[i].d1(a);
                out.coords[n + i] = s;
            }
            AdaptedFrame f = adapted_frame(conn, p);
            for (int A = 0; A < 2 * n; ++A) {
                double s = 0.0;
                for (int al = 0; al < 2 * n; ++al) s += out.coords[al] * f.inv.at(al, A);
                (A < n ? out.horiz[A] : out.vert[A - n]) = s;
            }
            break;
        }
    }
    return out;
}

TMVectorField TMVectorField::lift(LiftKind kind, VectorField X, ConnectionField conn) {
    TMVectorField f;
    f.kind_ = Kind::Lift;
    f.lift_ = kind;
    f.dim_ = X.dim();
    f.base_ = std::move(X);
    f.conn_ = std::move(conn);
    return f;
}

TMVectorField TMVectorField::frame_horizontal(int i, ConnectionField conn) {
    TMVectorField f;
    f.kind_ = Kind::FrameH;
    f.frame_index_ = i;
    f.dim_ = conn.dim();
    f.conn_ = std::move(conn);
    return f;
}

TMVectorField TMVectorField::frame_vertical(int i, int dim) {
    TMVectorField f;
    f.kind_ = Kind::FrameV;
    f.frame_index_ = i;
    f.dim_ = dim;
    return f;
}

std::vector<Jet> TMVectorField::coord_jets(const TMPoint& p, int order) const {
    const int n = dim_;
    const int m = 2 * n;
    std::vector<Jet> out(2 * n, jconst(m, order, 0.0));
    switch (kind_) {
        case Kind::FrameV:
            out[n + frame_index_] = jconst(m, order, 1.0);
            return out;
        case Kind::FrameH: {
            Tensor3J gam = conn_.eval_jet(p.x, order, true, p.y);
            out[frame_index_] = jconst(m, order, 1.0);
            for (int j = 0; j < n; ++j) {
                Jet s = jconst(m, order, 0.0);
                for (int k = 0; k < n; ++k)
                    s += Jet::variable(m, order, n + k, p.y[k]) * gam.at(j, k, frame_index_);
                out[n + j] = -s;
            }
            return out;
        }
        case Kind::Lift:
            break;
    }
    std::vector<Jet> xj = base_.eval_jet(p.x, order + (lift_ == LiftKind::Complete ? 1 : 0), true,
                                         p.y);
    switch (lift_) {
        case LiftKind::Vertical:
            for (int i = 0; i < n; ++i) out[n + i] = xj[i];
            break;
        case LiftKind::Horizontal: {
            Tensor3J gam = conn_.eval_jet(p.x, order, true, p.y);
            for (int i = 0; i < n; ++i) out[i] = xj[i];
            for (int k = 0; k < n; ++k) {
                Jet s = jconst(m, order, 0.0);
                for (int a = 0; a < n; ++a)
                    for (int i = 0; i < n; ++i)
                        s += Jet::variable(m, order, n + a, p.y[a]) * gam.at(k, a, i) * xj[i];
                out[n + k] = -s;
            }
            break;
        }
        case LiftKind::Complete:
            for (int i = 0; i < n; ++i) {
                out[i] = xj[i].truncated(order);
                Jet s = jconst(m, order, 0.0);
                for (int a = 0; a < n; ++a)
                    s += Jet::variable(m, order, n + a, p.y[a]) * xj[i].derivative(a);
                out[n + i] = s;
            }
            break;
    }
    return out;
}

std::vector<Jet> tm_bracket_jets(const TMVectorField& A, const TMVectorField& B, const TMPoint& p,
                                 int order) {
    const int m = 2 * A.dim();
    std::vector<Jet> aj = A.coord_jets(p, order + 1);
    std::vector<Jet> bj = B.coord_jets(p, order + 1);
    std::vector<Jet> out(m, jconst(m, order, 0.0));
    for (int g = 0; g < m; ++g) {
        Jet s = jconst(m, order, 0.0);
        for (int a = 0; a < m; ++a)
            s += aj[a].truncated(order) * bj[g].derivative(a) -
                 bj[a].truncated(order) * aj[g].derivative(a);
        out[g] = s;
    }
    return out;
}

TMVectorValue tm_lie_bracket(const TMVectorField& A, const TMVectorField& B,
                             const ConnectionField& frame_conn, const TMPoint& p) {
    const int n = frame_conn.dim();
    std::vector<Jet> br = tm_bracket_jets(A, B, p, 0);
    AdaptedFrame f = adapted_frame(frame_conn, p);
    TMVectorValue out;
    out.coords.resize(2 * n);
    out.horiz.assign(n, 0.0);
    out.vert.assign(n, 0.0);
    for (int g = 0; g < 2 * n; ++g) out.coords[g] = br[g].value();
    for (int A2 = 0; A2 < 2 * n; ++A2) {
        double s = 0.0;
        for (int g = 0; g < 2 * n; ++g) s += out.coords[g] * f.inv.at(g, A2);
        (A2 < n ? out.horiz[A2] : out.vert[A2 - n]) = s;
    }
    return out;
}

// --------------------------------------------------------------- TMMetric

TMMetric TMMetric::sasaki(MetricField g, ConnectionField frame_conn) {
    TMMetric m;
    m.kind_ = TMMetricKind::Sasaki;
    m.g_ = std::move(g);
    m.conn_ = std::move(frame_conn);
    return m;
}

TMMetric TMMetric::twisted(MetricField g, ConnectionField frame_conn, ScalarField f,
                           ScalarField h) {
    TMMetric m;
    m.kind_ = TMMetricKind::Twisted;
    m.g_ = std::move(g);
    m.conn_ = std::move(frame_conn);
    m.f_ = std::move(f);
    m.h_ = std::move(h);
    return m;
}

TMMetric TMMetric::gradient(MetricField g, ConnectionField frame_conn, ScalarField f) {
    TMMetric m;
    m.kind_ = TMMetricKind::Gradient;
    m.g_ = std::move(g);
    m.conn_ = std::move(frame_conn);
    m.f_ = std::move(f);
    return m;
}

MatD TMMetric::blocks(const TMPoint& p) const {
    MatJ j = blocks_jet(p, 0);
    MatD out(j.n1, j.n2, 0.0);
    for (int a = 0; a < j.n1; ++a)
        for (int b = 0; b < j.n2; ++b) out.at(a, b) = j.at(a, b).value();
    return out;
}

MatJ TMMetric::blocks_jet(const TMPoint& p, int order) const {
    const int n = g_.dim();
    const int m = 2 * n;
    MatJ gj = g_.eval_jet(p.x, order, true, p.y);
    MatJ out(m, m, jconst(m, order, 0.0));
    switch (kind_) {
        case TMMetricKind::Sasaki:
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    out.at(i, j) = gj.at(i, j);
                    out.at(n + i, n + j) = gj.at(i, j);
                }
            break;
        case TMMetricKind::Twisted: {
            require_positive(f_, p.x, "f");
            require_positive(h_, p.x, "h");
            Jet fj = f_.eval_jet_tm(p.x, p.y, order);
            Jet hj = h_.eval_jet_tm(p.x, p.y, order);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    out.at(i, j) = fj * gj.at(i, j);
                    out.at(n + i, n + j) = hj * gj.at(i, j);
                }
            break;
        }
        case TMMetricKind::Gradient: {
            require_positive(f_, p.x, "f");
            Jet fj = f_.eval_jet_tm(p.x, p.y, order + 1);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    out.at(i, j) = gj.at(i, j);
                    out.at(n + i, n + j) =
                        gj.at(i, j) + fj.derivative(i).truncated(order) *
                                          fj.derivative(j).truncated(order);
                }
            break;
        }
    }
    return out;
}

MatD TMMetric::coord(const TMPoint& p) const {
    MatJ j = coord_jet(p, 0);
    MatD out(j.n1, j.n2, 0.0);
    for (int a = 0; a < j.n1; ++a)
        for (int b = 0; b < j.n2; ++b) out.at(a, b) = j.at(a, b).value();
    return out;
}

MatJ TMMetric::coord_jet(const TMPoint& p, int order) const {
    const int n = g_.dim();
    const int m = 2 * n;
    MatJ blocks = blocks_jet(p, order);
    MatJ finv = adapted_frame_inverse_jet(conn_, p, order);
    MatJ out(m, m, jconst(m, order, 0.0));
    for (int al = 0; al < m; ++al)
        for (int be = al; be < m; ++be) {
            Jet s = jconst(m, order, 0.0);
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b)
                    s += finv.at(al, a) * finv.at(be, b) * blocks.at(a, b);
            out.at(al, be) = s;
            out.at(be, al) = s;
        }
    return out;
}

// ----------------------------------------------------------- TMConnection

TMConnection TMConnection::horizontal_lift(ConnectionField base) {
    TMConnection c;
    c.kind_ = TMConnKind::HorizontalLift;
    c.base_ = std::move(base);
    return c;
}

TMConnection TMConnection::complete_lift(ConnectionField base) {
    TMConnection c;
    c.kind_ = TMConnKind::CompleteLift;
    c.base_ = std::move(base);
    return c;
}

TMConnection TMConnection::lc_closed_form(const TMMetric& metric) {
    if (!metric.frame_connection().is_levi_civita())
        throw ValidationError(
            "closed-form Levi-Civita lift connections assume the base Levi-Civita connection");
    TMConnection c;
    switch (metric.kind()) {
        case TMMetricKind::Sasaki: c.kind_ = TMConnKind::LCSasaki; break;
        case TMMetricKind::Twisted: c.kind_ = TMConnKind::LCTwisted; break;
        case TMMetricKind::Gradient: c.kind_ = TMConnKind::LCGradient; break;
    }
    c.base_ = metric.frame_connection();
    c.g_ = metric.base_metric();
    c.f_ = metric.fweight();
    c.h_ = metric.hweight();
    return c;
}

TMConnection TMConnection::numeric_lc(const TMMetric& metric) {
    TMConnection c;
    c.kind_ = TMConnKind::NumericLC;
    c.base_ = metric.frame_connection();
    c.g_ = metric.base_metric();
    c.metric_ = std::make_shared<TMMetric>(metric);
    return c;
}

Tensor3D TMConnection::coeffs(const TMPoint& p) const {
    Tensor3J j = coeffs_jet(p, 0);
    Tensor3D out(j.n1, j.n2, j.n3);
    for (int c = 0; c < j.n1; ++c)
        for (int a = 0; a < j.n2; ++a)
            for (int b = 0; b < j.n3; ++b) out.at(c, a, b) = j.at(c, a, b).value();
    return out;
}

Tensor3J TMConnection::coeffs_jet(const TMPoint& p, int order) const {
    const int n = base_.dim();
    const int m = 2 * n;
    Tensor3J out(m, m, m, jconst(m, order, 0.0));

    auto yvar = [&](int s) { return Jet::variable(m, order, n + s, p.y[s]); };

    if (kind_ == TMConnKind::HorizontalLift || kind_ == TMConnKind::CompleteLift) {
        Tensor3J gam = base_.eval_jet(p.x, order, true, p.y);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    out.at(k, i, j) = gam.at(k, i, j);
                    out.at(n + k, i, n + j) = gam.at(k, i, j);
                }
        if (kind_ == TMConnKind::CompleteLift) {
            Grid4<Jet> r = base_.curvature_jet(p.x, order, true, p.y);
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        Jet s = jconst(m, order, 0.0);
                        for (int t = 0; t < n; ++t) s += yvar(t) * r.at(k, t, i, j);
                        out.at(n + k, i, j) = s;
                    }
        }
        return out;
    }

    if (kind_ == TMConnKind::NumericLC) {
        // Koszul formula on the coordinate form, then change of frame.
        MatJ gc = metric_->coord_jet(p, order + 1);
        MatJ gcv(m, m, jconst(m, order, 0.0));
        {
            MatJ inv = invert(gc);
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b) gcv.at(a, b) = inv.at(a, b).truncated(order);
        }
        Tensor3J coord(m, m, m, jconst(m, order, 0.0));
        for (int g = 0; g < m; ++g)
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b) {
                    Jet s = jconst(m, order, 0.0);
                    for (int d = 0; d < m; ++d)
                        s += gcv.at(g, d) * (gc.at(b, d).derivative(a) + gc.at(a, d).derivative(b) -
                                             gc.at(a, b).derivative(d));
                    coord.at(g, a, b) = 0.5 * s;
                }
        MatJ fr_hi = adapted_frame_jet(base_, p, order + 1);
        MatJ fr(m, m, jconst(m, order, 0.0));
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) fr.at(a, b) = fr_hi.at(a, b).truncated(order);
        MatJ finv = adapted_frame_inverse_jet(base_, p, order);
        for (int C = 0; C < m; ++C)
            for (int A = 0; A < m; ++A)
                for (int B = 0; B < m; ++B) {
                    Jet s = jconst(m, order, 0.0);
                    for (int g = 0; g < m; ++g) {
                        Jet term = jconst(m, order, 0.0);
                        for (int a = 0; a < m; ++a) {
                            term += fr.at(A, a) * fr_hi.at(B, g).derivative(a);
                            for (int b = 0; b < m; ++b)
                                term += fr.at(A, a) * fr.at(B, b) * coord.at(g, a, b);
                        }
                        s += term * finv.at(g, C);
                    }
                    out.at(C, A, B) = s;
                }
        return out;
    }

    // Closed-form Levi-Civita connections of the lift metrics.
    Tensor3J gam = base_.eval_jet(p.x, order, true, p.y);
    Grid4<Jet> r = base_.curvature_jet(p.x, order, true, p.y);

    auto r_contract_y = [&](int k, int slot2, int slot3) {
        // sum_s y^s R^k_{s, slot2, slot3}
        Jet s = jconst(m, order, 0.0);
        for (int t = 0; t < n; ++t) s += yvar(t) * r.at(k, t, slot2, slot3);
        return s;
    };

    // Sasaki skeleton, shared by all three kinds.
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                out.at(k, i, j) = gam.at(k, i, j);
                out.at(n + k, i, n + j) = gam.at(k, i, j);
                Jet s = jconst(m, order, 0.0);
                for (int t = 0; t < n; ++t) s += yvar(t) * r.at(k, i, j, t);
                out.at(n + k, i, j) = -0.5 * s;  // -(1/2) R(d_i,d_j)y
                out.at(k, i, n + j) = 0.5 * r_contract_y(k, j, i);
                out.at(k, n + i, j) = 0.5 * r_contract_y(k, i, j);
            }

    if (kind_ == TMConnKind::LCSasaki) return out;

    if (kind_ == TMConnKind::LCTwisted) {
        require_positive(f_, p.x, "f");
        require_positive(h_, p.x, "h");
        Jet fj = f_.eval_jet_tm(p.x, p.y, order + 1);
        Jet hj = h_.eval_jet_tm(p.x, p.y, order + 1);
        MatJ gj = g_.eval_jet(p.x, order, true, p.y);
        std::vector<Jet> gradf = gradient_jet(g_, f_, p.x, order, true, p.y);
        std::vector<Jet> gradh = gradient_jet(g_, h_, p.x, order, true, p.y);
        Jet inv2f = recip(2.0 * fj.truncated(order));
        Jet inv2h = recip(2.0 * hj.truncated(order));
        Jet hover2f = hj.truncated(order) * inv2f;
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Jet dfi = fj.derivative(i).truncated(order);
                    Jet dfj = fj.derivative(j).truncated(order);
                    Jet af = jconst(m, order, 0.0);
                    if (k == j) af += dfi;
                    if (k == i) af += dfj;
                    af -= gj.at(i, j) * gradf[k];
                    out.at(k, i, j) += inv2f * af;
                    // rescale the Sasaki R-terms by h/f
                    out.at(k, i, n + j) = hover2f * r_contract_y(k, j, i);
                    out.at(k, n + i, j) = hover2f * r_contract_y(k, i, j);
                    if (k == j) out.at(n + k, i, n + j) += hj.derivative(i).truncated(order) * inv2h;
                    if (k == i) out.at(n + k, n + i, j) = hj.derivative(j).truncated(order) * inv2h;
                    out.at(k, n + i, n + j) = -(inv2f * gj.at(i, j)) * gradh[k];
                }
        return out;
    }

    // LCGradient
    require_positive(f_, p.x, "f");
    Jet fj = f_.eval_jet_tm(p.x, p.y, order + 2);
    MatJ gj = g_.eval_jet(p.x, order, true, p.y);
    std::vector<Jet> gradf_hi = gradient_jet(g_, f_, p.x, order + 1, true, p.y);
    std::vector<Jet> gradf(n);
    for (int i = 0; i < n; ++i) gradf[i] = gradf_hi[i].truncated(order);
    // P^k_j = (nabla_j grad f)^k
    MatJ P(n, n, jconst(m, order, 0.0));
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            Jet s = gradf_hi[k].derivative(j);
            for (int l = 0; l < n; ++l) s += gam.at(k, j, l) * gradf[l];
            P.at(k, j) = s;
        }
    // a = 1 + |grad f|^2, with one derivative order to spare
    Jet a_hi = jconst(m, order + 1, 1.0);
    for (int l = 0; l < n; ++l) a_hi += gradf_hi[l] * fj.derivative(l).truncated(order + 1);
    Jet inv2a = recip(2.0 * a_hi.truncated(order));

    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Jet dfi = fj.derivative(i).truncated(order);
                Jet dfj = fj.derivative(j).truncated(order);
                Jet dai = a_hi.derivative(i).truncated(order);
                Jet daj = a_hi.derivative(j).truncated(order);
                // sum_{s,t} y^s gradf^t R^k_{s t .}
                Jet rgf_i = jconst(m, order, 0.0), rgf_j = jconst(m, order, 0.0);
                for (int t = 0; t < n; ++t) {
                    rgf_i += gradf[t] * r_contract_y(k, t, i);
                    rgf_j += gradf[t] * r_contract_y(k, t, j);
                }
                out.at(k, i, n + j) += 0.5 * dfj * rgf_i;
                out.at(k, n + i, j) += 0.5 * dfi * rgf_j;
                Jet gP_ji = jconst(m, order, 0.0);  // g(d_j, nabla_i grad f)
                Jet gP_ij = jconst(m, order, 0.0);  // g(d_i, nabla_j grad f)
                for (int l = 0; l < n; ++l) {
                    gP_ji += gj.at(j, l) * P.at(l, i);
                    gP_ij += gj.at(i, l) * P.at(l, j);
                }
                out.at(n + k, i, n + j) += 0.5 * dfj * P.at(k, i) +
                                           inv2a * (gP_ji - 0.5 * dai * dfj) * gradf[k];
                out.at(n + k, n + i, j) = 0.5 * dfi * P.at(k, j) +
                                          inv2a * (gP_ij - 0.5 * daj * dfi) * gradf[k];
                out.at(k, n + i, n + j) = -0.5 * dfi * P.at(k, j) - 0.5 * dfj * P.at(k, i);
            }
    return out;
}

// ----------------------------------------------------- derived TM tensors

Tensor3D tm_torsion(const TMConnection& conn, const TMPoint& p) {
    const int m = 2 * conn.dim();
    Tensor3D gam = conn.coeffs(p);
    Tensor3D c = structure_functions(conn.base(), p);
    Tensor3D out(m, m, m);
    for (int C = 0; C < m; ++C)
        for (int A = 0; A < m; ++A)
            for (int B = 0; B < m; ++B)
                out.at(C, A, B) = gam.at(C, A, B) - gam.at(C, B, A) - c.at(C, A, B);
    return out;
}

Tensor4D tm_curvature(const TMConnection& conn, const TMPoint& p) {
    const int n = conn.dim();
    const int m = 2 * n;
    Tensor3J gam = conn.coeffs_jet(p, 1);
    Tensor3D gamv(m, m, m);
    for (int C = 0; C < m; ++C)
        for (int A = 0; A < m; ++A)
            for (int B = 0; B < m; ++B) gamv.at(C, A, B) = gam.at(C, A, B).value();
    Tensor3D c = structure_functions(conn.base(), p);
    Tensor3D base_gam = conn.base().eval(p.x);
    Tensor4D out(m, m, m, m);
    for (int D = 0; D < m; ++D)
        for (int A = 0; A < m; ++A)
            for (int B = 0; B < m; ++B)
                for (int C = 0; C < m; ++C) {
                    double v = frame_deriv(gam.at(D, B, C), A, base_gam, p.y) -
                               frame_deriv(gam.at(D, A, C), B, base_gam, p.y);
                    for (int E = 0; E < m; ++E)
                        v += gamv.at(D, A, E) * gamv.at(E, B, C) -
                             gamv.at(D, B, E) * gamv.at(E, A, C) -
                             c.at(E, A, B) * gamv.at(D, E, C);
                    out.at(D, A, B, C) = v;
                }
    return out;
}

Tensor3D tm_cubic_tensor(const TMMetric& metric, const TMConnection& conn, const TMPoint& p) {
    const int m = 2 * metric.dim();
    MatJ blocks = metric.blocks_jet(p, 1);
    Tensor3D gam = conn.coeffs(p);
    Tensor3D base_gam = metric.frame_connection().eval(p.x);
    Tensor3D out(m, m, m);
    for (int A = 0; A < m; ++A)
        for (int B = 0; B < m; ++B)
            for (int C = 0; C < m; ++C) {
                double v = frame_deriv(blocks.at(B, C), A, base_gam, p.y);
                for (int D = 0; D < m; ++D)
                    v -= gam.at(D, A, B) * blocks.at(D, C).value() +
                         gam.at(D, A, C) * blocks.at(B, D).value();
                out.at(A, B, C) = v;
            }
    return out;
}

}  // namespace liftgeo
