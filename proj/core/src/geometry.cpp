#include "liftgeo/geometry.hpp"

#include <cmath>

namespace liftgeo {

// ---------------------------------------------------------------- tensors

MatJ invert(const MatJ& a) {
    const int n = a.n1;
    const int m = a.v.empty() ? 0 : a.v[0].nvars();
    const int ord = a.v.empty() ? 0 : a.v[0].order();
    MatJ work = a;
    MatJ inv(n, n, Jet::constant(m, ord, 0.0));
    for (int i = 0; i < n; ++i) inv.at(i, i) = Jet::constant(m, ord, 1.0);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(work.at(r, col).value()) > std::fabs(work.at(piv, col).value())) piv = r;
        if (std::fabs(work.at(piv, col).value()) < 1e-13)
            throw SingularMetric("matrix inversion: pivot below 1e-13");
        if (piv != col)
            for (int c = 0; c < n; ++c) {
                std::swap(work.at(piv, c), work.at(col, c));
                std::swap(inv.at(piv, c), inv.at(col, c));
            }
        const Jet scale = recip(work.at(col, col));
        for (int c = 0; c < n; ++c) {
            work.at(col, c) = work.at(col, c) * scale;
            inv.at(col, c) = inv.at(col, c) * scale;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const Jet factor = work.at(r, col);
            if (factor.value() == 0.0 && factor.nvars() == 0) continue;
            for (int c = 0; c < n; ++c) {
                work.at(r, c) -= factor * work.at(col, c);
                inv.at(r, c) -= factor * inv.at(col, c);
            }
        }
    }
    return inv;
}

MatD invert(const MatD& a) {
    const int n = a.n1;
    MatD work = a;
    MatD inv(n, n, 0.0);
    for (int i = 0; i < n; ++i) inv.at(i, i) = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(work.at(r, col)) > std::fabs(work.at(piv, col))) piv = r;
        if (std::fabs(work.at(piv, col)) < 1e-13)
            throw SingularMetric("matrix inversion: pivot below 1e-13");
        if (piv != col)
            for (int c = 0; c < n; ++c) {
                std::swap(work.at(piv, c), work.at(col, c));
                std::swap(inv.at(piv, c), inv.at(col, c));
            }
        const double scale = 1.0 / work.at(col, col);
        for (int c = 0; c < n; ++c) {
            work.at(col, c) *= scale;
            inv.at(col, c) *= scale;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double factor = work.at(r, col);
            for (int c = 0; c < n; ++c) {
                work.at(r, c) -= factor * work.at(col, c);
                inv.at(r, c) -= factor * inv.at(col, c);
            }
        }
    }
    return inv;
}

bool is_spd(const MatD& a) {
    const int n = a.n1;
    MatD l(n, n, 0.0);
    for (int j = 0; j < n; ++j) {
        double diag = a.at(j, j);
        for (int k = 0; k < j; ++k) diag -= l.at(j, k) * l.at(j, k);
        if (diag <= 0.0 || !std::isfinite(diag)) return false;
        l.at(j, j) = std::sqrt(diag);
        for (int i = j + 1; i < n; ++i) {
            double s = a.at(i, j);
            for (int k = 0; k < j; ++k) s -= l.at(i, k) * l.at(j, k);
            l.at(i, j) = s / l.at(j, j);
        }
    }
    return true;
}

// ------------------------------------------------------------ MetricField

MetricField::MetricField(int dim, std::vector<ScalarField> sym_components,
                         std::vector<Interval> chart)
    : dim_(dim), comps_(std::move(sym_components)), chart_(std::move(chart)) {
    if (static_cast<int>(comps_.size()) != sym2_size(dim))
        throw ValidationError("metric needs " + std::to_string(sym2_size(dim)) +
                              " symmetric components");
    if (static_cast<int>(chart_.size()) != dim)
        throw ValidationError("chart must declare one interval per coordinate");
    for (const auto& iv : chart_)
        if (!(iv.lo < iv.hi)) throw ValidationError("chart interval is empty");
}

MatD MetricField::eval(std::span<const double> x) const {
    MatD g(dim_, dim_, 0.0);
    for (int j = 0; j < dim_; ++j)
        for (int i = 0; i <= j; ++i) {
            const double v = at(i, j).eval(x);
            g.at(i, j) = v;
            g.at(j, i) = v;
        }
    return g;
}

MatJ MetricField::eval_jet(std::span<const double> x, int order, bool tm_mode,
                           std::span<const double> y) const {
    const int m = tm_mode ? 2 * dim_ : dim_;
    MatJ g(dim_, dim_, Jet::constant(m, order, 0.0));
    for (int j = 0; j < dim_; ++j)
        for (int i = 0; i <= j; ++i) {
            Jet v = tm_mode ? at(i, j).eval_jet_tm(x, y, order) : at(i, j).eval_jet(x, order);
            g.at(i, j) = v;
            g.at(j, i) = v;
        }
    return g;
}

void MetricField::require_spd(const std::vector<std::vector<double>>& points) const {
    for (const auto& p : points)
        if (!is_spd(eval(p)))
            throw ValidationError("metric is not positive-definite at a sampled chart point");
}

// -------------------------------------------------------- ConnectionField

ConnectionField ConnectionField::explicit_coeffs(int dim, std::vector<ScalarField> coeffs) {
    if (static_cast<int>(coeffs.size()) != dim * dim * dim)
        throw ValidationError("connection needs dim^3 coefficient expressions");
    ConnectionField c;
    c.dim_ = dim;
    c.lc_ = false;
    c.coeffs_ = std::move(coeffs);
    return c;
}

ConnectionField ConnectionField::levi_civita_of(const MetricField& g) {
    ConnectionField c;
    c.dim_ = g.dim();
    c.lc_ = true;
    c.g_ = g;
    return c;
}

Tensor3D ConnectionField::eval(std::span<const double> x) const {
    Tensor3J jets = eval_jet(x, 0);
    Tensor3D out(dim_, dim_, dim_);
    for (int k = 0; k < dim_; ++k)
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) out.at(k, i, j) = jets.at(k, i, j).value();
    return out;
}

Tensor3J ConnectionField::eval_jet(std::span<const double> x, int order, bool tm_mode,
                                   std::span<const double> y) const {
    const int n = dim_;
    const int m = tm_mode ? 2 * n : n;
    Tensor3J out(n, n, n, Jet::constant(m, order, 0.0));
    if (!lc_) {
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const ScalarField& e = coeffs_[(k * n + i) * n + j];
                    out.at(k, i, j) =
                        tm_mode ? e.eval_jet_tm(x, y, order) : e.eval_jet(x, order);
                }
        return out;
    }
    // Gamma^k_{ij} = (1/2) g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
    MatJ g = g_.eval_jet(x, order + 1, tm_mode, y);
    MatJ ginv_full = invert(g);
    MatJ ginv(n, n, Jet::constant(m, order, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ginv.at(i, j) = ginv_full.at(i, j).truncated(order);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                Jet sum = Jet::constant(m, order, 0.0);
                for (int l = 0; l < n; ++l) {
                    Jet bracket = g.at(j, l).derivative(i) + g.at(i, l).derivative(j) -
                                  g.at(i, j).derivative(l);
                    sum += ginv.at(k, l) * bracket;
                }
                out.at(k, i, j) = 0.5 * sum;
            }
    return out;
}

Grid4<Jet> ConnectionField::curvature_jet(std::span<const double> x, int order, bool tm_mode,
                                          std::span<const double> y) const {
    const int n = dim_;
    Tensor3J gam = eval_jet(x, order + 1, tm_mode, y);
    Grid4<Jet> r(n, n, n, n);
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    Jet v = gam.at(l, j, k).derivative(i) - gam.at(l, i, k).derivative(j);
                    for (int mm = 0; mm < n; ++mm)
                        v += gam.at(l, i, mm).truncated(order) * gam.at(mm, j, k).truncated(order) -
                             gam.at(l, j, mm).truncated(order) * gam.at(mm, i, k).truncated(order);
                    if (curvature_sign_ < 0) v = -v;
                    r.at(l, i, j, k) = v;
                }
    return r;
}

// -------------------------------------------------------------- VectorField

VectorField::VectorField(int dim, std::vector<ScalarField> components)
    : dim_(dim), comps_(std::move(components)) {
    if (static_cast<int>(comps_.size()) != dim)
        throw ValidationError("vector field needs dim components");
}

std::vector<double> VectorField::eval(std::span<const double> x) const {
    std::vector<double> out(dim_);
    for (int i = 0; i < dim_; ++i) out[i] = comps_[i].eval(x);
    return out;
}

std::vector<Jet> VectorField::eval_jet(std::span<const double> x, int order, bool tm_mode,
                                       std::span<const double> y) const {
    std::vector<Jet> out;
    out.reserve(dim_);
    for (int i = 0; i < dim_; ++i)
        out.push_back(tm_mode ? comps_[i].eval_jet_tm(x, y, order) : comps_[i].eval_jet(x, order));
    return out;
}

// ------------------------------------------------------------- operations

ConnectionField levi_civita(const MetricField& g) { return ConnectionField::levi_civita_of(g); }

CurvatureValue curvature(const ConnectionField& conn, std::span<const double> x,
                         const MetricField* g) {
    const int n = conn.dim();
    Grid4<Jet> rj = conn.curvature_jet(x, 0);
    CurvatureValue out;
    out.point.assign(x.begin(), x.end());
    out.up = Tensor4D(n, n, n, n);
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) out.up.at(l, i, j, k) = rj.at(l, i, j, k).value();
    const MetricField* metric = g;
    if (!metric && conn.is_levi_civita()) metric = &conn.metric();
    if (metric) {
        MatD gm = metric->eval(x);
        out.lowered = Tensor4D(n, n, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        double s = 0.0;
                        for (int mm = 0; mm < n; ++mm)
                            s += gm.at(l, mm) * out.up.at(mm, i, j, k);
                        out.lowered.at(i, j, k, l) = s;
                    }
    }
    return out;
}

Tensor3D torsion(const ConnectionField& conn, std::span<const double> x) {
    const int n = conn.dim();
    Tensor3D gam = conn.eval(x);
    Tensor3D t(n, n, n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) t.at(k, i, j) = gam.at(k, i, j) - gam.at(k, j, i);
    return t;
}

CubicValue cubic_tensor(const MetricField& g, const ConnectionField& conn,
                        std::span<const double> x) {
    const int n = g.dim();
    MatJ gj = g.eval_jet(x, 1);
    Tensor3D gam = conn.eval(x);
    CubicValue out;
    out.point.assign(x.begin(), x.end());
    out.c = Tensor3D(n, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double v = gj.at(j, k).d1(i);
                for (int r = 0; r < n; ++r)
                    v -= gam.at(r, i, j) * gj.at(r, k).value() +
                         gam.at(r, i, k) * gj.at(j, r).value();
                out.c.at(i, j, k) = v;
            }
    return out;
}

CheckReport is_codazzi(const MetricField& g, const ConnectionField& conn,
                       const std::vector<std::vector<double>>& samples, double tol) {
    const int n = g.dim();
    CheckReport rep;
    rep.name = "codazzi-base";
    rep.sample_count = static_cast<int>(samples.size());
    for (const auto& p : samples) {
        CubicValue cv = cubic_tensor(g, conn, p);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    const double c = cv.c.at(i, j, k);
                    const double r1 = std::fabs(c - cv.c.at(j, k, i));
                    const double r2 = std::fabs(c - cv.c.at(k, i, j));
                    const double r = std::max(r1, r2);
                    if (r > rep.max_residual) rep.note(p, {i, j, k}, r);
                }
    }
    rep.finalize(tol);
    return rep;
}

MatD lie_derivative_metric(const VectorField& X, const MetricField& g, std::span<const double> x) {
    const int n = g.dim();
    MatJ gj = g.eval_jet(x, 1);
    std::vector<Jet> xj = X.eval_jet(x, 1);
    MatD out(n, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = 0.0;
            for (int k = 0; k < n; ++k)
                v += xj[k].value() * gj.at(i, j).d1(k) + gj.at(k, j).value() * xj[k].d1(i) +
                     gj.at(i, k).value() * xj[k].d1(j);
            out.at(i, j) = v;
        }
    return out;
}

Tensor3D lie_derivative_connection(const VectorField& X, const ConnectionField& conn,
                                   std::span<const double> x) {
    const int n = conn.dim();
    Tensor3J gj = conn.eval_jet(x, 1);
    std::vector<Jet> xj = X.eval_jet(x, 2);
    Tensor3D out(n, n, n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double v = xj[k].d2(i, j);
                for (int m = 0; m < n; ++m)
                    v += xj[m].value() * gj.at(k, i, j).d1(m) -
                         gj.at(m, i, j).value() * xj[k].d1(m) +
                         gj.at(k, m, j).value() * xj[m].d1(i) +
                         gj.at(k, i, m).value() * xj[m].d1(j);
                out.at(k, i, j) = v;
            }
    return out;
}

std::vector<Jet> gradient_jet(const MetricField& g, const ScalarField& f,
                              std::span<const double> x, int order, bool tm_mode,
                              std::span<const double> y) {
    const int n = g.dim();
    MatJ gj = g.eval_jet(x, order, tm_mode, y);
    MatJ ginv = invert(gj);
    Jet fj = tm_mode ? f.eval_jet_tm(x, y, order + 1) : f.eval_jet(x, order + 1);
    std::vector<Jet> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        Jet v = Jet::constant(tm_mode ? 2 * n : n, order, 0.0);
        for (int j = 0; j < n; ++j) v += ginv.at(i, j) * fj.derivative(j).truncated(order);
        out.push_back(v);
    }
    return out;
}

std::vector<double> gradient(const MetricField& g, const ScalarField& phi,
                             std::span<const double> x) {
    std::vector<Jet> gj = gradient_jet(g, phi, x, 0);
    std::vector<double> out(gj.size());
    for (size_t i = 0; i < gj.size(); ++i) out[i] = gj[i].value();
    return out;
}

std::vector<double> a_f(const MetricField& g, const ScalarField& f, std::span<const double> x,
                        std::span<const double> X, std::span<const double> Y) {
    const int n = g.dim();
    const double fv = f.eval(x);
    if (fv <= 0.0) throw NonPositiveWeight("weight function is non-positive at the point");
    Jet fj = f.eval_jet(x, 1);
    MatD gm = g.eval(x);
    std::vector<double> grad = gradient(g, f, x);
    double xf = 0.0, yf = 0.0, gxy = 0.0;
    for (int i = 0; i < n; ++i) {
        xf += X[i] * fj.d1(i);
        yf += Y[i] * fj.d1(i);
        for (int j = 0; j < n; ++j) gxy += gm.at(i, j) * X[i] * Y[j];
    }
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = (xf * Y[i] + yf * X[i] - gxy * grad[i]) / (2.0 * fv);
    return out;
}

}  // namespace liftgeo
