#include "liftgeo/runner.hpp"

#include <cmath>
#include <cstdlib>

#include "liftgeo/formulas.hpp"

namespace liftgeo {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t i = 0;
    while (true) {
        const size_t j = s.find(sep, i);
        if (j == std::string::npos) {
            out.push_back(s.substr(i));
            break;
        }
        out.push_back(s.substr(i, j - i));
        i = j + 1;
    }
    return out;
}

std::vector<TMPoint> tm_samples(const ManifoldDefinition& def, const RunConfig& cfg,
                                Sampler& sampler) {
    std::vector<TMPoint> out;
    out.reserve(cfg.samples);
    for (int i = 0; i < cfg.samples; ++i)
        out.push_back(sampler.tm_point(def.chart, cfg.fiber_range));
    return out;
}

// Random polynomial vector field of degree <= 2 with seeded coefficients.
VectorField random_poly_field(int dim, Sampler& sampler) {
    std::vector<ScalarField> comps;
    for (int i = 0; i < dim; ++i) {
        std::string expr;
        char buf[64];
        auto coeff = [&] { return sampler.uniform(-1.0, 1.0); };
        std::snprintf(buf, sizeof(buf), "%.6f", coeff());
        expr = buf;
        for (int a = 0; a < dim; ++a) {
            std::snprintf(buf, sizeof(buf), " + %.6f*x%d", coeff(), a);
            expr += buf;
            for (int b = a; b < dim; ++b) {
                std::snprintf(buf, sizeof(buf), " + %.6f*x%d*x%d", coeff(), a, b);
                expr += buf;
            }
        }
        comps.push_back(parse(expr, dim, false));
    }
    return VectorField(dim, std::move(comps));
}

CheckReport check_lc_oracle_agreement(const TMMetric& metric, const std::vector<TMPoint>& samples,
                                      double tol) {
    const int m = 2 * metric.dim();
    CheckReport rep;
    rep.name = "lc-oracle-agreement";
    rep.sample_count = static_cast<int>(samples.size());
    TMConnection closed = TMConnection::lc_closed_form(metric);
    TMConnection numeric = TMConnection::numeric_lc(metric);
    for (const auto& p : samples) {
        std::vector<double> fp = p.x;
        fp.insert(fp.end(), p.y.begin(), p.y.end());
        Tensor3D a = closed.coeffs(p);
        Tensor3D b = numeric.coeffs(p);
        for (int C = 0; C < m; ++C)
            for (int A = 0; A < m; ++A)
                for (int B = 0; B < m; ++B) {
                    const double r = std::fabs(a.at(C, A, B) - b.at(C, A, B));
                    if (r > rep.max_residual) rep.note(fp, {C, A, B}, r);
                }
    }
    rep.finalize(tol);
    return rep;
}

CheckReport check_bracket_identities(const ManifoldDefinition& def, const RunConfig& cfg,
                                     double tol) {
    const int n = def.dim;
    CheckReport rep;
    rep.name = "bracket-identities";
    Sampler sampler(cfg.seed);
    ConnectionField conn = def.connection();
    conn.set_curvature_sign(cfg.curvature_sign);
    MetricField g = def.metric();
    const int pairs = std::max(1, cfg.samples / 2);
    rep.sample_count = pairs;
    for (int it = 0; it < pairs; ++it) {
        VectorField X = random_poly_field(n, sampler);
        VectorField Y = random_poly_field(n, sampler);
        TMVectorField Xh = TMVectorField::lift(LiftKind::Horizontal, X, conn);
        TMVectorField Yh = TMVectorField::lift(LiftKind::Horizontal, Y, conn);
        TMVectorField Xv = TMVectorField::lift(LiftKind::Vertical, X, conn);
        TMVectorField Yv = TMVectorField::lift(LiftKind::Vertical, Y, conn);
        for (int s = 0; s < 3; ++s) {
            TMPoint p = sampler.tm_point(def.chart, cfg.fiber_range);
            std::vector<double> fp = p.x;
            fp.insert(fp.end(), p.y.begin(), p.y.end());
            std::vector<Jet> xj = X.eval_jet(p.x, 1);
            std::vector<Jet> yj = Y.eval_jet(p.x, 1);
            Tensor3D gam = conn.eval(p.x);
            CurvatureValue R = curvature(conn, p.x, &g);

            // [X^h, Y^h] = [X,Y]^h - (R(X,Y)y)^v
            TMVectorValue lhs = tm_lie_bracket(Xh, Yh, conn, p);
            for (int i = 0; i < n; ++i) {
                double bracket = 0.0;
                for (int a = 0; a < n; ++a)
                    bracket += xj[a].value() * yj[i].d1(a) - yj[a].value() * xj[i].d1(a);
                double rv = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        for (int s2 = 0; s2 < n; ++s2)
                            rv += xj[a].value() * yj[b].value() * p.y[s2] * R.up.at(i, a, b, s2);
                const double rh = std::fabs(lhs.horiz[i] - bracket);
                const double rvv = std::fabs(lhs.vert[i] + rv);
                if (rh > rep.max_residual) rep.note(fp, {0, i}, rh);
                if (rvv > rep.max_residual) rep.note(fp, {1, i}, rvv);
            }
            // [X^h, Y^v] = (nabla_X Y)^v - (T(X,Y))^v
            TMVectorValue mixed = tm_lie_bracket(Xh, Yv, conn, p);
            for (int k = 0; k < n; ++k) {
                double nab = 0.0, tor = 0.0;
                for (int i = 0; i < n; ++i) {
                    nab += xj[i].value() * yj[k].d1(i);
                    for (int l = 0; l < n; ++l) {
                        nab += xj[i].value() * gam.at(k, i, l) * yj[l].value();
                        tor += xj[i].value() * yj[l].value() *
                               (gam.at(k, i, l) - gam.at(k, l, i));
                    }
                }
                const double rh = std::fabs(mixed.horiz[k]);
                const double rv2 = std::fabs(mixed.vert[k] - (nab - tor));
                if (rh > rep.max_residual) rep.note(fp, {2, k}, rh);
                if (rv2 > rep.max_residual) rep.note(fp, {3, k}, rv2);
            }
            // [X^v, Y^v] = 0
            TMVectorValue vv = tm_lie_bracket(Xv, Yv, conn, p);
            for (int k = 0; k < n; ++k) {
                const double r = std::max(std::fabs(vv.horiz[k]), std::fabs(vv.vert[k]));
                if (r > rep.max_residual) rep.note(fp, {4, k}, r);
            }
        }
    }
    rep.finalize(tol);
    return rep;
}

struct FormulaFamily {
    Tensor3D values;
    // Frame-index triples whose printed formula depends on an unresolved
    // interpretation; they are reported, not scored.
    std::vector<std::array<int, 3>> flagged;
    Tensor3D variant;  // alternative reading for the flagged components
    bool has_variant = false;
};

FormulaFamily select_formula_family(const ManifoldDefinition& def, const TMMetric& metric,
                                    const TMConnection& conn, const TMPoint& p,
                                    const RunConfig& cfg) {
    const MetricField g = def.metric();
    const int n = g.dim();
    FormulaFamily fam;
    const TMMetricKind mk = metric.kind();
    const TMConnKind ck = conn.kind();
    if (mk == TMMetricKind::Twisted && ck == TMConnKind::HorizontalLift) {
        fam.values = formulas::twisted_horizontal(g, conn.base(), metric.fweight(),
                                                  metric.hweight(), p);
    } else if (mk == TMMetricKind::Twisted && ck == TMConnKind::CompleteLift) {
        fam.values =
            formulas::twisted_complete(g, conn.base(), metric.fweight(), metric.hweight(), p);
    } else if (mk == TMMetricKind::Sasaki && ck == TMConnKind::LCTwisted) {
        ScalarField f = def.function("f"), h = def.function("h");
        fam.values = formulas::sasaki_wrt_lc_twisted(g, f, h, p, cfg.curvature_sign);
    } else if (mk == TMMetricKind::Gradient && ck == TMConnKind::CompleteLift) {
        fam.values = formulas::gradient_wrt_complete(g, conn.base(), metric.fweight(), p);
    } else if (mk == TMMetricKind::Sasaki && ck == TMConnKind::LCGradient) {
        fam.values =
            formulas::sasaki_wrt_lc_gradient(g, def.function("f"), p, cfg.curvature_sign);
    } else if (mk == TMMetricKind::Twisted && ck == TMConnKind::LCGradient) {
        ScalarField f1 = def.function("f1");
        fam.values = formulas::twisted_wrt_lc_gradient(g, metric.fweight(), metric.hweight(), f1,
                                                       p, cfg.curvature_sign, true);
        fam.variant = formulas::twisted_wrt_lc_gradient(g, metric.fweight(), metric.hweight(), f1,
                                                        p, cfg.curvature_sign, false);
        fam.has_variant = true;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    fam.flagged.push_back({i, j, n + k});
                    fam.flagged.push_back({i, n + k, j});
                }
    } else if (mk == TMMetricKind::Gradient && ck == TMConnKind::LCTwisted) {
        ScalarField f = def.function("f"), h = def.function("h");
        fam.values =
            formulas::gradientf1_wrt_lc_twisted(g, f, h, metric.fweight(), p, cfg.curvature_sign);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    fam.flagged.push_back({i, j, n + k});
                    fam.flagged.push_back({i, n + k, j});
                    fam.flagged.push_back({n + k, i, j});
                }
    } else {
        throw ValidationError(
            "no reference component formulas exist for this metric/connection pair");
    }
    return fam;
}

CheckReport check_cubic_formulas(const ManifoldDefinition& def, const TMMetric& metric,
                                 const TMConnection& conn, const std::vector<TMPoint>& samples,
                                 double tol, const RunConfig& cfg) {
    const int m = 2 * metric.dim();
    CheckReport rep;
    rep.name = "cubic-paper-formulas";
    rep.sample_count = static_cast<int>(samples.size());
    double flagged_res = 0.0, variant_res = 0.0;
    bool any_flagged = false;
    for (const auto& p : samples) {
        std::vector<double> fp = p.x;
        fp.insert(fp.end(), p.y.begin(), p.y.end());
        Tensor3D engine = tm_cubic_tensor(metric, conn, p);
        FormulaFamily fam = select_formula_family(def, metric, conn, p, cfg);
        Grid3<char> skip(m, m, m, 0);
        for (const auto& idx : fam.flagged) skip.at(idx[0], idx[1], idx[2]) = 1;
        for (int A = 0; A < m; ++A)
            for (int B = 0; B < m; ++B)
                for (int C = 0; C < m; ++C) {
                    const double r = std::fabs(engine.at(A, B, C) - fam.values.at(A, B, C));
                    if (skip.at(A, B, C)) {
                        any_flagged = true;
                        flagged_res = std::max(flagged_res, r);
                        if (fam.has_variant)
                            variant_res = std::max(
                                variant_res,
                                std::fabs(engine.at(A, B, C) - fam.variant.at(A, B, C)));
                        continue;
                    }
                    if (r > rep.max_residual) rep.note(fp, {A, B, C}, r);
                }
    }
    if (any_flagged) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "verbatim_component_residual=%.6e", flagged_res);
        rep.interpretation_flags.push_back(buf);
        std::snprintf(buf, sizeof(buf), "plausible_index_residual=%.6e", variant_res);
        rep.interpretation_flags.push_back(buf);
    }
    rep.finalize(tol, any_flagged);
    return rep;
}

}  // namespace

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names = {
        "codazzi-base",   "statistical-tm",       "killing-lift", "affine-lift",
        "lc-oracle-agreement", "bracket-identities", "cubic-paper-formulas",
        "one-stein",      "k-stein",              "osserman"};
    return names;
}

double default_tolerance(const std::string& check) {
    if (check == "lc-oracle-agreement" || check == "cubic-paper-formulas" ||
        check == "one-stein" || check == "k-stein" || check == "osserman")
        return 1e-8;
    return 1e-9;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("LIFTGEO_SEED")) return std::strtoull(env, nullptr, 10);
    return 12345;
}

TMMetric build_tm_metric(const ManifoldDefinition& def, const std::string& spec,
                         const ConnectionField& frame_conn) {
    std::vector<std::string> parts = split(spec, ':');
    const std::string& kind = parts[0];
    MetricField g = def.metric();
    if (kind == "sasaki") return TMMetric::sasaki(std::move(g), frame_conn);
    if (kind == "twisted") {
        std::string fn = "f", hn = "h";
        if (parts.size() > 1) {
            std::vector<std::string> names = split(parts[1], ',');
            if (names.size() != 2)
                throw ValidationError("twisted metric spec needs two function names");
            fn = names[0];
            hn = names[1];
        }
        return TMMetric::twisted(std::move(g), frame_conn, def.function(fn), def.function(hn));
    }
    if (kind == "gradient") {
        std::string fn = parts.size() > 1 ? parts[1] : "f";
        return TMMetric::gradient(std::move(g), frame_conn, def.function(fn));
    }
    throw ValidationError("unknown lift metric '" + spec + "'");
}

TMConnection build_tm_connection(const ManifoldDefinition& def, const std::string& spec,
                                 const TMMetric& metric, const ConnectionField& frame_conn) {
    std::vector<std::string> parts = split(spec, ':');
    const std::string& kind = parts[0];
    if (kind == "horizontal") return TMConnection::horizontal_lift(frame_conn);
    if (kind == "complete") return TMConnection::complete_lift(frame_conn);
    if (kind == "numeric") return TMConnection::numeric_lc(metric);
    if (kind == "lc-sasaki")
        return TMConnection::lc_closed_form(TMMetric::sasaki(def.metric(), frame_conn));
    if (kind == "lc-twisted") {
        std::string fn = "f", hn = "h";
        if (parts.size() > 1) {
            std::vector<std::string> names = split(parts[1], ',');
            if (names.size() != 2)
                throw ValidationError("lc-twisted spec needs two function names");
            fn = names[0];
            hn = names[1];
        } else if (metric.kind() == TMMetricKind::Twisted) {
            return TMConnection::lc_closed_form(metric);
        }
        return TMConnection::lc_closed_form(
            TMMetric::twisted(def.metric(), frame_conn, def.function(fn), def.function(hn)));
    }
    if (kind == "lc-gradient") {
        if (parts.size() > 1)
            return TMConnection::lc_closed_form(
                TMMetric::gradient(def.metric(), frame_conn, def.function(parts[1])));
        if (metric.kind() == TMMetricKind::Gradient) return TMConnection::lc_closed_form(metric);
        return TMConnection::lc_closed_form(
            TMMetric::gradient(def.metric(), frame_conn, def.function("f")));
    }
    throw ValidationError("unknown lift connection '" + spec + "'");
}

CheckReport run_check(const ManifoldDefinition& def, const std::string& check,
                      const RunConfig& cfg) {
    bool known = false;
    for (const auto& nm : check_names()) known = known || nm == check;
    if (!known) throw UnknownCheck("unknown check '" + check + "'");

    def.validate(cfg.seed, std::max(4, cfg.samples / 2));
    const double tol = cfg.tol > 0.0 ? cfg.tol : default_tolerance(check);
    Sampler sampler(cfg.seed);

    ConnectionField frame_conn = def.connection();
    frame_conn.set_curvature_sign(cfg.curvature_sign);
    MetricField g = def.metric();

    CheckReport rep;
    if (check == "codazzi-base") {
        std::vector<std::vector<double>> pts;
        for (int i = 0; i < cfg.samples; ++i) pts.push_back(sampler.chart_point(def.chart));
        rep = is_codazzi(g, frame_conn, pts, tol);
    } else if (check == "bracket-identities") {
        rep = check_bracket_identities(def, cfg, tol);
    } else {
        TMMetric metric = build_tm_metric(def, cfg.tm_metric, frame_conn);
        if (check == "lc-oracle-agreement") {
            rep = check_lc_oracle_agreement(metric, tm_samples(def, cfg, sampler), tol);
        } else if (check == "statistical-tm") {
            TMConnection conn = build_tm_connection(def, cfg.tm_connection, metric, frame_conn);
            rep = check_statistical(metric, conn, tm_samples(def, cfg, sampler), tol);
        } else if (check == "killing-lift") {
            const LiftKind lk = cfg.lift == "vertical" ? LiftKind::Vertical : LiftKind::Horizontal;
            rep = check_killing_lift(lk, def.field(cfg.field_name), metric,
                                     tm_samples(def, cfg, sampler), tol);
        } else if (check == "affine-lift") {
            const LiftKind lk = cfg.lift == "vertical" ? LiftKind::Vertical : LiftKind::Horizontal;
            TMConnection conn = build_tm_connection(def, cfg.tm_connection, metric, frame_conn);
            rep = check_affine_lift(lk, def.field(cfg.field_name), conn,
                                    tm_samples(def, cfg, sampler), tol);
        } else if (check == "cubic-paper-formulas") {
            TMConnection conn = build_tm_connection(def, cfg.tm_connection, metric, frame_conn);
            rep = check_cubic_formulas(def, metric, conn, tm_samples(def, cfg, sampler), tol, cfg);
        } else if (check == "one-stein" || check == "k-stein" || check == "osserman") {
            TMConnection conn = build_tm_connection(def, cfg.tm_connection, metric, frame_conn);
            std::vector<TMPoint> pts = tm_samples(def, cfg, sampler);
            if (!cfg.tm_metric_explicit)
                rep.interpretation_flags.push_back("normalizer=sasaki(default)");
            if (check == "one-stein") {
                CheckReport inner =
                    k_stein_check(conn, metric, 1, pts, cfg.directions, tol, sampler);
                inner.name = "one-stein";
                inner.interpretation_flags.insert(inner.interpretation_flags.begin(),
                                                  rep.interpretation_flags.begin(),
                                                  rep.interpretation_flags.end());
                rep = inner;
            } else if (check == "k-stein") {
                CheckReport inner =
                    k_stein_check(conn, metric, cfg.k, pts, cfg.directions, tol, sampler);
                inner.interpretation_flags.insert(inner.interpretation_flags.begin(),
                                                  rep.interpretation_flags.begin(),
                                                  rep.interpretation_flags.end());
                rep = inner;
            } else {
                CheckReport inner =
                    osserman_check(conn, metric, pts, cfg.directions, tol, sampler);
                inner.interpretation_flags.insert(inner.interpretation_flags.begin(),
                                                  rep.interpretation_flags.begin(),
                                                  rep.interpretation_flags.end());
                rep = inner;
            }
        }
    }
    rep.name = check;
    rep.seed = cfg.seed;
    return rep;
}

int exit_code(const CheckReport& report) {
    switch (report.verdict) {
        case Verdict::Pass: return 0;
        case Verdict::Fail: return 1;
        case Verdict::Flagged: return 2;
    }
    return 3;
}

}  // namespace liftgeo
