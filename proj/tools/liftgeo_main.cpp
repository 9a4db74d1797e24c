// Command-line front end: loads a manifold definition (file or builtin),
// runs one named check over seeded samples, and writes the JSON report.
//
// Exit status: 0 pass, 1 fail, 2 flagged, 3 error.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "liftgeo/runner.hpp"

namespace {

liftgeo::ManifoldDefinition resolve_manifold(const std::string& spec) {
    if (spec.rfind("builtin:", 0) == 0) return liftgeo::builtin_manifold(spec.substr(8));
    return liftgeo::load_manifold(spec);
}

void describe(const liftgeo::ManifoldDefinition& def) {
    std::printf("manifold: %s\n", def.name.c_str());
    std::printf("dim: %d\n", def.dim);
    std::printf("chart:\n");
    for (int i = 0; i < def.dim; ++i)
        std::printf("  x%d in (%g, %g)\n", i, def.chart[i].lo, def.chart[i].hi);
    std::printf("metric:\n");
    for (int j = 0; j < def.dim; ++j)
        for (int i = 0; i <= j; ++i)
            std::printf("  g[%d][%d] = %s\n", i, j,
                        def.metric_exprs[liftgeo::sym2_index(i, j)].c_str());
    std::printf("connection: %s\n",
                def.levi_civita_connection ? "levi-civita" : "explicit coefficients");
    if (!def.functions.empty()) {
        std::printf("functions:\n");
        for (const auto& [name, expr] : def.functions)
            std::printf("  %s = %s\n", name.c_str(), expr.c_str());
    }
    if (!def.vector_fields.empty()) {
        std::printf("vector fields:\n");
        for (const auto& [name, comps] : def.vector_fields) {
            std::printf("  %s = (", name.c_str());
            for (size_t i = 0; i < comps.size(); ++i)
                std::printf("%s%s", i ? ", " : "", comps[i].c_str());
            std::printf(")\n");
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"liftgeo - numerical verification of lift-metric geometry on tangent bundles"};
    app.require_subcommand(1);

    std::string check_name, manifold_spec, json_path;
    liftgeo::RunConfig cfg;
    cfg.seed = liftgeo::default_seed();

    CLI::App* check = app.add_subcommand("check", "run one verification check");
    check->add_option("name", check_name, "check name (see list-checks)")->required();
    check->add_option("--manifold", manifold_spec, "definition file path or builtin:NAME")
        ->required();
    auto* metric_opt = check->add_option("--tm-metric", cfg.tm_metric,
                                         "sasaki | twisted[:f,h] | gradient[:f]");
    check->add_option("--tm-connection", cfg.tm_connection,
                      "horizontal | complete | lc-sasaki | lc-twisted[:f,h] | lc-gradient[:f] | "
                      "numeric");
    check->add_option("--samples", cfg.samples, "sample points (default 20)");
    check->add_option("--seed", cfg.seed, "PRNG seed (default env LIFTGEO_SEED or 12345)");
    check->add_option("--tol", cfg.tol, "tolerance override");
    check->add_option("--json", json_path, "write the JSON report here");
    check->add_option("--field", cfg.field_name, "vector field name (killing/affine checks)");
    check->add_option("--lift", cfg.lift, "vertical | horizontal (default horizontal)");
    check->add_option("--k", cfg.k, "k for k-stein (default 2)");
    check->add_option("--directions", cfg.directions, "directions per point (default 8)");
    check->add_option("--fiber-range", cfg.fiber_range, "fiber sampling range (default 2)");
    check->add_option("--curvature-sign", cfg.curvature_sign,
                      "+1 or -1, flips the curvature convention");

    CLI::App* list_checks = app.add_subcommand("list-checks", "list check names");
    CLI::App* list_builtins = app.add_subcommand("list-builtins", "list builtin manifolds");
    CLI::App* desc = app.add_subcommand("describe", "print a manifold definition");
    std::string desc_spec;
    desc->add_option("--manifold", desc_spec, "definition file path or builtin:NAME")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_checks->parsed()) {
            for (const auto& name : liftgeo::check_names()) std::printf("%s\n", name.c_str());
            return 0;
        }
        if (list_builtins->parsed()) {
            for (const auto& name : liftgeo::builtin_names()) std::printf("%s\n", name.c_str());
            return 0;
        }
        if (desc->parsed()) {
            describe(resolve_manifold(desc_spec));
            return 0;
        }
        cfg.tm_metric_explicit = metric_opt->count() > 0;
        liftgeo::ManifoldDefinition def = resolve_manifold(manifold_spec);
        liftgeo::CheckReport rep = liftgeo::run_check(def, check_name, cfg);
        std::printf("check=%s manifold=%s verdict=%s max_residual=%.3e tolerance=%.3e seed=%llu\n",
                    rep.name.c_str(), def.name.c_str(), liftgeo::verdict_name(rep.verdict),
                    rep.max_residual, rep.tolerance,
                    static_cast<unsigned long long>(rep.seed));
        for (const auto& flag : rep.interpretation_flags)
            std::printf("  flag: %s\n", flag.c_str());
        if (!json_path.empty()) {
            std::ofstream out(json_path, std::ios::binary);
            if (!out) {
                std::fprintf(stderr, "error: cannot write '%s'\n", json_path.c_str());
                return 3;
            }
            out << liftgeo::to_json_string(rep);
        }
        return liftgeo::exit_code(rep);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
