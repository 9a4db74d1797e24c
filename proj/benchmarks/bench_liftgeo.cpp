#include <benchmark/benchmark.h>

#include "liftgeo/runner.hpp"

using namespace liftgeo;

namespace {

const ManifoldDefinition& sphere() {
    static const ManifoldDefinition def = builtin_manifold("sphere2");
    return def;
}

void JetEval(benchmark::State& state) {
    ScalarField f = parse("sin(x0)^2*exp(x1) + x0^3/(x1 + 4)", 2);
    const int order = static_cast<int>(state.range(0));
    const double pt[] = {1.1, 0.7};
    for (auto _ : state) {
        Jet j = f.eval_jet(pt, order);
        benchmark::DoNotOptimize(j);
    }
}
BENCHMARK(JetEval)->DenseRange(0, 3);

void LeviCivitaEval(benchmark::State& state) {
    MetricField g = sphere().metric();
    ConnectionField lc = levi_civita(g);
    const std::vector<double> x = {1.2, 0.4};
    for (auto _ : state) {
        Tensor3D gam = lc.eval(x);
        benchmark::DoNotOptimize(gam);
    }
}
BENCHMARK(LeviCivitaEval);

void ClosedFormLC(benchmark::State& state) {
    MetricField g = sphere().metric();
    ConnectionField lc = levi_civita(g);
    TMMetric metric = TMMetric::twisted(g, lc, sphere().function("f"), sphere().function("h"));
    TMConnection conn = TMConnection::lc_closed_form(metric);
    TMPoint p{{1.2, 0.4}, {0.3, -0.8}};
    for (auto _ : state) {
        Tensor3D c = conn.coeffs(p);
        benchmark::DoNotOptimize(c);
    }
}
BENCHMARK(ClosedFormLC);

void NumericLC(benchmark::State& state) {
    MetricField g = sphere().metric();
    ConnectionField lc = levi_civita(g);
    TMMetric metric = TMMetric::twisted(g, lc, sphere().function("f"), sphere().function("h"));
    TMConnection conn = TMConnection::numeric_lc(metric);
    TMPoint p{{1.2, 0.4}, {0.3, -0.8}};
    for (auto _ : state) {
        Tensor3D c = conn.coeffs(p);
        benchmark::DoNotOptimize(c);
    }
}
BENCHMARK(NumericLC);

void JacobiSpectrum(benchmark::State& state) {
    MetricField g = sphere().metric();
    ConnectionField lc = levi_civita(g);
    TMConnection conn = TMConnection::complete_lift(lc);
    TMPoint p{{1.2, 0.4}, {0.3, -0.8}};
    const std::vector<double> v = {0.5, 0.5, 0.5, 0.5};
    for (auto _ : state) {
        JacobiValue jv = jacobi_operator(conn, p, v);
        benchmark::DoNotOptimize(jv);
    }
}
BENCHMARK(JacobiSpectrum);

}  // namespace

BENCHMARK_MAIN();
