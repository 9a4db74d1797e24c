#ifndef LIFTGEO_STRUCTURE_HPP
#define LIFTGEO_STRUCTURE_HPP

// Theorem-level checkers on TM: statistical/Codazzi verdicts, Killing and
// infinitesimal-affine conditions for lifted fields, Jacobi operators and
// their spectra, k-Stein and Osserman diagnostics.

#include <complex>

#include "liftgeo/eigensolver.hpp"
#include "liftgeo/tangent_bundle.hpp"

namespace liftgeo {

// Deterministic seeded sampling. Uniform doubles are drawn from the raw
// 64-bit stream so results are identical across platforms for a fixed
// build and seed.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi);
    double gaussian();

    // Chart point sampled 5% inside the declared open intervals.
    std::vector<double> chart_point(const std::vector<Interval>& chart);
    TMPoint tm_point(const std::vector<Interval>& chart, double fiber_range);

    // Direction on the unit sphere of `metric_at` (Gram matrix), rejecting
    // directions of norm below 1e-12.
    std::vector<double> unit_direction(const MatD& metric_at);

private:
    std::uint64_t next();
    std::uint64_t eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct JacobiValue {
    TMPoint point;
    std::vector<double> direction;  // frame components of v
    MatD matrix;                    // [output][input] on the adapted frame
    double trace = 0.0;
    std::vector<std::complex<double>> spectrum;
};

// Torsion-free plus totally symmetric cubic tensor, both within tol.
CheckReport check_statistical(const TMMetric& metric, const TMConnection& conn,
                              const std::vector<TMPoint>& samples, double tol);

// L_{X^lift} G = 0 on all frame pairs, computed numerically from
// induced-coordinate data.
CheckReport check_killing_lift(LiftKind kind, const VectorField& X, const TMMetric& metric,
                               const std::vector<TMPoint>& samples, double tol);

// (L_{X^lift} conn)(e_A, e_B) = 0 for all frame pairs.
CheckReport check_affine_lift(LiftKind kind, const VectorField& X, const TMConnection& conn,
                              const std::vector<TMPoint>& samples, double tol);

JacobiValue jacobi_operator(const TMConnection& conn, const TMPoint& p,
                            std::span<const double> v_frame);

// Spread of trace(J_Z^t), t = 1..k, across unit directions at each point.
// The unnormalized trace spread is recorded in the report flags.
CheckReport k_stein_check(const TMConnection& conn, const TMMetric& metric, int k,
                          const std::vector<TMPoint>& points, int directions_per_point, double tol,
                          Sampler& sampler);

// Sorted eigenvalue multisets agree across all sampled (point, direction)
// pairs, eigenvalue by eigenvalue.
CheckReport osserman_check(const TMConnection& conn, const TMMetric& metric,
                           const std::vector<TMPoint>& points, int directions_per_point,
                           double tol, Sampler& sampler);

}  // namespace liftgeo

#endif
