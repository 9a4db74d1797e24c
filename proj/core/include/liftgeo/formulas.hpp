#ifndef LIFTGEO_FORMULAS_HPP
#define LIFTGEO_FORMULAS_HPP

// Standalone evaluators for the published closed-form component expressions
// of the cubic tensors on TM. They are transcribed verbatim and kept apart
// from the engine computations, so that a disagreement unambiguously points
// at either the printed formula or the engine, never both.
//
// Frame index convention matches tangent_bundle.hpp: A < n horizontal,
// A >= n vertical. Every evaluator returns the full [A][B][C] array with
// mirrors filled by the B-C symmetry of the underlying metric.

#include "liftgeo/tangent_bundle.hpp"

namespace liftgeo::formulas {

// nabla^h G^{f,h}: horizontal lift of an arbitrary base connection.
Tensor3D twisted_horizontal(const MetricField& g, const ConnectionField& conn,
                            const ScalarField& f, const ScalarField& h, const TMPoint& p);

// nabla^c G^{f,h}.
Tensor3D twisted_complete(const MetricField& g, const ConnectionField& conn, const ScalarField& f,
                          const ScalarField& h, const TMPoint& p);

// nabla^{f,h} g^s: Sasaki metric differentiated by the Levi-Civita
// connection of the twisted metric. Base connection is Levi-Civita.
Tensor3D sasaki_wrt_lc_twisted(const MetricField& g, const ScalarField& f, const ScalarField& h,
                               const TMPoint& p, int curvature_sign);

// nabla^c g^f.
Tensor3D gradient_wrt_complete(const MetricField& g, const ConnectionField& conn,
                               const ScalarField& f, const TMPoint& p);

// nabla^f g^s: Sasaki metric differentiated by the Levi-Civita connection
// of the gradient metric.
Tensor3D sasaki_wrt_lc_gradient(const MetricField& g, const ScalarField& f, const TMPoint& p,
                                int curvature_sign);

// nabla^{f1} G^{f,h}. One printed component carries a repeated index; the
// verbatim transcription and the plausible-index variant are both available.
Tensor3D twisted_wrt_lc_gradient(const MetricField& g, const ScalarField& f, const ScalarField& h,
                                 const ScalarField& f1, const TMPoint& p, int curvature_sign,
                                 bool repeated_index_verbatim);

// nabla^{f,h} g^{f1}. The mixed horizontal component applies the
// directional-derivative reading of the curvature-vector notation.
Tensor3D gradientf1_wrt_lc_twisted(const MetricField& g, const ScalarField& f,
                                   const ScalarField& h, const ScalarField& f1, const TMPoint& p,
                                   int curvature_sign);

}  // namespace liftgeo::formulas

#endif
