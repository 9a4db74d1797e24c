#ifndef LIFTGEO_MANIFOLD_HPP
#define LIFTGEO_MANIFOLD_HPP

// Manifold definition files and the built-in example library.
//
// The definition format is line oriented with bracketed section headers:
//
//   [manifold]            name = sphere2
//                         dim = 2
//   [metric]              g 0 0 = "1"
//                         g 1 1 = "sin(x0)^2"
//   [functions]           f = "x0 + 2"
//   [connection]          levi-civita        (or lines: Gamma k i j = "expr")
//   [chart]               x0 = (0.2, 2.9)
//   [fields]              rotation = ("-x1", "x0")
//
// Comments start with '#'. Unlisted metric entries default to zero, chart
// entries to (-2, 2). Every [functions] entry must be strictly positive at
// the validation samples; the metric must pass an SPD spot check.

#include <map>

#include "liftgeo/geometry.hpp"

namespace liftgeo {

struct ManifoldDefinition {
    std::string name;
    int dim = 0;
    std::vector<std::string> metric_exprs;  // symmetric storage, sym2_index
    std::map<std::string, std::string> functions;
    bool levi_civita_connection = true;
    std::vector<std::string> gamma_exprs;  // [k][i][j] flattened when explicit
    std::vector<Interval> chart;
    std::map<std::string, std::vector<std::string>> vector_fields;

    MetricField metric() const;
    ConnectionField connection() const;  // the declared base connection
    ScalarField function(const std::string& name) const;
    VectorField field(const std::string& name) const;
    bool has_function(const std::string& name) const { return functions.count(name) > 0; }

    // Parses every expression and spot-checks SPD / positivity at `samples`
    // seeded chart points.
    void validate(std::uint64_t seed, int samples) const;
};

ManifoldDefinition load_manifold(const std::string& path);
ManifoldDefinition parse_manifold(const std::string& text, const std::string& origin);

const std::vector<std::string>& builtin_names();
ManifoldDefinition builtin_manifold(const std::string& name);

}  // namespace liftgeo

#endif
