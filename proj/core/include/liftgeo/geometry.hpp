#ifndef LIFTGEO_GEOMETRY_HPP
#define LIFTGEO_GEOMETRY_HPP

// Base-manifold tensor calculus: metric and connection fields over a single
// chart, curvature, torsion, the cubic tensor (covariant derivative of the
// metric), Lie derivatives, gradients and the conformal-type A_f tensor.
//
// Index conventions, fixed once for the whole engine:
//   nabla_{d_i} d_j = Gamma^k_{ij} d_k          (first lower index = direction)
//   R(d_i,d_j)d_k   = R^l_{ijk} d_l,
//   R^l_{ijk} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
//             + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}
//   R_{ijkl}  = g_{lm} R^m_{ijk}                (last slot lowered)
//   T^k_{ij}  = Gamma^k_{ij} - Gamma^k_{ji}

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "liftgeo/expr.hpp"
#include "liftgeo/report.hpp"
#include "liftgeo/tensors.hpp"

namespace liftgeo {

struct Interval {
    double lo = -2.0;
    double hi = 2.0;
    double width() const { return hi - lo; }
    bool contains(double v) const { return v > lo && v < hi; }
};

class MetricField {
public:
    MetricField() = default;
    // Components in symmetric storage (i <= j), row by row.
    MetricField(int dim, std::vector<ScalarField> sym_components, std::vector<Interval> chart);

    int dim() const { return dim_; }
    const std::vector<Interval>& chart() const { return chart_; }
    const ScalarField& at(int i, int j) const { return comps_[sym2_index(i, j)]; }

    MatD eval(std::span<const double> x) const;
    // Symmetric matrix of jets; in TM mode the jets live over 2n variables.
    MatJ eval_jet(std::span<const double> x, int order, bool tm_mode = false,
                  std::span<const double> y = {}) const;

    // Throws ValidationError if the matrix fails a Cholesky factorization
    // at any of the given points.
    void require_spd(const std::vector<std::vector<double>>& points) const;

private:
    int dim_ = 0;
    std::vector<ScalarField> comps_;
    std::vector<Interval> chart_;
};

class ConnectionField {
public:
    ConnectionField() = default;
    // Explicit coefficients Gamma^k_{ij}, indexed [k][i][j].
    static ConnectionField explicit_coeffs(int dim, std::vector<ScalarField> coeffs);
    // Levi-Civita connection of g, evaluated on demand from metric jets.
    static ConnectionField levi_civita_of(const MetricField& g);

    int dim() const { return dim_; }
    bool is_levi_civita() const { return lc_; }
    const MetricField& metric() const { return g_; }

    int curvature_sign() const { return curvature_sign_; }
    void set_curvature_sign(int s) { curvature_sign_ = s; }

    Tensor3D eval(std::span<const double> x) const;
    // Gamma^k_{ij} jets at [k][i][j]. For the Levi-Civita flavor this costs
    // metric jets of order+1.
    Tensor3J eval_jet(std::span<const double> x, int order, bool tm_mode = false,
                      std::span<const double> y = {}) const;

    // R^l_{ijk} jets at [l][i][j][k], multiplied by the convention sign.
    Grid4<Jet> curvature_jet(std::span<const double> x, int order, bool tm_mode = false,
                             std::span<const double> y = {}) const;

private:
    int dim_ = 0;
    bool lc_ = false;
    int curvature_sign_ = 1;
    std::vector<ScalarField> coeffs_;  // explicit flavor, [k][i][j] flattened
    MetricField g_;                    // Levi-Civita flavor
};

class VectorField {
public:
    VectorField() = default;
    VectorField(int dim, std::vector<ScalarField> components);

    int dim() const { return dim_; }
    const ScalarField& comp(int i) const { return comps_[i]; }

    std::vector<double> eval(std::span<const double> x) const;
    std::vector<Jet> eval_jet(std::span<const double> x, int order, bool tm_mode = false,
                              std::span<const double> y = {}) const;

private:
    int dim_ = 0;
    std::vector<ScalarField> comps_;
};

struct CurvatureValue {
    std::vector<double> point;
    Tensor4D up;       // R^l_{ijk} at [l][i][j][k]
    Tensor4D lowered;  // R_{ijkl} = g_{lm} R^m_{ijk} at [i][j][k][l]; empty without a metric
};

struct CubicValue {
    std::vector<double> point;
    Tensor3D c;  // C_{ijk} at [i][j][k]
};

ConnectionField levi_civita(const MetricField& g);

CurvatureValue curvature(const ConnectionField& conn, std::span<const double> x,
                         const MetricField* g = nullptr);

Tensor3D torsion(const ConnectionField& conn, std::span<const double> x);

CubicValue cubic_tensor(const MetricField& g, const ConnectionField& conn,
                        std::span<const double> x);

CheckReport is_codazzi(const MetricField& g, const ConnectionField& conn,
                       const std::vector<std::vector<double>>& samples, double tol);

// (L_X g)_{ij} on the coordinate basis.
MatD lie_derivative_metric(const VectorField& X, const MetricField& g, std::span<const double> x);

// (L_X nabla)^k_{ij} on the coordinate basis, [k][i][j].
Tensor3D lie_derivative_connection(const VectorField& X, const ConnectionField& conn,
                                   std::span<const double> x);

std::vector<double> gradient(const MetricField& g, const ScalarField& phi,
                             std::span<const double> x);

// A_f(X,Y) = (1/2f){X(f)Y + Y(f)X - g(X,Y) grad f} evaluated on vectors.
std::vector<double> a_f(const MetricField& g, const ScalarField& f, std::span<const double> x,
                        std::span<const double> X, std::span<const double> Y);

// Jet-valued helpers shared with the tangent-bundle layer.
std::vector<Jet> gradient_jet(const MetricField& g, const ScalarField& f,
                              std::span<const double> x, int order, bool tm_mode = false,
                              std::span<const double> y = {});

}  // namespace liftgeo

#endif
