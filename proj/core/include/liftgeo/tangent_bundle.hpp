#ifndef LIFTGEO_TANGENT_BUNDLE_HPP
#define LIFTGEO_TANGENT_BUNDLE_HPP

// Tangent-bundle layer: the adapted frame {delta_i, dbar_i} induced by a
// base connection, lifts of vector fields, the three lift metrics, lift
// connections (horizontal, complete, and closed-form Levi-Civita of each
// lift metric), plus a coordinate-based numeric Levi-Civita oracle.
//
// Ground truth lives in the induced coordinates (x^i, y^i) on TM, where the
// Koszul formula is unambiguous; the adapted frame is a derived view. Frame
// indices A run 0..2n-1 with A < n horizontal (delta_A) and A >= n vertical
// (dbar_{A-n}).

#include "liftgeo/geometry.hpp"

namespace liftgeo {

struct TMPoint {
    std::vector<double> x;
    std::vector<double> y;
};

struct AdaptedFrame {
    MatD m;    // rows A: frame vector e_A in coordinate components
    MatD inv;  // rows alpha: coordinate vector in frame components
};

AdaptedFrame adapted_frame(const ConnectionField& conn, const TMPoint& p);
MatJ adapted_frame_jet(const ConnectionField& conn, const TMPoint& p, int order);
MatJ adapted_frame_inverse_jet(const ConnectionField& conn, const TMPoint& p, int order);

// Structure functions c^C_{AB} of the adapted frame: [e_A, e_B] = c^C_{AB} e_C.
Tensor3D structure_functions(const ConnectionField& conn, const TMPoint& p);
Tensor3J structure_functions_jet(const ConnectionField& conn, const TMPoint& p, int order);

// Frame derivative of a scalar jet (order >= 1 over 2n variables) along
// frame vector A, using base connection values `gamma` at the point.
double frame_deriv(const Jet& phi, int A, const Tensor3D& gamma, std::span<const double> y);

enum class LiftKind { Vertical, Horizontal, Complete };

struct TMVectorValue {
    std::vector<double> horiz;   // coefficients on delta_i
    std::vector<double> vert;    // coefficients on dbar_i
    std::vector<double> coords;  // induced-coordinate components, 2n
};

TMVectorValue lift_vector(LiftKind kind, const VectorField& X, const ConnectionField& conn,
                          const TMPoint& p);

// A vector field on TM that can be evaluated (with derivatives) in induced
// coordinates: a lift of a base field, or one of the frame fields.
class TMVectorField {
public:
    static TMVectorField lift(LiftKind kind, VectorField X, ConnectionField conn);
    static TMVectorField frame_horizontal(int i, ConnectionField conn);
    static TMVectorField frame_vertical(int i, int dim);

    int dim() const { return dim_; }
    // 2n coordinate components as jets over 2n variables.
    std::vector<Jet> coord_jets(const TMPoint& p, int order) const;

private:
    enum class Kind { Lift, FrameH, FrameV };
    Kind kind_ = Kind::Lift;
    LiftKind lift_ = LiftKind::Vertical;
    int dim_ = 0;
    int frame_index_ = 0;
    VectorField base_;
    ConnectionField conn_;
};

// Components of [A, B] as jets of the requested order (inputs are consumed
// at order+1).
std::vector<Jet> tm_bracket_jets(const TMVectorField& A, const TMVectorField& B, const TMPoint& p,
                                 int order);

// Numeric Lie bracket, returned in the adapted frame of `frame_conn`.
TMVectorValue tm_lie_bracket(const TMVectorField& A, const TMVectorField& B,
                             const ConnectionField& frame_conn, const TMPoint& p);

enum class TMMetricKind { Sasaki, Twisted, Gradient };

class TMMetric {
public:
    static TMMetric sasaki(MetricField g, ConnectionField frame_conn);
    static TMMetric twisted(MetricField g, ConnectionField frame_conn, ScalarField f,
                            ScalarField h);
    static TMMetric gradient(MetricField g, ConnectionField frame_conn, ScalarField f);

    TMMetricKind kind() const { return kind_; }
    int dim() const { return g_.dim(); }
    const MetricField& base_metric() const { return g_; }
    const ConnectionField& frame_connection() const { return conn_; }
    const ScalarField& fweight() const { return f_; }
    const ScalarField& hweight() const { return h_; }

    // 2n x 2n matrix in the adapted frame; block structured with zero
    // horizontal-vertical coupling.
    MatD blocks(const TMPoint& p) const;
    MatJ blocks_jet(const TMPoint& p, int order) const;

    // Same metric in the induced coordinate basis.
    MatD coord(const TMPoint& p) const;
    MatJ coord_jet(const TMPoint& p, int order) const;

private:
    TMMetricKind kind_ = TMMetricKind::Sasaki;
    MetricField g_;
    ConnectionField conn_;
    ScalarField f_, h_;
};

enum class TMConnKind { HorizontalLift, CompleteLift, LCSasaki, LCTwisted, LCGradient, NumericLC };

class TMConnection {
public:
    static TMConnection horizontal_lift(ConnectionField base);
    static TMConnection complete_lift(ConnectionField base);
    // Closed-form Levi-Civita connection of the given lift metric. Requires
    // the metric's frame connection to be the Levi-Civita connection of its
    // base metric.
    static TMConnection lc_closed_form(const TMMetric& metric);
    // Coordinate Koszul formula applied to the coordinate form of the
    // metric, converted back to the adapted frame.
    static TMConnection numeric_lc(const TMMetric& metric);

    TMConnKind kind() const { return kind_; }
    int dim() const { return base_.dim(); }
    const ConnectionField& base() const { return base_; }

    Tensor3D coeffs(const TMPoint& p) const;
    // GammaBar^C_{AB} at [C][A][B], jets over 2n variables.
    Tensor3J coeffs_jet(const TMPoint& p, int order) const;

private:
    TMConnKind kind_ = TMConnKind::HorizontalLift;
    ConnectionField base_;  // frame/base connection
    MetricField g_;
    ScalarField f_, h_;
    std::shared_ptr<const TMMetric> metric_;  // NumericLC
};

// Anholonomic torsion T^C_{AB} (coefficient antisymmetrization minus
// structure functions), at [C][A][B].
Tensor3D tm_torsion(const TMConnection& conn, const TMPoint& p);

// Anholonomic curvature RBar^D_{ABC} at [D][A][B][C].
Tensor4D tm_curvature(const TMConnection& conn, const TMPoint& p);

// CBar_{ABC} = e_A(G(e_B,e_C)) - G(conn_A e_B, e_C) - G(e_B, conn_A e_C),
// at [A][B][C].
Tensor3D tm_cubic_tensor(const TMMetric& metric, const TMConnection& conn, const TMPoint& p);

}  // namespace liftgeo

#endif
