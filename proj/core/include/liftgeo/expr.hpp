#ifndef LIFTGEO_EXPR_HPP
#define LIFTGEO_EXPR_HPP

// Scalar field DSL over chart coordinates x0..x{n-1} and, in tangent-bundle
// context, fiber coordinates y0..y{n-1}.
//
// Grammar: standard infix, left-associative, precedence ^ > unary minus
// > *,/ > +,-. `^` takes a constant integer exponent or 0.5 only.
// Functions: sin cos tan exp log sqrt sinh cosh tanh abs.

#include <memory>
#include <span>
#include <string>

#include "liftgeo/jet.hpp"

namespace liftgeo {

struct ParseError : std::runtime_error {
    ParseError(size_t position, const std::string& what)
        : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
          position(position) {}
    size_t position;
};

struct SyntaxError : ParseError {
    using ParseError::ParseError;
};

struct UnknownIdentifier : ParseError {
    using ParseError::ParseError;
};

struct DimensionExceeded : ParseError {
    using ParseError::ParseError;
};

enum class UnaryFn { Neg, Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh, Abs };
enum class BinOp { Add, Sub, Mul, Div };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    enum class Kind { Constant, Variable, Unary, Binary, Power };
    Kind kind;
    double cvalue = 0.0;       // Constant
    int var_index = 0;         // Variable
    bool var_fiber = false;    // Variable: y* rather than x*
    UnaryFn fn = UnaryFn::Neg; // Unary
    BinOp op = BinOp::Add;     // Binary
    double exponent = 0.0;     // Power (integer or 0.5)
    ExprPtr lhs, rhs;
};

class ScalarField {
public:
    ScalarField() = default;

    int dim() const { return dim_; }
    bool allows_fiber() const { return fiber_ok_; }
    const ExprPtr& ast() const { return root_; }
    bool uses_fiber_vars() const;

    // Plain evaluation at base point x (and fiber point y when present).
    double eval(std::span<const double> x, std::span<const double> y = {}) const;

    // Value and exact partials up to `order` (<= 3) with respect to the
    // base variables. Jet slots 0..n-1 are x0..x{n-1}.
    Jet eval_jet(std::span<const double> x, int order) const;

    // Tangent-bundle evaluation: jet over 2n variables, slots 0..n-1 the
    // base coordinates and slots n..2n-1 the fiber coordinates.
    Jet eval_jet_tm(std::span<const double> x, std::span<const double> y, int order) const;

    std::string print() const;

    friend ScalarField parse(const std::string& source, int dim, bool allow_fiber_vars);
    friend ScalarField constant_field(int dim, double value, bool allow_fiber_vars);
    friend bool ast_equal(const ScalarField& a, const ScalarField& b);

private:
    int dim_ = 0;
    bool fiber_ok_ = false;
    ExprPtr root_;
};

ScalarField parse(const std::string& source, int dim, bool allow_fiber_vars = false);
ScalarField constant_field(int dim, double value, bool allow_fiber_vars = false);
bool ast_equal(const ScalarField& a, const ScalarField& b);

}  // namespace liftgeo

#endif
