#ifndef LIFTGEO_JET_HPP
#define LIFTGEO_JET_HPP

// Truncated multivariate Taylor arithmetic up to third order.
//
// A Jet carries a value and all partial derivatives up to `order` (<= 3)
// with respect to `nvars` variables. Mixed partials are stored once per
// unordered multi-index, so Schwarz symmetry holds bit-exactly by
// construction. Propagation through arithmetic uses the Leibniz rule,
// univariate functions compose via the chain rule to third order.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace liftgeo {

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Unordered multi-index storage offsets.
// Pairs (i<=j): j*(j+1)/2 + i.  Triples (i<=j<=k): k(k+1)(k+2)/6 + j(j+1)/2 + i.
inline int sym2_size(int m) { return m * (m + 1) / 2; }
inline int sym3_size(int m) { return m * (m + 1) * (m + 2) / 6; }

inline int sym2_index(int i, int j) {
    if (i > j) std::swap(i, j);
    return j * (j + 1) / 2 + i;
}

inline int sym3_index(int i, int j, int k) {
    if (i > j) std::swap(i, j);
    if (j > k) std::swap(j, k);
    if (i > j) std::swap(i, j);
    return k * (k + 1) * (k + 2) / 6 + j * (j + 1) / 2 + i;
}

class Jet {
public:
    Jet() = default;
    Jet(int nvars, int order) { reset(nvars, order); }

    static Jet constant(int nvars, int order, double c) {
        Jet j(nvars, order);
        j.val_ = c;
        return j;
    }

    // Seed for the variable in slot `index`: value v, first derivative 1.
    static Jet variable(int nvars, int order, int index, double v) {
        Jet j(nvars, order);
        j.val_ = v;
        if (order >= 1) j.d1_[index] = 1.0;
        return j;
    }

    int nvars() const { return nvars_; }
    int order() const { return order_; }

    double value() const { return val_; }
    double d1(int i) const { return order_ >= 1 ? d1_[i] : 0.0; }
    double d2(int i, int j) const { return order_ >= 2 ? d2_[sym2_index(i, j)] : 0.0; }
    double d3(int i, int j, int k) const { return order_ >= 3 ? d3_[sym3_index(i, j, k)] : 0.0; }

    double& value() { return val_; }
    double& d1r(int i) { return d1_[i]; }
    double& d2r(int i, int j) { return d2_[sym2_index(i, j)]; }
    double& d3r(int i, int j, int k) { return d3_[sym3_index(i, j, k)]; }

    // Partial derivative with respect to variable d, as a jet of order-1.
    Jet derivative(int d) const;
    // Same jet with derivatives above `order` dropped.
    Jet truncated(int order) const;

    bool finite() const;

    Jet operator-() const;
    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(double s);

    friend Jet operator+(const Jet& a, const Jet& b);
    friend Jet operator-(const Jet& a, const Jet& b);
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator+(const Jet& a, double b);
    friend Jet operator+(double a, const Jet& b);
    friend Jet operator-(const Jet& a, double b);
    friend Jet operator-(double a, const Jet& b);
    friend Jet operator*(const Jet& a, double b);
    friend Jet operator*(double a, const Jet& b);
    friend Jet operator/(const Jet& a, double b);
    friend Jet operator/(double a, const Jet& b);

    // Chain rule for h = phi(u), given phi and its first three derivatives
    // evaluated at u.value().
    friend Jet compose(const Jet& u, double f0, double f1, double f2, double f3);

private:
    void reset(int nvars, int order);

    int nvars_ = 0;
    int order_ = 0;
    double val_ = 0.0;
    std::vector<double> d1_;
    std::vector<double> d2_;
    std::vector<double> d3_;
};

Jet sin(const Jet& u);
Jet cos(const Jet& u);
Jet tan(const Jet& u);
Jet exp(const Jet& u);
Jet log(const Jet& u);
Jet sqrt(const Jet& u);
Jet sinh(const Jet& u);
Jet cosh(const Jet& u);
Jet tanh(const Jet& u);
Jet abs(const Jet& u);
Jet recip(const Jet& u);
Jet pow_int(const Jet& u, long long e);

}  // namespace liftgeo

#endif
