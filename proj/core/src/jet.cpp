#include "liftgeo/jet.hpp"

namespace liftgeo {

void Jet::reset(int nvars, int order) {
    nvars_ = nvars;
    order_ = order;
    val_ = 0.0;
    d1_.assign(order >= 1 ? nvars : 0, 0.0);
    d2_.assign(order >= 2 ? sym2_size(nvars) : 0, 0.0);
    d3_.assign(order >= 3 ? sym3_size(nvars) : 0, 0.0);
}

Jet Jet::derivative(int d) const {
    if (order_ < 1) throw std::logic_error("Jet::derivative on order-0 jet");
    Jet out(nvars_, order_ - 1);
    out.val_ = d1_[d];
    if (out.order_ >= 1)
        for (int i = 0; i < nvars_; ++i) out.d1_[i] = d2_[sym2_index(d, i)];
    if (out.order_ >= 2)
        for (int j = 0; j < nvars_; ++j)
            for (int i = 0; i <= j; ++i) out.d2_[sym2_index(i, j)] = d3_[sym3_index(d, i, j)];
    return out;
}

Jet Jet::truncated(int order) const {
    if (order >= order_) return *this;
    Jet out(nvars_, order);
    out.val_ = val_;
    if (order >= 1) out.d1_ = d1_;
    if (order >= 2) out.d2_ = d2_;
    return out;
}

bool Jet::finite() const {
    if (!std::isfinite(val_)) return false;
    for (double v : d1_)
        if (!std::isfinite(v)) return false;
    for (double v : d2_)
        if (!std::isfinite(v)) return false;
    for (double v : d3_)
        if (!std::isfinite(v)) return false;
    return true;
}

Jet Jet::operator-() const {
    Jet out = *this;
    out.val_ = -out.val_;
    for (double& v : out.d1_) v = -v;
    for (double& v : out.d2_) v = -v;
    for (double& v : out.d3_) v = -v;
    return out;
}

Jet& Jet::operator+=(const Jet& o) {
    val_ += o.val_;
    for (size_t i = 0; i < d1_.size(); ++i) d1_[i] += o.d1_[i];
    for (size_t i = 0; i < d2_.size(); ++i) d2_[i] += o.d2_[i];
    for (size_t i = 0; i < d3_.size(); ++i) d3_[i] += o.d3_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    val_ -= o.val_;
    for (size_t i = 0; i < d1_.size(); ++i) d1_[i] -= o.d1_[i];
    for (size_t i = 0; i < d2_.size(); ++i) d2_[i] -= o.d2_[i];
    for (size_t i = 0; i < d3_.size(); ++i) d3_[i] -= o.d3_[i];
    return *this;
}

Jet& Jet::operator*=(double s) {
    val_ *= s;
    for (double& v : d1_) v *= s;
    for (double& v : d2_) v *= s;
    for (double& v : d3_) v *= s;
    return *this;
}

Jet operator+(const Jet& a, const Jet& b) {
    Jet out = a;
    out += b;
    return out;
}

Jet operator-(const Jet& a, const Jet& b) {
    Jet out = a;
    out -= b;
    return out;
}

Jet operator*(const Jet& a, const Jet& b) {
    const int m = a.nvars_, ord = a.order_;
    Jet out(m, ord);
    out.val_ = a.val_ * b.val_;
    if (ord >= 1)
        for (int i = 0; i < m; ++i) out.d1_[i] = a.d1_[i] * b.val_ + a.val_ * b.d1_[i];
    if (ord >= 2)
        for (int j = 0; j < m; ++j)
            for (int i = 0; i <= j; ++i) {
                const int ij = sym2_index(i, j);
                out.d2_[ij] = a.d2_[ij] * b.val_ + a.d1_[i] * b.d1_[j] + a.d1_[j] * b.d1_[i] +
                              a.val_ * b.d2_[ij];
            }
    if (ord >= 3)
        for (int k = 0; k < m; ++k)
            for (int j = 0; j <= k; ++j)
                for (int i = 0; i <= j; ++i) {
                    const int ijk = sym3_index(i, j, k);
                    const int ij = sym2_index(i, j), ik = sym2_index(i, k), jk = sym2_index(j, k);
                    out.d3_[ijk] = a.d3_[ijk] * b.val_ + a.d2_[ij] * b.d1_[k] +
                                   a.d2_[ik] * b.d1_[j] + a.d2_[jk] * b.d1_[i] +
                                   a.d1_[i] * b.d2_[jk] + a.d1_[j] * b.d2_[ik] +
                                   a.d1_[k] * b.d2_[ij] + a.val_ * b.d3_[ijk];
                }
    return out;
}

Jet operator/(const Jet& a, const Jet& b) { return a * recip(b); }

Jet operator+(const Jet& a, double b) {
    Jet out = a;
    out.val_ += b;
    return out;
}
Jet operator+(double a, const Jet& b) { return b + a; }
Jet operator-(const Jet& a, double b) {
    Jet out = a;
    out.val_ -= b;
    return out;
}
Jet operator-(double a, const Jet& b) {
    Jet out = -b;
    out.val_ += a;
    return out;
}
Jet operator*(const Jet& a, double b) {
    Jet out = a;
    out *= b;
    return out;
}
Jet operator*(double a, const Jet& b) { return b * a; }
Jet operator/(const Jet& a, double b) {
    Jet out = a;
    out *= 1.0 / b;
    return out;
}
Jet operator/(double a, const Jet& b) { return recip(b) * a; }

Jet compose(const Jet& u, double f0, double f1, double f2, double f3) {
    const int m = u.nvars_, ord = u.order_;
    Jet out(m, ord);
    out.val_ = f0;
    if (ord >= 1)
        for (int i = 0; i < m; ++i) out.d1_[i] = f1 * u.d1_[i];
    if (ord >= 2)
        for (int j = 0; j < m; ++j)
            for (int i = 0; i <= j; ++i) {
                const int ij = sym2_index(i, j);
                out.d2_[ij] = f2 * u.d1_[i] * u.d1_[j] + f1 * u.d2_[ij];
            }
    if (ord >= 3)
        for (int k = 0; k < m; ++k)
            for (int j = 0; j <= k; ++j)
                for (int i = 0; i <= j; ++i) {
                    const int ijk = sym3_index(i, j, k);
                    out.d3_[ijk] = f3 * u.d1_[i] * u.d1_[j] * u.d1_[k] +
                                   f2 * (u.d2_[sym2_index(i, j)] * u.d1_[k] +
                                         u.d2_[sym2_index(i, k)] * u.d1_[j] +
                                         u.d2_[sym2_index(j, k)] * u.d1_[i]) +
                                   f1 * u.d3_[ijk];
                }
    return out;
}

Jet sin(const Jet& u) {
    const double s = std::sin(u.value()), c = std::cos(u.value());
    return compose(u, s, c, -s, -c);
}

Jet cos(const Jet& u) {
    const double s = std::sin(u.value()), c = std::cos(u.value());
    return compose(u, c, -s, -c, s);
}

Jet tan(const Jet& u) {
    const double t = std::tan(u.value());
    if (!std::isfinite(t)) throw DomainError("tan at a pole");
    const double s = 1.0 + t * t;
    return compose(u, t, s, 2.0 * t * s, s * (2.0 * s + 4.0 * t * t));
}

Jet exp(const Jet& u) {
    const double e = std::exp(u.value());
    return compose(u, e, e, e, e);
}

Jet log(const Jet& u) {
    const double v = u.value();
    if (v <= 0.0) throw DomainError("log of non-positive value");
    return compose(u, std::log(v), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
}

Jet sqrt(const Jet& u) {
    const double v = u.value();
    if (v < 0.0) throw DomainError("sqrt of negative value");
    if (v == 0.0 && u.order() >= 1) throw DomainError("sqrt derivative at zero");
    const double r = std::sqrt(v);
    return compose(u, r, 0.5 / r, -0.25 / (r * v), 0.375 / (r * v * v));
}

Jet sinh(const Jet& u) {
    const double s = std::sinh(u.value()), c = std::cosh(u.value());
    return compose(u, s, c, s, c);
}

Jet cosh(const Jet& u) {
    const double s = std::sinh(u.value()), c = std::cosh(u.value());
    return compose(u, c, s, c, s);
}

Jet tanh(const Jet& u) {
    const double t = std::tanh(u.value());
    const double s = 1.0 - t * t;
    return compose(u, t, s, -2.0 * t * s, s * (4.0 * t * t - 2.0 * s));
}

Jet abs(const Jet& u) {
    const double v = u.value();
    if (v == 0.0 && u.order() >= 1) throw DomainError("abs derivative at zero");
    const double s = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
    return compose(u, std::fabs(v), s, 0.0, 0.0);
}

Jet recip(const Jet& u) {
    const double v = u.value();
    if (v == 0.0) throw DomainError("division by zero");
    const double iv = 1.0 / v;
    return compose(u, iv, -iv * iv, 2.0 * iv * iv * iv, -6.0 * iv * iv * iv * iv);
}

Jet pow_int(const Jet& u, long long e) {
    if (e == 0) return Jet::constant(u.nvars(), u.order(), 1.0);
    if (e < 0) return recip(pow_int(u, -e));
    Jet acc = u;
    for (long long i = 1; i < e; ++i) acc = acc * u;
    return acc;
}

}  // namespace liftgeo
