#ifndef LIFTGEO_TESTS_ORACLES_HPP
#define LIFTGEO_TESTS_ORACLES_HPP

// Test-only oracles, deliberately independent of the jet machinery they
// check: central finite differences over plain evaluation, a
// finite-difference Koszul/curvature pipeline, a Gauss-Jordan inverse, and
// a characteristic-polynomial root finder (Faddeev-LeVerrier coefficients
// plus Durand-Kerner iteration).

#include <complex>
#include <functional>
#include <vector>

#include "liftgeo/geometry.hpp"

namespace oracles {

using liftgeo::MatD;
using liftgeo::Tensor3D;
using RealFn = std::function<double(const std::vector<double>&)>;

inline double fd1(const RealFn& f, std::vector<double> x, int i, double h) {
    x[i] += h;
    const double fp = f(x);
    x[i] -= 2.0 * h;
    const double fm = f(x);
    return (fp - fm) / (2.0 * h);
}

inline double fd2(const RealFn& f, std::vector<double> x, int i, int j, double h) {
    if (i == j) {
        const double f0 = f(x);
        x[i] += h;
        const double fp = f(x);
        x[i] -= 2.0 * h;
        const double fm = f(x);
        return (fp - 2.0 * f0 + fm) / (h * h);
    }
    x[i] += h;
    x[j] += h;
    const double fpp = f(x);
    x[j] -= 2.0 * h;
    const double fpm = f(x);
    x[i] -= 2.0 * h;
    const double fmm = f(x);
    x[j] += 2.0 * h;
    const double fmp = f(x);
    return (fpp - fpm - fmp + fmm) / (4.0 * h * h);
}

inline double fd3(const RealFn& f, const std::vector<double>& x, int i, int j, int k, double h) {
    auto inner = [&](const std::vector<double>& p) { return fd2(f, p, j, k, h); };
    return fd1(inner, x, i, h);
}

inline MatD gauss_inverse(const MatD& a) {
    const int n = a.n1;
    MatD w = a, inv(n, n, 0.0);
    for (int i = 0; i < n; ++i) inv.at(i, i) = 1.0;
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int r = c + 1; r < n; ++r)
            if (std::fabs(w.at(r, c)) > std::fabs(w.at(p, c))) p = r;
        for (int cc = 0; cc < n; ++cc) {
            std::swap(w.at(p, cc), w.at(c, cc));
            std::swap(inv.at(p, cc), inv.at(c, cc));
        }
        const double s = 1.0 / w.at(c, c);
        for (int cc = 0; cc < n; ++cc) {
            w.at(c, cc) *= s;
            inv.at(c, cc) *= s;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = w.at(r, c);
            for (int cc = 0; cc < n; ++cc) {
                w.at(r, cc) -= f * w.at(c, cc);
                inv.at(r, cc) -= f * inv.at(c, cc);
            }
        }
    }
    return inv;
}

// Levi-Civita coefficients from finite differences of the metric alone.
inline Tensor3D koszul_fd(const std::function<MatD(const std::vector<double>&)>& metric,
                          const std::vector<double>& x, double h = 1e-6) {
    const int n = static_cast<int>(x.size());
    MatD g = metric(x);
    MatD ginv = gauss_inverse(g);
    Tensor3D dg(n, n, n);  // dg.at(l, i, j) = d_l g_ij
    for (int l = 0; l < n; ++l) {
        std::vector<double> xp = x, xm = x;
        xp[l] += h;
        xm[l] -= h;
        MatD gp = metric(xp), gm = metric(xm);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) dg.at(l, i, j) = (gp.at(i, j) - gm.at(i, j)) / (2.0 * h);
    }
    Tensor3D gam(n, n, n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l)
                    s += ginv.at(k, l) * (dg.at(i, j, l) + dg.at(j, i, l) - dg.at(l, i, j));
                gam.at(k, i, j) = 0.5 * s;
            }
    return gam;
}

// Curvature from finite differences of connection coefficients.
inline liftgeo::Tensor4D curvature_fd(
    const std::function<Tensor3D(const std::vector<double>&)>& gamma,
    const std::vector<double>& x, double h = 1e-6) {
    const int n = static_cast<int>(x.size());
    Tensor3D g0 = gamma(x);
    liftgeo::Grid4<double> dgam(n, n, n, n);  // [d][l][i][j] = d_d Gamma^l_{ij}
    for (int d = 0; d < n; ++d) {
        std::vector<double> xp = x, xm = x;
        xp[d] += h;
        xm[d] -= h;
        Tensor3D gp = gamma(xp), gm = gamma(xm);
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    dgam.at(d, l, i, j) = (gp.at(l, i, j) - gm.at(l, i, j)) / (2.0 * h);
    }
    liftgeo::Tensor4D r(n, n, n, n);
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double v = dgam.at(i, l, j, k) - dgam.at(j, l, i, k);
                    for (int m = 0; m < n; ++m)
                        v += g0.at(l, i, m) * g0.at(m, j, k) - g0.at(l, j, m) * g0.at(m, i, k);
                    r.at(l, i, j, k) = v;
                }
    return r;
}

// Characteristic polynomial coefficients via the Faddeev-LeVerrier
// recursion: p(z) = z^n + c[0] z^{n-1} + ... + c[n-1].
inline std::vector<double> char_poly(const MatD& a) {
    const int n = a.n1;
    MatD m(n, n, 0.0);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    std::vector<double> c(n);
    for (int k = 1; k <= n; ++k) {
        // m <- a * m
        MatD am(n, n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l) s += a.at(i, l) * m.at(l, j);
                am.at(i, j) = s;
            }
        double tr = 0.0;
        for (int i = 0; i < n; ++i) tr += am.at(i, i);
        c[k - 1] = -tr / k;
        m = am;
        for (int i = 0; i < n; ++i) m.at(i, i) += c[k - 1];
    }
    return c;
}

inline std::vector<std::complex<double>> durand_kerner(const std::vector<double>& coeffs) {
    const int n = static_cast<int>(coeffs.size());
    using cplx = std::complex<double>;
    auto eval = [&](cplx z) {
        cplx v(1.0, 0.0);
        for (int i = 0; i < n; ++i) v = v * z + coeffs[i];
        return v;
    };
    std::vector<cplx> z(n);
    cplx seed(0.4, 0.9), acc(1.0, 0.0);
    for (int i = 0; i < n; ++i) {
        acc *= seed;
        z[i] = acc;
    }
    for (int iter = 0; iter < 500; ++iter) {
        double shift = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx denom(1.0, 0.0);
            for (int j = 0; j < n; ++j)
                if (j != i) denom *= z[i] - z[j];
            if (std::abs(denom) < 1e-300) continue;
            const cplx d = eval(z[i]) / denom;
            z[i] -= d;
            shift = std::max(shift, std::abs(d));
        }
        if (shift < 1e-13) break;
    }
    return z;
}

}  // namespace oracles

#endif
