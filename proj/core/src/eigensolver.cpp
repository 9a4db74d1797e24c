#include "liftgeo/eigensolver.hpp"

#include <algorithm>
#include <cmath>

namespace liftgeo {

namespace {

using cplx = std::complex<double>;

double frob_norm(const MatD& m) {
    double s = 0.0;
    for (double v : m.v) s += v * v;
    return std::sqrt(s);
}

// Householder similarity reduction to upper Hessenberg form, in place.
void hessenberg(MatD& a) {
    const int n = a.n1;
    for (int col = 0; col < n - 2; ++col) {
        double norm = 0.0;
        for (int r = col + 1; r < n; ++r) norm += a.at(r, col) * a.at(r, col);
        norm = std::sqrt(norm);
        if (norm < 1e-300) continue;
        const double alpha = a.at(col + 1, col) >= 0.0 ? -norm : norm;
        std::vector<double> v(n, 0.0);
        v[col + 1] = a.at(col + 1, col) - alpha;
        for (int r = col + 2; r < n; ++r) v[r] = a.at(r, col);
        double vnorm2 = 0.0;
        for (double x : v) vnorm2 += x * x;
        if (vnorm2 < 1e-300) continue;
        // A <- (I - 2vv^T/v^Tv) A (I - 2vv^T/v^Tv)
        for (int c = 0; c < n; ++c) {
            double dot = 0.0;
            for (int r = col + 1; r < n; ++r) dot += v[r] * a.at(r, c);
            const double f = 2.0 * dot / vnorm2;
            for (int r = col + 1; r < n; ++r) a.at(r, c) -= f * v[r];
        }
        for (int r = 0; r < n; ++r) {
            double dot = 0.0;
            for (int c = col + 1; c < n; ++c) dot += a.at(r, c) * v[c];
            const double f = 2.0 * dot / vnorm2;
            for (int c = col + 1; c < n; ++c) a.at(r, c) -= f * v[c];
        }
    }
}

std::pair<cplx, cplx> eig2x2(double a, double b, double c, double d) {
    const double tr = a + d;
    const double det = a * d - b * c;
    const double disc = tr * tr / 4.0 - det;
    if (disc >= 0.0) {
        const double rd = std::sqrt(disc);
        return {cplx(tr / 2.0 + rd, 0.0), cplx(tr / 2.0 - rd, 0.0)};
    }
    const double id = std::sqrt(-disc);
    return {cplx(tr / 2.0, id), cplx(tr / 2.0, -id)};
}

// One implicit double-shift sweep on the active block [lo, hi], using the
// shift polynomial z^2 - s z + t.
void francis_sweep(MatD& h, int lo, int hi, double s, double t) {
    const int n = h.n1;
    double x = h.at(lo, lo) * h.at(lo, lo) + h.at(lo, lo + 1) * h.at(lo + 1, lo) -
               s * h.at(lo, lo) + t;
    double y = h.at(lo + 1, lo) * (h.at(lo, lo) + h.at(lo + 1, lo + 1) - s);
    double z = (lo + 2 <= hi) ? h.at(lo + 2, lo + 1) * h.at(lo + 1, lo) : 0.0;
    for (int k = lo; k <= hi - 1; ++k) {
        // Householder on (x, y, z)
        double v[3] = {x, y, z};
        const int len = (k <= hi - 2) ? 3 : 2;
        double norm = 0.0;
        for (int i = 0; i < len; ++i) norm += v[i] * v[i];
        norm = std::sqrt(norm);
        if (norm > 1e-300) {
            const double alpha = v[0] >= 0.0 ? -norm : norm;
            v[0] -= alpha;
            double vn2 = 0.0;
            for (int i = 0; i < len; ++i) vn2 += v[i] * v[i];
            if (vn2 > 1e-300) {
                const int c0 = std::max(lo, k - 1);
                for (int c = c0; c < n; ++c) {
                    double dot = 0.0;
                    for (int i = 0; i < len; ++i) dot += v[i] * h.at(k + i, c);
                    const double f = 2.0 * dot / vn2;
                    for (int i = 0; i < len; ++i) h.at(k + i, c) -= f * v[i];
                }
                const int rmax = std::min(hi, k + len);
                for (int r = 0; r <= rmax; ++r) {
                    double dot = 0.0;
                    for (int i = 0; i < len; ++i) dot += h.at(r, k + i) * v[i];
                    const double f = 2.0 * dot / vn2;
                    for (int i = 0; i < len; ++i) h.at(r, k + i) -= f * v[i];
                }
            }
        }
        if (k < hi - 1) {
            x = h.at(k + 1, k);
            y = h.at(k + 2, k);
            z = (k + 3 <= hi) ? h.at(k + 3, k) : 0.0;
        }
    }
}

std::vector<cplx> qr_eigenvalues(MatD h, int max_sweeps) {
    const int n = h.n1;
    std::vector<cplx> out;
    out.reserve(n);
    const double eps = 1e-14;
    int hi = n - 1;
    int sweeps = 0;
    while (hi >= 0) {
        // Zero out negligible subdiagonals.
        for (int i = 1; i <= hi; ++i) {
            const double scale = std::fabs(h.at(i - 1, i - 1)) + std::fabs(h.at(i, i));
            if (std::fabs(h.at(i, i - 1)) <= eps * std::max(scale, 1e-30)) h.at(i, i - 1) = 0.0;
        }
        if (hi == 0 || h.at(hi, hi - 1) == 0.0) {
            out.emplace_back(h.at(hi, hi), 0.0);
            --hi;
            sweeps = 0;
            continue;
        }
        if (hi == 1 || h.at(hi - 1, hi - 2) == 0.0) {
            auto [l1, l2] = eig2x2(h.at(hi - 1, hi - 1), h.at(hi - 1, hi), h.at(hi, hi - 1),
                                   h.at(hi, hi));
            out.push_back(l1);
            out.push_back(l2);
            hi -= 2;
            sweeps = 0;
            continue;
        }
        int lo = hi;
        while (lo > 0 && h.at(lo, lo - 1) != 0.0) --lo;
        if (++sweeps > max_sweeps)
            throw NonConvergence("QR iteration failed to deflate within the sweep budget");
        // Francis shifts from the trailing 2x2; an ad-hoc exceptional shift
        // every 17 sweeps breaks symmetric cycles without touching h.
        double s = h.at(hi - 1, hi - 1) + h.at(hi, hi);
        double t = h.at(hi - 1, hi - 1) * h.at(hi, hi) - h.at(hi - 1, hi) * h.at(hi, hi - 1);
        if (sweeps % 17 == 0) {
            // hi >= 2 here: two-wide blocks deflate before sweeping.
            const double w = std::fabs(h.at(hi, hi - 1)) + std::fabs(h.at(hi - 1, hi - 2));
            s = 1.5 * w;
            t = w * w;
        }
        francis_sweep(h, lo, hi, s, t);
    }
    return sort_spectrum(std::move(out));
}

}  // namespace

std::vector<cplx> sort_spectrum(std::vector<cplx> v) {
    std::sort(v.begin(), v.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return v;
}

std::vector<cplx> eigenvalues(const MatD& m, int max_sweeps) {
    if (m.n1 != m.n2) throw std::logic_error("eigenvalues: matrix must be square");
    for (double v : m.v)
        if (!std::isfinite(v)) throw std::invalid_argument("eigenvalues: non-finite entry");
    if (m.n1 == 0) return {};
    if (m.n1 == 1) return {cplx(m.at(0, 0), 0.0)};
    MatD h = m;
    hessenberg(h);
    return qr_eigenvalues(std::move(h), max_sweeps);
}

std::vector<EigenPair> eigen_system(const MatD& m, int max_sweeps) {
    const int n = m.n1;
    std::vector<cplx> vals = eigenvalues(m, max_sweeps);
    const double scale = std::max(frob_norm(m), 1e-30);
    std::vector<EigenPair> out;
    out.reserve(vals.size());
    for (const cplx& lambda : vals) {
        // Inverse iteration on (m - lambda I), complex arithmetic,
        // with a tiny diagonal perturbation since lambda is (nearly) exact.
        Grid2<cplx> a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a.at(i, j) = cplx(m.at(i, j), 0.0);
        const cplx shift = lambda + cplx(1e-11 * scale, 1e-11 * scale);
        for (int i = 0; i < n; ++i) a.at(i, i) -= shift;
        // LU with partial pivoting; `pivots[col]` is the row swapped in at
        // step col, replayed on each right-hand side.
        std::vector<int> pivots(n);
        bool singular = false;
        for (int col = 0; col < n && !singular; ++col) {
            int p = col;
            for (int r = col + 1; r < n; ++r)
                if (std::abs(a.at(r, col)) > std::abs(a.at(p, col))) p = r;
            pivots[col] = p;
            if (std::abs(a.at(p, col)) < 1e-300) {
                singular = true;
                break;
            }
            if (p != col)
                for (int c = 0; c < n; ++c) std::swap(a.at(p, c), a.at(col, c));
            for (int r = col + 1; r < n; ++r) {
                const cplx f = a.at(r, col) / a.at(col, col);
                a.at(r, col) = f;
                for (int c = col + 1; c < n; ++c) a.at(r, c) -= f * a.at(col, c);
            }
        }
        EigenPair pair;
        pair.value = lambda;
        std::vector<cplx> v(n, cplx(1.0, 0.0));
        if (!singular) {
            for (int iter = 0; iter < 4; ++iter) {
                std::vector<cplx> b = v;
                for (int col = 0; col < n; ++col)
                    if (pivots[col] != col) std::swap(b[col], b[pivots[col]]);
                for (int r = 1; r < n; ++r)
                    for (int c = 0; c < r; ++c) b[r] -= a.at(r, c) * b[c];
                for (int r = n - 1; r >= 0; --r) {
                    for (int c = r + 1; c < n; ++c) b[r] -= a.at(r, c) * b[c];
                    b[r] /= a.at(r, r);
                }
                double norm = 0.0;
                for (const cplx& x : b) norm += std::norm(x);
                norm = std::sqrt(norm);
                if (norm < 1e-300) break;
                for (int i = 0; i < n; ++i) v[i] = b[i] / norm;
            }
        }
        // Residual |m v - lambda v|
        double res = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx s = -lambda * v[i];
            for (int j = 0; j < n; ++j) s += m.at(i, j) * v[j];
            res += std::norm(s);
        }
        pair.residual = std::sqrt(res);
        pair.vector = std::move(v);
        if (pair.residual > 1e-8 * scale)
            throw NonConvergence("inverse iteration residual above 1e-8 * |m|");
        out.push_back(std::move(pair));
    }
    return out;
}

}  // namespace liftgeo
