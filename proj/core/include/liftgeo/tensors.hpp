#ifndef LIFTGEO_TENSORS_HPP
#define LIFTGEO_TENSORS_HPP

// Small dense containers used throughout the engine. Dimensions here are
// the manifold dimension n or 2n, so nothing is optimized beyond clarity.

#include <vector>

#include "liftgeo/jet.hpp"
#include "liftgeo/report.hpp"

namespace liftgeo {

template <class T>
struct Grid2 {
    int n1 = 0, n2 = 0;
    std::vector<T> v;
    Grid2() = default;
    Grid2(int a, int b) : n1(a), n2(b), v(a * b) {}
    Grid2(int a, int b, const T& init) : n1(a), n2(b), v(a * b, init) {}
    T& at(int i, int j) { return v[i * n2 + j]; }
    const T& at(int i, int j) const { return v[i * n2 + j]; }
};

template <class T>
struct Grid3 {
    int n1 = 0, n2 = 0, n3 = 0;
    std::vector<T> v;
    Grid3() = default;
    Grid3(int a, int b, int c) : n1(a), n2(b), n3(c), v(a * b * c) {}
    Grid3(int a, int b, int c, const T& init) : n1(a), n2(b), n3(c), v(a * b * c, init) {}
    T& at(int i, int j, int k) { return v[(i * n2 + j) * n3 + k]; }
    const T& at(int i, int j, int k) const { return v[(i * n2 + j) * n3 + k]; }
};

template <class T>
struct Grid4 {
    int n1 = 0, n2 = 0, n3 = 0, n4 = 0;
    std::vector<T> v;
    Grid4() = default;
    Grid4(int a, int b, int c, int d) : n1(a), n2(b), n3(c), n4(d), v(a * b * c * d) {}
    T& at(int i, int j, int k, int l) { return v[((i * n2 + j) * n3 + k) * n4 + l]; }
    const T& at(int i, int j, int k, int l) const { return v[((i * n2 + j) * n3 + k) * n4 + l]; }
};

using MatD = Grid2<double>;
using Tensor3D = Grid3<double>;
using Tensor4D = Grid4<double>;
using MatJ = Grid2<Jet>;
using Tensor3J = Grid3<Jet>;

// Gauss-Jordan inverse over the jet ring, pivoting on the value part.
MatJ invert(const MatJ& a);
MatD invert(const MatD& a);

// Cholesky-style positive definiteness test for a symmetric matrix.
bool is_spd(const MatD& a);

}  // namespace liftgeo

#endif
