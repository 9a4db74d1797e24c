#ifndef LIFTGEO_EIGENSOLVER_HPP
#define LIFTGEO_EIGENSOLVER_HPP

// Dense real nonsymmetric eigenvalues: Householder reduction to upper
// Hessenberg form followed by shifted QR iteration (Francis double shift),
// deflating trailing 1x1 and 2x2 blocks. Matrices here are tiny (2n x 2n
// Jacobi operators), so no balancing is attempted.

#include <complex>
#include <vector>

#include "liftgeo/tensors.hpp"

namespace liftgeo {

// Eigenvalues as a multiset sorted lexicographically by (re, im).
// Throws NonConvergence if a block fails to deflate within max_sweeps
// QR sweeps per eigenvalue.
std::vector<std::complex<double>> eigenvalues(const MatD& m, int max_sweeps = 100);

struct EigenPair {
    std::complex<double> value;
    std::vector<std::complex<double>> vector;  // unit norm
    double residual = 0.0;                     // |m v - lambda v|
};

// Eigenvalues plus eigenvectors via inverse iteration on the shifted
// matrix. Residuals satisfy |m v - lambda v| <= 1e-8 |m| unless the pair is
// defective, in which case NonConvergence is thrown.
std::vector<EigenPair> eigen_system(const MatD& m, int max_sweeps = 100);

std::vector<std::complex<double>> sort_spectrum(std::vector<std::complex<double>> v);

}  // namespace liftgeo

#endif
