// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>

namespace lqo {

// Gramian-type equations require asymptotic stability of the coefficient
// matrix; thrown when a spectral abscissa check fails.
class UnstableSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// lambda(A) and lambda(-A_r) intersect (up to roundoff): the Sylvester
// operator is singular and the solve cannot proceed.
class SpectralOverlapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computed solution failed its residual certificate.
class ResidualCertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A matrix that must be inverted (projection Gram matrix, reduced Gramian,
// ...) is singular or too ill-conditioned to trust.
class IllConditionedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adaptive quadrature hit its refinement cap without meeting the tolerance.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent on-disk system bundle.
class BundleFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lqo
