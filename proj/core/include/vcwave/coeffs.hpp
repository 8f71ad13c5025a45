#pragma once

#include <Eigen/Dense>

#include "vcwave/modal_state.hpp"

namespace vcwave {

/// Constant coupling matrix [[alpha, beta], [gamma, eta]] acting on the
/// velocities (u_t, v_t) of the two wave components.
struct CoeffMatrix {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double eta = 0.0;

  Eigen::Matrix2d matrix() const {
    Eigen::Matrix2d m;
    m << alpha, beta, gamma, eta;
    return m;
  }

  double trace() const { return alpha + eta; }
  double det() const { return alpha * eta - beta * gamma; }
};

struct StabilityVerdict {
  bool stable = false;
  double trace = 0.0;
  double det = 0.0;
};

enum class CanonicalKind { Rotation, Triangular };

/// Orthogonal reduction of the coupling matrix to one of two canonical
/// forms:
///   Rotation   [[a,  b], [-b, a]]  (complex eigenvalues a +/- i b, b > 0)
///   Triangular [[a,  0], [ b, c]]  (real eigenvalues, ordered a <= c)
///
/// p is the real orthogonal change of basis. In the triangular case
/// p^T B p reproduces the canonical matrix entrywise. In the rotation case
/// an orthogonal similarity can always equalize the diagonal but not the
/// magnitudes of the two off-diagonal entries, so p^T B p has the shape
/// [[a, r], [-s, a]] with r, s > 0 and r*s = b^2; the stored b = sqrt(r*s)
/// is the imaginary part of the eigenvalue pair. Everything downstream
/// (mode spectra, decay rates, stability) depends on the matrix only
/// through its trace and determinant, which (a, b) capture exactly.
struct CanonicalForm {
  CanonicalKind kind = CanonicalKind::Triangular;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;  // unused (0) in the rotation form
  Eigen::Matrix2d p = Eigen::Matrix2d::Identity();

  /// The canonical matrix itself, as a coupling matrix.
  CoeffMatrix coeffs() const {
    if (kind == CanonicalKind::Rotation) return {a, b, -b, a};
    return {a, 0.0, b, c};
  }

  Eigen::Matrix2d matrix() const { return coeffs().matrix(); }

  /// Stability of the reduced system: a > 0 (rotation), a > 0 and c > 0
  /// (triangular).
  bool stable() const {
    if (kind == CanonicalKind::Rotation) return a > 0.0;
    return a > 0.0 && c > 0.0;
  }
};

/// Exponential stability of the coupled system: stable iff
/// trace = alpha + eta > 0 and det = alpha*eta - beta*gamma > 0, i.e. both
/// eigenvalues of the coupling matrix have positive real part.
/// Throws std::invalid_argument on non-finite entries.
StabilityVerdict classify_stability(const CoeffMatrix& B);

/// Reduces B to its canonical form by a real orthogonal similarity.
///
/// Complex eigenvalues (discriminant (alpha-eta)^2 + 4 beta gamma < 0)
/// produce the rotation form with a = (alpha+eta)/2, b = sqrt(-disc)/2 > 0;
/// real eigenvalues produce the triangular form with a <= c. Discriminants
/// with |disc| < 1e-14 * ||B||_F^2 are routed to the triangular form so the
/// rotation branch never carries a b below noise level.
/// Throws std::invalid_argument on non-finite entries.
CanonicalForm schur_canonicalize(const CoeffMatrix& B);

/// Applies the orthogonal change of variables (u~, v~) = (u, v) P per mode
/// to all four coefficient pairs. The transformed state solves the system
/// with coupling matrix P^T B P and has exactly the energy of the original.
ModalState change_of_variables(const Eigen::Matrix2d& p,
                               const ModalState& state);

/// Convenience overload: canonicalizes B and applies its change of basis.
ModalState change_of_variables(const CoeffMatrix& B, const ModalState& state);

}  // namespace vcwave
