#include "vcwave/coeffs.hpp"

#include <cmath>
#include <stdexcept>

namespace vcwave {

namespace {

void require_finite(const CoeffMatrix& B) {
  if (!std::isfinite(B.alpha) || !std::isfinite(B.beta) ||
      !std::isfinite(B.gamma) || !std::isfinite(B.eta)) {
    throw std::invalid_argument("coupling matrix has a non-finite entry");
  }
}

// Orthogonal similarity equalizing the diagonal of B. The rotation angle
// solves cos(2t)(alpha - eta) + sin(2t)(beta + gamma) = 0; an already
// balanced diagonal keeps the identity basis.
Eigen::Matrix2d diagonal_balancer(const CoeffMatrix& B) {
  const double da = B.alpha - B.eta;
  const double sg = B.beta + B.gamma;
  const double two_theta = da == 0.0 ? 0.0 : std::atan2(-da, sg);
  const double c = std::cos(0.5 * two_theta);
  const double s = std::sin(0.5 * two_theta);
  Eigen::Matrix2d p;
  p << c, -s, s, c;
  return p;
}

}  // namespace

StabilityVerdict classify_stability(const CoeffMatrix& B) {
  require_finite(B);
  StabilityVerdict v;
  v.trace = B.trace();
  v.det = B.det();
  v.stable = v.trace > 0.0 && v.det > 0.0;
  return v;
}

CanonicalForm schur_canonicalize(const CoeffMatrix& B) {
  require_finite(B);

  const double disc =
      (B.alpha - B.eta) * (B.alpha - B.eta) + 4.0 * B.beta * B.gamma;
  const double scale2 = B.alpha * B.alpha + B.beta * B.beta +
                        B.gamma * B.gamma + B.eta * B.eta;

  CanonicalForm form;

  if (disc < 0.0 && std::abs(disc) >= 1e-14 * scale2) {
    form.kind = CanonicalKind::Rotation;
    form.a = 0.5 * B.trace();
    form.b = 0.5 * std::sqrt(-disc);
    form.c = 0.0;
    form.p = diagonal_balancer(B);
    // Fix the sign convention b > 0: the balanced matrix has off-diagonal
    // entries of opposite signs; flip the second basis vector if the upper
    // one came out negative.
    const Eigen::Matrix2d balanced = form.p.transpose() * B.matrix() * form.p;
    if (balanced(0, 1) < 0.0) form.p.col(1) *= -1.0;
    return form;
  }

  form.kind = CanonicalKind::Triangular;
  const double tr = B.trace();
  const double root = std::sqrt(std::max(disc, 0.0));
  form.a = 0.5 * (tr - root);
  form.c = 0.5 * (tr + root);

  // P = [p0 p1] with p1 a unit eigenvector for the larger eigenvalue c, so
  // that P^T B P is lower triangular with diagonal (a, c).
  Eigen::Vector2d w1(B.beta, form.c - B.alpha);
  Eigen::Vector2d w2(form.c - B.eta, B.gamma);
  Eigen::Vector2d w = w1.norm() >= w2.norm() ? w1 : w2;
  if (w.norm() == 0.0) {
    w = Eigen::Vector2d(0.0, 1.0);  // B is a multiple of the identity
  }
  w.normalize();
  form.p.col(1) = w;
  form.p.col(0) = Eigen::Vector2d(w.y(), -w.x());
  form.b = w.transpose() * B.matrix() * form.p.col(0);
  return form;
}

ModalState change_of_variables(const Eigen::Matrix2d& p,
                               const ModalState& state) {
  ModalState out;
  out.modes.reserve(state.modes.size());
  for (const Eigen::Vector4d& m : state.modes) {
    // (u, v) and (y, z) each transform as row vectors times P.
    const Eigen::RowVector2d uv =
        Eigen::RowVector2d(m[0], m[2]) * p;
    const Eigen::RowVector2d yz =
        Eigen::RowVector2d(m[1], m[3]) * p;
    out.modes.emplace_back(uv[0], yz[0], uv[1], yz[1]);
  }
  return out;
}

ModalState change_of_variables(const CoeffMatrix& B, const ModalState& state) {
  return change_of_variables(schur_canonicalize(B).p, state);
}

}  // namespace vcwave
