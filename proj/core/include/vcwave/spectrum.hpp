#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vcwave/coeffs.hpp"

namespace vcwave {

using Complex = std::complex<double>;

/// Multiplicity structure of the mode spectra, following the canonical-form
/// classification: I is the rotation form; II-* enumerate the triangular
/// form by whether a or c is an even positive integer (branch resonance),
/// whether a = c, and whether the sub-diagonal coupling b vanishes.
enum class CaseTag {
  I,
  II_1,
  II_2_1,
  II_2_2,
  II_2_3,
  II_3_1,
  II_3_2,
  II_4_1,
  II_4_2,
};

std::string to_string(CaseTag tag);

/// One Jordan chain: (A_n - lambda I) vectors[0] = 0 and
/// (A_n - lambda I) vectors[k+1] = vectors[k]. Vectors hold the coefficient
/// part only; the sin(nx) spatial factor is implicit.
struct JordanChain {
  Complex eigenvalue;
  std::vector<Eigen::Vector4cd> vectors;
};

/// Spectrum of one sine mode: the four eigenvalues in branch order
/// (lambda_1^+, lambda_1^-, lambda_2^+, lambda_2^-), the case tag of the
/// parameter point, and the root-vector chains (four vectors in total,
/// spanning C^4).
struct ModeSpectrum {
  int n = 1;
  std::array<Complex, 4> eigenvalues{};
  CaseTag tag = CaseTag::I;
  std::vector<JordanChain> chains;
};

/// Rotation form, mode n: the roots of the two conjugate quadratics
/// lambda^2 + (a - ib) lambda + n^2 = 0   (branch 1, v = -i u)
/// lambda^2 + (a + ib) lambda + n^2 = 0   (branch 2, v = +i u)
/// solved by the complex quadratic formula; returned in branch order with
/// "+" the principal-square-root branch. Requires b != 0 (throws
/// std::domain_error otherwise).
std::array<Complex, 4> eigenvalues_case_i(double a, double b, int n);

/// Triangular form, mode n: the roots of lambda^2 + a lambda + n^2 = 0 and
/// lambda^2 + c lambda + n^2 = 0; real pair when 2n <= |a| (resp. |c|),
/// complex pair otherwise. "+" is the larger real root, or the root with
/// positive imaginary part.
std::array<Complex, 4> eigenvalues_case_ii(double a, double c, int n);

/// Secondary report of the radical form X_n, Y_n of the rotation-form
/// eigenvalues. X_n = sqrt((sqrt((a^2-b^2-4n^2)^2 + 4a^2b^2)
/// + a^2-b^2-4n^2)/2) and Y_n = a b / X_n; the latter is undefined when
/// X_n = 0 (e.g. a = 0). The quadratic roots of eigenvalues_case_i are the
/// authoritative values; this report exists because the radical form as
/// usually printed differs from the factored quadratics by a factor of two
/// (the roots are (-a +/- X_n)/2 + i (b -/+ Y_n)/2 together with their
/// conjugates). Only exposed for inspection, never used in computations.
struct XnYnReport {
  double x = 0.0;
  double y = 0.0;
  bool defined = false;
};

XnYnReport xn_yn_report(double a, double b, int n);

/// Full per-mode spectrum with eigenvectors and root-vector chains, built
/// from closed forms. Membership tests "a is an even positive integer" use
/// the tolerance |a - 2 round(a/2)| <= 1e-9 (and round(a/2) >= 1); the
/// equality test a = c uses |a - c| <= 1e-9 max(1, |a|, |c|). Each chain is
/// scaled so its eigenvector has unit Euclidean norm, with the root vectors
/// scaled by the same factor so the chain relations are preserved.
ModeSpectrum mode_structure(const CanonicalForm& form, int n);

/// Predicted sharp decay law E(t) <= M E(0) t^p e^{-omega t}.
struct DecayPrediction {
  double omega = 0.0;          ///< -2 * spectral abscissa
  int p = 0;                   ///< polynomial correction exponent
  int dominant_mode = 1;       ///< mode attaining the abscissa
  Complex dominant_eigenvalue; ///< eigenvalue attaining the abscissa
};

/// Optimal decay rate omega = -2 max Re(lambda) over all modes and
/// branches. The maximum provably sits at n = 1; the implementation scans
/// n = 1..n_check and asserts that, turning the claim into a runtime check.
/// p = 1 when exactly one of a, c equals 2 or a = c = 2 with b = 0;
/// p = 3 when a = c = 2 with b != 0; p = 0 otherwise, and always for the
/// rotation form. Throws std::domain_error when the form is not stable,
/// naming the offending eigenvalue.
DecayPrediction decay_prediction(const CanonicalForm& form, int n_check = 64);

/// Spectrum for n = 1..mode_count serialized as JSON text: per mode the
/// fields n, case_tag, eigenvalues as [re, im] pairs, and chains as nested
/// arrays. Output is byte-stable for identical inputs and build.
std::string spectrum_to_json(const CanonicalForm& form, int mode_count);

}  // namespace vcwave
