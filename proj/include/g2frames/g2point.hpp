#pragma once
// Pointwise G2 linear algebra on R^7 = V (labels 1..3, coframe f) + H
// (labels 4..7, coframe e).
//
// The adapted basis throughout is (f^1, f^2, f^3, e^4, ..., e^7), stored at
// internal indices 0..6, with orientation o = f^123 e^4567. The branch sign
// +1/-1 selects the self-dual/anti-self-dual pairing e^i_+ or e^i_- of H and
// the sign of the mixed term of phi:
//
//     phi = lambda^3 f^123 -/+ lambda mu^2 (f^1 e^1 + f^2 e^2 + f^3 e^3).

#include <array>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "g2frames/exterior.hpp"

namespace g2frames {

using Matrix7 = Eigen::Matrix<double, 7, 7>;

enum class Branch { Plus = 1, Minus = -1 };

inline int sign(Branch b) { return static_cast<int>(b); }
inline const char* toString(Branch b) { return b == Branch::Plus ? "+" : "-"; }

/// e^1 = e^45 +- e^67, e^2 = e^46 -+ e^57, e^3 = e^47 +- e^56 on a space of
/// dimension `dim` whose horizontal labels 4..7 start at index `offset`.
std::array<Multivector, 3> dualityForms(Branch branch, int dim = 4, int offset = 0);

struct G2Structure {
  Multivector phi;
  Multivector psi;
  double lambda = 1.0;
  double mu = 1.0;
  Branch branch = Branch::Minus;
  std::array<double, 7> metricDiag{};  // g_phi in the adapted basis
  double m = 1.0;                      // Vol_{g_phi} = m o
  Multivector orientation;             // o = f^123 e^4567
};

/// The linear G2 structure on R^7 with parameters lambda, mu > 0.
G2Structure standardPhi(double lambda, double mu, Branch branch);

struct MetricRecovery {
  Matrix7 gram;
  double m = 0.0;
  int positive = 0;  // signature counts of gram
  int negative = 0;
  int identitySign = 1;  // (u_|phi)(v_|phi)phi = identitySign * 6 <u,v> m o
  bool riemannian() const { return positive == 7; }
  bool split() const { return positive == 3 && negative == 4; }
};

class DegenerateFormError : public std::invalid_argument {
 public:
  DegenerateFormError(int rank)
      : std::invalid_argument("3-form is degenerate: bilinear form has rank " + std::to_string(rank) + " < 7"),
        rank_(rank) {}
  int rank() const { return rank_; }

 private:
  int rank_;
};

/// Recovers the metric induced by a 3-form through
/// (u _| phi) ^ (v _| phi) ^ phi = +-6 <u, v>_phi m o,
/// with m fixed by the self-consistency m o = Vol of the returned metric.
/// The overall sign is normalized so that m > 0.
MetricRecovery metricFromPhi(const Multivector& phi, const Multivector& orientation);
MetricRecovery metricFromPhi(const Multivector& phi);

struct TorsionForms {
  double tau0 = 0.0;
  Multivector tau1{7, 1};
  Multivector tau2{7, 2};
  Multivector tau3{7, 3};
  double residualPhi = 0.0;  // |dphi - (tau0 psi + 3/4 tau1 phi + * tau3)|
  double residualPsi = 0.0;  // |dpsi - (tau1 psi + tau2 phi)|
  double w2Membership = 0.0;  // |tau2 phi - kappa * tau2|
  double w3Membership = 0.0;  // max(|tau3 phi|, |tau3 psi|)
  std::array<double, 7> metricDiag{1, 1, 1, 1, 1, 1, 1};

  /// g_phi norms of tau0..tau3.
  std::array<double, 4> norms() const;
  bool consistent(double tol) const { return residualPhi <= tol && residualPsi <= tol; }
};

/// Splits (dphi, dpsi), given in the adapted basis of `s`, into the torsion
/// forms. tau1 is the orthogonal projection of dpsi onto Lambda^1 ^ psi,
/// tau2 the W2 part of the remainder, tau3 the W3 projection of
/// *(dphi - tau0 psi - 3/4 tau1 phi). The residuals measure how far (dphi,
/// dpsi) are from coming from a G2 structure.
TorsionForms torsionDecompose(const G2Structure& s, const Multivector& dphi, const Multivector& dpsi);

/// dphi, dpsi assembled from torsion forms (inverse of torsionDecompose on
/// W0 + W1 + W2 + W3).
std::pair<Multivector, Multivector> torsionReconstruct(const G2Structure& s, const TorsionForms& t);

/// Eigenvalue of tau -> *(tau ^ phi) on the 14-dimensional summand W2 of
/// Lambda^2, for the given branch (determined from the spectrum).
double w2Eigenvalue(Branch branch);

/// Orthogonal projections (adapted basis, metric of s) onto W2 in Lambda^2
/// and W3 in Lambda^3.
Multivector projectW2(const G2Structure& s, const Multivector& tau2);
Multivector projectW3(const G2Structure& s, const Multivector& tau3);

struct TorsionClass {
  bool w0 = false, w1 = false, w2 = false, w3 = false;
  bool parallel = false;
  bool calibrated = false;
  bool cocalibrated = false;
  bool nearlyParallelCandidate = false;
  std::string label;
};

TorsionClass classify(const TorsionForms& t, double tol);
/// The same from the norms of tau0..tau3 (e.g. maxima over several points).
TorsionClass classify(const std::array<double, 4>& norms, double tol);

/// Converts between the adapted basis and the g_phi-orthonormal basis
/// (lambda f^i, mu e^a) of s.
Multivector toOrthonormal(const G2Structure& s, const Multivector& a);
Multivector fromOrthonormal(const G2Structure& s, const Multivector& a);

}  // namespace g2frames
