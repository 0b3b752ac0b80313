#pragma once

// Dirichlet eigenproblem -f'' = λ r f on (x_left, 1), f(x_left) = f(1) = 0.
// Eigenvalues are the zeros of the secular function m₊ʳ(λ) + m₋ʳ(-λ): the
// right piece solves -f'' = λ|r|f, the left piece -f'' = -λ|r|f, and value and
// derivative continuity at 0 give exactly that equation. Roots are located on
// the entire function
//   Δ(λ) = -(c₊ʳ(λ) s₋ʳ(-λ) + c₋ʳ(-λ) s₊ʳ(λ))   (endpoint values on each side),
// which equals secular·s₊ʳ(λ)s₋ʳ(-λ) and has no poles.

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "weylhelp/mfun.hpp"
#include "weylhelp/scan.hpp"

namespace weylhelp {

struct SpectrumOptions {
  double tol = kDefaultTol;
  /// Search range |λ| ≤ lambda_max.
  double lambda_max = 1e6;
  Exec exec = Exec::parallel;
};

/// m₊ʳ(λ) + m₋ʳ(-λ) for real λ. Throws NearPole at a one-sided Dirichlet pole.
double secular(const Weight& w, double lambda, double tol = kDefaultTol);

/// Δ(λ) divided by the positive factor ‖U₊(1)‖‖U₋(x_left)‖ (same sign and zeros).
double secular_entire(const Weight& w, double lambda, double tol = kDefaultTol);

struct EigenSample {
  double x;
  double f;
  double df;
};

struct EigenPair {
  /// ±n for the n-th positive or negative eigenvalue.
  int index = 0;
  double lambda = 0.0;
  std::vector<EigenSample> samples;
  /// ∫|f|²|r| dx before normalization.
  double norm_weighted = 0.0;
  /// |m₊ʳ(λ) + m₋ʳ(-λ)|.
  double secular_residual = 0.0;
  /// Derivative mismatch at 0 of the glued solutions, relative.
  double interface_residual = 0.0;
  /// max |f| at the outer endpoints after normalization.
  double boundary_residual = 0.0;
  /// The two normalized pieces (plus side at λ, minus side at -λ).
  std::shared_ptr<const WeylSolution> piece[2];
};

struct EigenScan {
  std::vector<EigenPair> pairs;  // negative ones first, by increasing λ
  /// Dirichlet eigenvalues of the one-sided problems that bracketed the scan:
  /// poles of m₊ʳ(λ) (positive λ) and of m₋ʳ(-λ) (negative λ).
  std::vector<double> poles;
  /// At most one root between consecutive poles on the scanned range.
  bool interlacing_ok = true;
};

/// The first n_pos positive and n_neg negative eigenvalues (values only).
/// Throws Error(scan_range) when fewer are found with |λ| ≤ lambda_max.
EigenScan eigenvalues(const Weight& w, int n_pos, int n_neg, const SpectrumOptions& opts = {});

/// Glued eigenfunction, normalized in L²(|r|).
EigenPair eigenfunction(const Weight& w, double eigen_lambda, int index = 0,
                        double tol = kDefaultTol);

/// G_jk = ∫ f_j f_k |r| dx on one shared node set per side.
Eigen::MatrixXd gram_matrix(const std::vector<EigenPair>& pairs);

struct RieszDiagnostic {
  std::vector<int> N;
  std::vector<double> gram_condition;
  /// Least-squares slope of log10 cond against log10 N.
  double trend = 0.0;
  bool strictly_increasing = false;
  /// max |G_jj - 1| over the largest N.
  double diagonal_error = 0.0;
};

/// For each N the Gram matrix of the N lowest positive and N lowest negative
/// eigenfunctions.
RieszDiagnostic riesz_diagnostic(const Weight& w, const std::vector<int>& Ns = {4, 8, 16, 32},
                                 const SpectrumOptions& opts = {});

}  // namespace weylhelp
