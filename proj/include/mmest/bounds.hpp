#pragma once

#include <functional>
#include <map>
#include <optional>
#include <utility>

#include "mmest/backward.hpp"

namespace mmest {

namespace detail {

/// A gamma bracket around a certificate threshold: `lo` fails the predicate,
/// `hi` satisfies it (lo == hi when the predicate already holds just above
/// the floor). Shared plumbing of the bisection routines here and in the
/// exact module.
struct GammaBracket {
  double lo;
  double hi;
};

/// Doubles gamma from `floor` until `certified` holds, then bisects down to
/// width `tol`. Returns nullopt when the doubling search passes `cap`.
std::optional<GammaBracket> gamma_bracket(double floor, double tol, double cap,
                                          const std::function<bool(double)>& certified);

}  // namespace detail

using PairKey = std::pair<int, int>;
using CertificateMap = std::map<PairKey, PairCertificate>;

/// Necessary feasibility floor of Proposition-1 type:
/// sqrt(max_i lambda_max(P_i)). Any feasible gamma must exceed it.
double feasibility_floor(const std::vector<StationarySolution>& stat);

struct SufficientCheck {
  bool holds = false;  // true => gamma is a valid upper bound on gamma*_N
  CertificateMap certificates;
};

struct NecessaryCheck {
  bool violated = false;  // true => gamma*_N > gamma
  CertificateMap certificates;
};

/// Evaluates the sufficient condition at `gamma` over all unordered pairs
/// i <= j (including i == j, which reproduces the known-model condition).
SufficientCheck check_sufficient(const ValidatedModelSet& set,
                                 const std::vector<StationarySolution>& stat,
                                 double gamma, int N,
                                 const std::optional<SymMatrix>& Qunder = std::nullopt,
                                 double tol = defaults::kDefinitenessTol);

/// Evaluates the necessary condition at `gamma` over all unordered pairs.
NecessaryCheck check_necessary(const ValidatedModelSet& set,
                               const std::vector<StationarySolution>& stat, double gamma,
                               int N, double tol = defaults::kDefinitenessTol);

/// Smallest gamma (within +-tol) whose sufficient certificate holds. Bracket:
/// [floor (1 + tol), gamma_hi] with gamma_hi doubled from the floor until the
/// check holds; the returned value is the holding end of the final bracket.
/// Monotonicity of the certificate in gamma is asserted on a grid of step
/// tol/2 across the final bracket; a non-monotone pattern throws
/// NonMonotoneCertificate instead of returning a bound.
/// Throws NoUpperBound when the doubling search passes `cap`.
double bisect_upper(const ValidatedModelSet& set,
                    const std::vector<StationarySolution>& stat, int N,
                    double tol = defaults::kBisectionTol,
                    double cap = defaults::kGammaCap);

/// Largest gamma (within +-tol) at which the necessary condition reports a
/// violation; gamma*_N exceeds the returned value. Falls back to the
/// feasibility floor when no violation is ever observed, and truncates at
/// `cap` when the violated region extends past it.
double bisect_lower(const ValidatedModelSet& set,
                    const std::vector<StationarySolution>& stat, int N,
                    double tol = defaults::kBisectionTol,
                    double cap = defaults::kGammaCap);

/// gamma bounds for one horizon, with the certificates backing each end.
struct GammaBounds {
  int N = 0;
  double gamma_floor = 0.0;
  double gamma_lower = 0.0;
  double gamma_upper = 0.0;
  double tol = defaults::kBisectionTol;
  CertificateMap upper_certificates;  // at gamma_upper (sufficient terminal)
  CertificateMap lower_certificates;  // at gamma_lower (necessary terminal)
};

GammaBounds compute_bounds(const ValidatedModelSet& set,
                           const std::vector<StationarySolution>& stat, int N,
                           double tol = defaults::kBisectionTol,
                           double cap = defaults::kGammaCap);

enum class BoundKind { kUpper, kLower };

/// The Theorem-1/2 value bound at a gamma whose corresponding check passed:
///   (1/2) max_{i<=j} { -gamma^2 [x0_i; x0_j]^T T0_ij [x0_i; x0_j] }.
/// Throws CertificateMissing when the check fails at `gamma`.
struct ValueBound {
  BoundKind kind = BoundKind::kUpper;
  double value = 0.0;
  PairKey maximizing_pair{0, 0};
};

ValueBound value_bound(const ValidatedModelSet& set,
                       const std::vector<StationarySolution>& stat, double gamma, int N,
                       BoundKind kind,
                       const std::optional<SymMatrix>& Qunder = std::nullopt,
                       double tol = defaults::kDefinitenessTol);

}  // namespace mmest
