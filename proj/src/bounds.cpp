#include "mmest/bounds.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace mmest {

namespace {

std::vector<PairSystem> all_pairs(const ValidatedModelSet& set,
                                  const std::vector<StationarySolution>& stat) {
  std::vector<PairSystem> pairs;
  for (int i = 0; i < set.size(); ++i) {
    for (int j = i; j < set.size(); ++j) {
      pairs.push_back(build_pair(set, stat, i, j));
    }
  }
  return pairs;
}

CertificateMap certify_all(const std::vector<PairSystem>& pairs,
                           const std::vector<StationarySolution>& stat, double gamma,
                           TerminalKind kind, int N,
                           const std::optional<SymMatrix>& Qunder, double tol) {
  CertificateMap certs;
  for (const auto& pair : pairs) {
    certs.emplace(PairKey{pair.i, pair.j},
                  certify_pair(pair, stat, gamma, kind, N, Qunder, tol));
  }
  return certs;
}

bool all_hold(const CertificateMap& certs) {
  for (const auto& [key, cert] : certs) {
    if (!cert.all_definite) return false;
  }
  return true;
}

}  // namespace

namespace detail {

std::optional<GammaBracket> gamma_bracket(double floor, double tol, double cap,
                                          const std::function<bool(double)>& certified) {
  double lo = floor * (1.0 + tol);
  if (certified(lo)) {
    return GammaBracket{lo, lo};
  }
  double hi = 2.0 * floor;
  while (hi <= lo || !certified(hi)) {
    if (hi > cap) return std::nullopt;
    lo = std::max(lo, hi);
    hi *= 2.0;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (certified(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return GammaBracket{lo, hi};
}

}  // namespace detail

double feasibility_floor(const std::vector<StationarySolution>& stat) {
  if (stat.empty()) {
    throw EmptySet("feasibility_floor: no stationary solutions");
  }
  double lambda = -std::numeric_limits<double>::infinity();
  for (const auto& s : stat) lambda = std::max(lambda, s.P.max_eigenvalue());
  return std::sqrt(std::max(lambda, 0.0));
}

SufficientCheck check_sufficient(const ValidatedModelSet& set,
                                 const std::vector<StationarySolution>& stat,
                                 double gamma, int N,
                                 const std::optional<SymMatrix>& Qunder, double tol) {
  SufficientCheck out;
  out.certificates = certify_all(all_pairs(set, stat), stat, gamma,
                                 TerminalKind::kSufficient, N, Qunder, tol);
  out.holds = all_hold(out.certificates);
  return out;
}

NecessaryCheck check_necessary(const ValidatedModelSet& set,
                               const std::vector<StationarySolution>& stat, double gamma,
                               int N, double tol) {
  NecessaryCheck out;
  out.certificates = certify_all(all_pairs(set, stat), stat, gamma,
                                 TerminalKind::kNecessary, N, std::nullopt, tol);
  out.violated = !all_hold(out.certificates);
  return out;
}

double bisect_upper(const ValidatedModelSet& set,
                    const std::vector<StationarySolution>& stat, int N, double tol,
                    double cap) {
  if (tol <= 0.0) {
    throw ValidationError("bisect_upper: tol must be positive");
  }
  const double floor = feasibility_floor(stat);
  const auto pairs = all_pairs(set, stat);
  auto holds = [&](double gamma) {
    for (const auto& pair : pairs) {
      if (!certify_pair(pair, stat, gamma, TerminalKind::kSufficient, N).all_definite) {
        return false;
      }
    }
    return true;
  };

  const auto bracket = detail::gamma_bracket(floor, tol, cap, holds);
  if (!bracket) {
    std::ostringstream msg;
    msg << "bisect_upper: no gamma below the cap " << cap
        << " satisfies the sufficient condition at N = " << N
        << " (doubling search started from the feasibility floor " << floor << ")";
    throw NoUpperBound(msg.str());
  }

  // Monotonicity guard across the final bracket, step tol/2.
  if (bracket->hi > bracket->lo) {
    bool seen_true = false;
    for (double g = bracket->lo; g < bracket->hi + 0.25 * tol; g += 0.5 * tol) {
      const bool h = holds(std::min(g, bracket->hi));
      if (seen_true && !h) {
        std::ostringstream msg;
        msg << "bisect_upper: sufficient certificate is not monotone in gamma near ["
            << bracket->lo << ", " << bracket->hi << "] at N = " << N;
        throw NonMonotoneCertificate(msg.str());
      }
      seen_true = seen_true || h;
    }
  }
  return bracket->hi;
}

double bisect_lower(const ValidatedModelSet& set,
                    const std::vector<StationarySolution>& stat, int N, double tol,
                    double cap) {
  if (tol <= 0.0) {
    throw ValidationError("bisect_lower: tol must be positive");
  }
  const double floor = feasibility_floor(stat);
  const auto pairs = all_pairs(set, stat);
  auto not_violated = [&](double gamma) {
    for (const auto& pair : pairs) {
      if (!certify_pair(pair, stat, gamma, TerminalKind::kNecessary, N).all_definite) {
        return false;
      }
    }
    return true;
  };

  const auto bracket = detail::gamma_bracket(floor, tol, cap, not_violated);
  if (!bracket) {
    // Still violated beyond the cap: the cap itself is a valid lower bound.
    return cap;
  }
  if (bracket->hi == bracket->lo) {
    // No violation even just above the floor; the floor is the best bound.
    return floor;
  }
  return bracket->lo;
}

GammaBounds compute_bounds(const ValidatedModelSet& set,
                           const std::vector<StationarySolution>& stat, int N,
                           double tol, double cap) {
  GammaBounds out;
  out.N = N;
  out.tol = tol;
  out.gamma_floor = feasibility_floor(stat);
  out.gamma_lower = bisect_lower(set, stat, N, tol, cap);
  out.gamma_upper = bisect_upper(set, stat, N, tol, cap);
  const auto pairs = all_pairs(set, stat);
  out.upper_certificates = certify_all(pairs, stat, out.gamma_upper,
                                       TerminalKind::kSufficient, N, std::nullopt,
                                       defaults::kDefinitenessTol);
  // When no violation was ever observed the lower bound degenerates to the
  // (infeasible) floor itself and carries no certificates.
  if (out.gamma_lower > out.gamma_floor) {
    out.lower_certificates = certify_all(pairs, stat, out.gamma_lower,
                                         TerminalKind::kNecessary, N, std::nullopt,
                                         defaults::kDefinitenessTol);
  }
  return out;
}

ValueBound value_bound(const ValidatedModelSet& set,
                       const std::vector<StationarySolution>& stat, double gamma, int N,
                       BoundKind kind, const std::optional<SymMatrix>& Qunder,
                       double tol) {
  const TerminalKind terminal =
      kind == BoundKind::kUpper ? TerminalKind::kSufficient : TerminalKind::kNecessary;
  const auto certs = certify_all(all_pairs(set, stat), stat, gamma, terminal, N,
                                 kind == BoundKind::kUpper ? Qunder : std::nullopt, tol);
  for (const auto& [key, cert] : certs) {
    if (!cert.all_definite) {
      throw CertificateMissing("value_bound: certificate for pair (" +
                               std::to_string(key.first + 1) + ", " +
                               std::to_string(key.second + 1) + ") fails at t = " +
                               std::to_string(cert.fails_at) + " for gamma = " +
                               std::to_string(gamma));
    }
  }

  ValueBound out;
  out.kind = kind;
  out.value = -std::numeric_limits<double>::infinity();
  for (const auto& [key, cert] : certs) {
    const Vector& xi = set.model(key.first).x0_hat;
    const Vector& xj = set.model(key.second).x0_hat;
    Vector stacked(xi.size() + xj.size());
    stacked << xi, xj;
    const double candidate =
        -gamma * gamma * stacked.dot(cert.T0.mat() * stacked) / 2.0;
    if (candidate > out.value) {
      out.value = candidate;
      out.maximizing_pair = key;
    }
  }
  return out;
}

}  // namespace mmest
