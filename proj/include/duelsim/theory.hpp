#pragma once

#include <string>

#include "duelsim/env.hpp"
#include "duelsim/graph.hpp"

namespace duelsim {

/// KL divergence between Bernoulli(p) and Bernoulli(q), natural log.
/// 0*log 0 = 0; +infinity when q is 0 or 1 and p differs.
double kl_bernoulli(double p, double q);

/// Coefficient of log T in the asymptotic group-regret lower bound:
/// sum over arms i != winner of min over superiors j of
/// (delta_i + delta_j) / (2 KL(q_ij, 1/2)).
double lower_bound_coefficient(const PreferenceMatrix& q);

/// High-probability settling round for the message-passing analysis:
/// (4 M K^2 (3 + 2 ln(d_max + 1)) / delta)^(1 / (1.7 alpha - 1.4)).
/// Requires alpha > 1.2 and delta > 0.
double c_delta(int players, int arms, int d_max_gamma, double alpha,
               double delta);

/// Integrated (delta-free) form of the same constant.
double c_tilde(int players, int arms, int d_max_gamma, double alpha);

struct Thm3Bound {
  double leading_coeff = 0.0;  // sum over j != winner of 2 alpha chi / delta_j
  double d_script = 0.0;       // sum over pairs i<j of 4 alpha / min-gap^2
  double c_tilde = 0.0;
  double hat_c = 0.0;          // full non-leading constant
  bool analytics_exact = true;

  double value(double horizon) const;
};

/// Group-regret upper bound pieces for the message-passing algorithm under
/// the given clique analytics. Requires a Condorcet winner and alpha > 1.4.
Thm3Bound thm3_bound(const PreferenceMatrix& q,
                     const CliqueAnalytics& analytics, int players,
                     double alpha);

enum class BoundBase { rucb, rmed2fh };

struct FylBound {
  BoundBase base = BoundBase::rucb;
  double leading_coeff = 0.0;  // coefficient of ln T
  double g_const = 0.0;        // additive constant inside g
  double f_const = 0.0;        // candidate-mistake budget f
  double handoff = 0.0;        // M (T_LE + 2D) delta_max
  int followers = 0;           // multiplies delta_max * f
  double delta_max = 0.0;
  std::string order_note;      // symbolic orders where constants are unpinned

  double value(double horizon) const;
};

/// Leader-follower bound pieces. For the index-based base policy all terms
/// are numeric; for the divergence-based one only the lower-bound-matching
/// leading term is numeric and the rest is reported as symbolic orders.
FylBound fyl_bound_terms(const PreferenceMatrix& q, int players, int diameter,
                         long t_le, double alpha, BoundBase base);

struct BoundReport {
  double lower_coeff = 0.0;
  Thm3Bound thm3;
  double c_delta = 0.0;
  FylBound fyl;
  bool lower_below_thm3 = true;  // numeric sanity: lower <= thm3 coefficient
};

BoundReport make_bound_report(const PreferenceMatrix& q,
                              const CliqueAnalytics& analytics, int players,
                              int diameter, long t_le, double alpha,
                              double delta, BoundBase base);

std::string format_bound_report(const BoundReport& report);

}  // namespace duelsim
