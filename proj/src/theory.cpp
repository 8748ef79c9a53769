#include "duelsim/theory.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace duelsim {

double kl_bernoulli(double p, double q) {
  if (p < 0.0 || p > 1.0 || q < 0.0 || q > 1.0) {
    throw RangeError("kl_bernoulli arguments must be probabilities");
  }
  if (p == q) return 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  if (q == 0.0 || q == 1.0) return inf;
  double sum = 0.0;
  if (p > 0.0) sum += p * std::log(p / q);
  if (p < 1.0) sum += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  return sum;
}

double lower_bound_coefficient(const PreferenceMatrix& q) {
  const MatrixAnalysis a = analyze(q);
  if (!a.gaps) throw NoCondorcetWinnerError("lower bound needs a Condorcet winner");
  const GapProfile& gaps = *a.gaps;
  double total = 0.0;
  for (int i = 0; i < q.arms(); ++i) {
    if (i == gaps.winner) continue;
    // A non-winner arm always has at least one superior: the winner itself.
    double best = std::numeric_limits<double>::infinity();
    for (int j : a.condorcet.superiors[i]) {
      const double term =
          (gaps.delta[i] + gaps.delta[j]) / (2.0 * kl_bernoulli(q.prob(i, j), 0.5));
      best = std::min(best, term);
    }
    total += best;
  }
  return total;
}

namespace {

double settle_base(int players, int arms, int d_max_gamma) {
  return 4.0 * players * static_cast<double>(arms) * arms *
         (3.0 + 2.0 * std::log(static_cast<double>(d_max_gamma) + 1.0));
}

void check_alpha(double alpha, double minimum) {
  if (!(alpha > minimum)) {
    throw BadAlphaError("alpha must exceed " + std::to_string(minimum));
  }
}

}  // namespace

double c_delta(int players, int arms, int d_max_gamma, double alpha,
               double delta) {
  check_alpha(alpha, 1.2);
  if (!(delta > 0.0)) throw RangeError("delta must be positive");
  const double exponent = 1.0 / (1.7 * alpha - 1.4);
  return std::pow(settle_base(players, arms, d_max_gamma) / delta, exponent);
}

double c_tilde(int players, int arms, int d_max_gamma, double alpha) {
  check_alpha(alpha, 1.2);
  const double denom = 1.7 * alpha - 1.4;
  return (1.7 * alpha - 2.4) / denom *
         std::pow(settle_base(players, arms, d_max_gamma), 1.0 / denom);
}

namespace {

// sum over unordered pairs of 4 alpha / min-gap^2, where the min-gap of a
// pair involving the winner is that arm's own gap.
double d_script_sum(const GapProfile& gaps, double alpha) {
  const int k = static_cast<int>(gaps.delta.size());
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      double bar;
      if (i == gaps.winner) {
        bar = gaps.delta[j];
      } else if (j == gaps.winner) {
        bar = gaps.delta[i];
      } else {
        bar = std::min(gaps.delta[i], gaps.delta[j]);
      }
      sum += 4.0 * alpha / (bar * bar);
    }
  }
  return sum;
}

}  // namespace

double Thm3Bound::value(double horizon) const {
  return leading_coeff * std::log(horizon) + hat_c;
}

Thm3Bound thm3_bound(const PreferenceMatrix& q,
                     const CliqueAnalytics& analytics, int players,
                     double alpha) {
  check_alpha(alpha, 1.4);
  const GapProfile gaps = require_gaps(q);
  const int k = q.arms();

  Thm3Bound out;
  out.analytics_exact = analytics.exact;
  for (int j = 0; j < k; ++j) {
    if (j == gaps.winner) continue;
    out.leading_coeff += 2.0 * alpha * analytics.chi / gaps.delta[j];
  }
  out.d_script = d_script_sum(gaps, alpha);
  out.c_tilde = c_tilde(players, k, analytics.max_degree, alpha);

  double per_player = 0.0;
  for (int m = 0; m < players; ++m) {
    double best = std::numeric_limits<double>::infinity();
    for (int gp = 0; gp <= analytics.gamma; ++gp) {
      const double size = analytics.largest_clique[m][gp];
      const double term = static_cast<double>(k) * k * (gp + 2) +
                          2.0 * out.d_script / size * std::log(2.0 * out.d_script);
      best = std::min(best, term);
    }
    per_player += best;
  }
  out.hat_c = gaps.delta_max * per_player +
              (2.0 * out.c_tilde + k * (3.0 * analytics.gamma + 2.0)) *
                  players * gaps.delta_max;
  return out;
}

double FylBound::value(double horizon) const {
  return leading_coeff * std::log(horizon) + g_const +
         followers * delta_max * f_const + handoff;
}

FylBound fyl_bound_terms(const PreferenceMatrix& q, int players, int diameter,
                         long t_le, double alpha, BoundBase base) {
  const GapProfile gaps = require_gaps(q);
  const int k = q.arms();

  FylBound out;
  out.base = base;
  out.delta_max = gaps.delta_max;
  out.followers = players - 1;
  out.handoff = players * static_cast<double>(t_le + 2 * diameter) * gaps.delta_max;

  if (base == BoundBase::rucb) {
    check_alpha(alpha, 1.0);
    for (int i = 0; i < k; ++i) {
      if (i == gaps.winner) continue;
      out.leading_coeff += 4.0 * alpha / gaps.delta[i];
    }
    const double d = d_script_sum(gaps, alpha);
    const double tail = 2.0 *
                        std::pow(k * k * (4.0 * alpha - 1.0) / (2.0 * alpha - 1.0),
                                 1.0 / (2.0 * alpha - 1.0)) *
                        (2.0 * alpha - 1.0) / (alpha - 1.0);
    out.f_const = 2.0 * d * std::log(2.0 * d) + tail;
    out.g_const = out.f_const * gaps.delta_max;
  } else {
    out.leading_coeff = lower_bound_coefficient(q);
    out.g_const = 0.0;
    out.f_const = 0.0;
    out.order_note =
        "plus O(M (D + K^(2+eps) loglog T) + K log T / loglog T), constants "
        "not pinned";
  }
  return out;
}

BoundReport make_bound_report(const PreferenceMatrix& q,
                              const CliqueAnalytics& analytics, int players,
                              int diameter, long t_le, double alpha,
                              double delta, BoundBase base) {
  BoundReport report;
  report.lower_coeff = lower_bound_coefficient(q);
  report.thm3 = thm3_bound(q, analytics, players, alpha);
  report.c_delta = c_delta(players, q.arms(), analytics.max_degree, alpha, delta);
  report.fyl = fyl_bound_terms(q, players, diameter, t_le, alpha, base);
  report.lower_below_thm3 = report.lower_coeff <= report.thm3.leading_coeff;
  return report;
}

std::string format_bound_report(const BoundReport& r) {
  std::ostringstream out;
  out.precision(9);
  out << "lower_bound_coeff       = " << r.lower_coeff << "\n";
  out << "mp_leading_coeff        = " << r.thm3.leading_coeff << "\n";
  out << "mp_d_script             = " << r.thm3.d_script << "\n";
  out << "mp_c_tilde              = " << r.thm3.c_tilde << "\n";
  out << "mp_hat_c                = " << r.thm3.hat_c << "\n";
  out << "mp_analytics_exact      = " << (r.thm3.analytics_exact ? "yes" : "no (upper bound)")
      << "\n";
  out << "c_delta                 = " << r.c_delta << "\n";
  out << "fyl_base                = "
      << (r.fyl.base == BoundBase::rucb ? "rucb" : "rmed2fh") << "\n";
  out << "fyl_leading_coeff       = " << r.fyl.leading_coeff << "\n";
  out << "fyl_g_const             = " << r.fyl.g_const << "\n";
  out << "fyl_f_const             = " << r.fyl.f_const << "\n";
  out << "fyl_handoff             = " << r.fyl.handoff << "\n";
  if (!r.fyl.order_note.empty()) {
    out << "fyl_order_note          = " << r.fyl.order_note << "\n";
  }
  out << "lower_below_mp_leading  = " << (r.lower_below_thm3 ? "yes" : "no")
      << "\n";
  return out.str();
}

}  // namespace duelsim
