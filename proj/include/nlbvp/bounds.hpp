#pragma once

#include <optional>
#include <string>

namespace nlbvp {

// Closed-form bounds driven by the integrated growth datum ||mu||_1.

/// (|x0| + 1) e^{||mu||_1} - 1: Gronwall envelope on |x(t)| for solutions
/// starting at x0.
double gronwall_upper(double x0_norm, double mu_total);

/// (|x0| + 1) e^{-||mu||_1} - 1: lower envelope on |x(t)|. Negative values are
/// vacuous.
double escape_lower(double x0_norm, double mu_total);

/// [||mu||_1 + (R + 1) e^{||mu||_1} - 1] e^{||mu||_1}: a-priori sup-norm bound
/// for strictly negatively guided problems.
double apriori_M(double R, double mu_total);

struct SchauderRadius {
  /// (c ||mu||_1 + d) / (1 - c)
  double paper_radius;
  /// Smallest r with c((r+1)e^{||mu||_1} - 1) + d <= r; empty when
  /// c e^{||mu||_1} >= 1.
  std::optional<double> corrected_radius;
};

SchauderRadius schauder_radius(double c, double d, double mu_total);

enum class BoundKind { gronwall_upper, escape_lower, apriori_M, schauder_radius };

const char* to_string(BoundKind kind);

struct BoundReport {
  BoundKind kind;
  double x0_norm = 0.0;
  double mu_total = 0.0;
  double R = 0.0;
  double c = 0.0;
  double d = 0.0;
  double value = 0.0;
  std::optional<double> corrected;  // schauder_radius only
};

}  // namespace nlbvp
