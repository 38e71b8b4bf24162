#include "nlbvp/bounds.hpp"

#include "nlbvp/common.hpp"

#include <cmath>

namespace nlbvp {

namespace {

void require_nonneg(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be finite and >= 0");
}

}  // namespace

double gronwall_upper(double x0_norm, double mu_total) {
  require_nonneg(x0_norm, "gronwall_upper: |x0|");
  require_nonneg(mu_total, "gronwall_upper: ||mu||_1");
  return (x0_norm + 1.0) * std::exp(mu_total) - 1.0;
}

double escape_lower(double x0_norm, double mu_total) {
  require_nonneg(x0_norm, "escape_lower: |x0|");
  require_nonneg(mu_total, "escape_lower: ||mu||_1");
  return (x0_norm + 1.0) * std::exp(-mu_total) - 1.0;
}

double apriori_M(double R, double mu_total) {
  if (!(R > 0.0)) throw DomainError("apriori_M: R must be > 0");
  require_nonneg(mu_total, "apriori_M: ||mu||_1");
  const double e = std::exp(mu_total);
  return (mu_total + (R + 1.0) * e - 1.0) * e;
}

SchauderRadius schauder_radius(double c, double d, double mu_total) {
  if (!(c > 0.0 && c < 1.0)) throw DomainError("schauder_radius: c must lie in (0, 1)");
  require_nonneg(d, "schauder_radius: d");
  require_nonneg(mu_total, "schauder_radius: ||mu||_1");
  SchauderRadius out{(c * mu_total + d) / (1.0 - c), std::nullopt};
  const double e = std::exp(mu_total);
  // c e^{m} = 1 up to rounding counts as the unsolvable boundary.
  if (c * e < 1.0 - 1e-12) out.corrected_radius = (c * (e - 1.0) + d) / (1.0 - c * e);
  return out;
}

const char* to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::gronwall_upper: return "gronwall_upper";
    case BoundKind::escape_lower: return "escape_lower";
    case BoundKind::apriori_M: return "apriori_M";
    case BoundKind::schauder_radius: return "schauder_radius";
  }
  return "";
}

}  // namespace nlbvp
