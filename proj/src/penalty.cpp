#include "oem/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace oem {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

void require_lambda(double lambda, const char* name) {
  require(std::isfinite(lambda) && lambda >= 0.0, std::string(name) + " must be finite and >= 0");
}

double pos(double v) { return v > 0.0 ? v : 0.0; }

// sign(u) * magnitude, with magnitude computed from |u| so the map is odd bit for bit.
double signed_like(double magnitude, double u) { return std::copysign(magnitude, u); }

double scad_integral(double theta, double lambda, double a) {
  if (theta <= lambda) return lambda * theta;
  if (theta <= a * lambda) return -(theta * theta - 2.0 * a * lambda * theta + lambda * lambda) / (2.0 * (a - 1.0));
  return (a + 1.0) * lambda * lambda / 2.0;
}

double mcp_integral(double theta, double lambda, double a) {
  if (theta <= a * lambda) return lambda * theta - theta * theta / (2.0 * a);
  return a * lambda * lambda / 2.0;
}

// Minimizer over t >= 0 of h(t) = d t^2 - 2 v t + lambda t^a, 0 < a < 1.
// h is concave below its inflection point and convex above it, and any
// interior minimizer lies in [t_inflect, max(t_inflect, |v| / d)].
double bridge_side(double d, double v, double lambda, double a) {
  auto h = [&](double t) { return d * t * t - 2.0 * v * t + lambda * std::pow(t, a); };
  auto dh = [&](double t) { return 2.0 * d * t - 2.0 * v + lambda * a * std::pow(t, a - 1.0); };
  auto d2h = [&](double t) { return 2.0 * d + lambda * a * (a - 1.0) * std::pow(t, a - 2.0); };

  const double t_inflect = std::pow(lambda * a * (1.0 - a) / (2.0 * d), 1.0 / (2.0 - a));
  double lo = t_inflect;
  double hi = std::max(t_inflect, std::abs(v) / d);
  if (hi <= lo) return 0.0;

  // golden-section search on the convex branch
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = h(x1), f2 = h(x2);
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
    if (f1 <= f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - inv_phi * (hi - lo); f1 = h(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + inv_phi * (hi - lo); f2 = h(x2);
    }
  }
  double t = 0.5 * (lo + hi);
  // Newton polish; h is convex here so each accepted step only improves.
  const double lower = t_inflect, upper = std::max(t_inflect, std::abs(v) / d);
  for (int it = 0; it < 4; ++it) {
    const double curv = d2h(t);
    if (!(curv > 0.0)) break;
    const double cand = std::clamp(t - dh(t) / curv, lower, upper);
    if (!(h(cand) <= h(t))) break;
    t = cand;
  }
  return h(t) < 0.0 ? t : 0.0;  // h(0) = 0; ties go to zero
}

double solve_bridge(double d, double u, double lambda, double a) {
  if (lambda == 0.0) return u / d;
  if (u == 0.0) return 0.0;
  auto g = [&](double b) { return d * b * b - 2.0 * u * b + lambda * std::pow(std::abs(b), a); };
  const double right = bridge_side(d, u, lambda, a);
  const double left = -bridge_side(d, -u, lambda, a);
  double best = 0.0, best_val = 0.0;
  if (right != 0.0 && g(right) < best_val) { best = right; best_val = g(right); }
  if (left != 0.0 && g(left) < best_val) { best = left; }
  return best;
}

}  // namespace

std::string_view to_string(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::none: return "none";
    case PenaltyKind::lasso: return "lasso";
    case PenaltyKind::elastic_net: return "elastic_net";
    case PenaltyKind::scad: return "scad";
    case PenaltyKind::mcp: return "mcp";
    case PenaltyKind::garrote: return "garrote";
    case PenaltyKind::berhu: return "berhu";
    case PenaltyKind::bridge: return "bridge";
  }
  return "unknown";
}

PenaltyKind penalty_kind_from_string(std::string_view name) {
  for (PenaltyKind k : kAllPenalties)
    if (to_string(k) == name) return k;
  if (name == "ols") return PenaltyKind::none;
  if (name == "enet" || name == "elastic-net") return PenaltyKind::elastic_net;
  throw std::invalid_argument("unknown penalty '" + std::string(name) + "'");
}

PenaltySpec PenaltySpec::none() { return PenaltySpec{}; }

PenaltySpec PenaltySpec::lasso(double lambda) {
  require_lambda(lambda, "lambda");
  PenaltySpec s;
  s.kind_ = PenaltyKind::lasso;
  s.lambda_ = lambda;
  return s;
}

PenaltySpec PenaltySpec::elastic_net(double lambda1, double lambda2) {
  require_lambda(lambda1, "lambda1");
  require_lambda(lambda2, "lambda2");
  PenaltySpec s;
  s.kind_ = PenaltyKind::elastic_net;
  s.lambda_ = lambda1;
  s.lambda2_ = lambda2;
  return s;
}

PenaltySpec PenaltySpec::scad(double lambda, double a) {
  require_lambda(lambda, "lambda");
  require(std::isfinite(a) && a > 2.0, "scad requires a > 2");
  PenaltySpec s;
  s.kind_ = PenaltyKind::scad;
  s.lambda_ = lambda;
  s.a_ = a;
  return s;
}

PenaltySpec PenaltySpec::mcp(double lambda, double a) {
  require_lambda(lambda, "lambda");
  require(std::isfinite(a) && a > 1.0, "mcp requires a > 1");
  PenaltySpec s;
  s.kind_ = PenaltyKind::mcp;
  s.lambda_ = lambda;
  s.a_ = a;
  return s;
}

PenaltySpec PenaltySpec::garrote(double lambda, Eigen::VectorXd base) {
  require_lambda(lambda, "lambda");
  require(base.size() > 0, "garrote requires baseline coefficients");
  for (Eigen::Index j = 0; j < base.size(); ++j)
    require(std::isfinite(base(j)) && base(j) != 0.0,
            "garrote baseline coefficient " + std::to_string(j) + " must be finite and nonzero");
  PenaltySpec s;
  s.kind_ = PenaltyKind::garrote;
  s.lambda_ = lambda;
  s.garrote_base_ = std::move(base);
  return s;
}

PenaltySpec PenaltySpec::berhu(double lambda, double delta) {
  require_lambda(lambda, "lambda");
  require(std::isfinite(delta) && delta > 0.0, "berhu requires delta > 0");
  PenaltySpec s;
  s.kind_ = PenaltyKind::berhu;
  s.lambda_ = lambda;
  s.delta_ = delta;
  return s;
}

PenaltySpec PenaltySpec::bridge(double lambda, double a) {
  require_lambda(lambda, "lambda");
  require(std::isfinite(a) && a > 0.0 && a < 1.0, "bridge requires 0 < a < 1");
  PenaltySpec s;
  s.kind_ = PenaltyKind::bridge;
  s.lambda_ = lambda;
  s.a_ = a;
  return s;
}

PenaltySpec PenaltySpec::with_lambda(double lambda) const {
  require_lambda(lambda, "lambda");
  PenaltySpec s = *this;
  s.lambda_ = lambda;
  return s;
}

PenaltySpec PenaltySpec::subset(const std::vector<Eigen::Index>& coords) const {
  PenaltySpec s = *this;
  if (garrote_base_) {
    Eigen::VectorXd base(static_cast<Eigen::Index>(coords.size()));
    for (std::size_t i = 0; i < coords.size(); ++i) base(static_cast<Eigen::Index>(i)) = (*garrote_base_)(coords[i]);
    s.garrote_base_ = std::move(base);
  }
  return s;
}

bool PenaltySpec::is_convex() const {
  switch (kind_) {
    case PenaltyKind::none:
    case PenaltyKind::lasso:
    case PenaltyKind::elastic_net:
    case PenaltyKind::berhu:
    case PenaltyKind::garrote:
      return true;
    default:
      return false;
  }
}

std::string PenaltySpec::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  switch (kind_) {
    case PenaltyKind::none: break;
    case PenaltyKind::lasso: os << "(lambda=" << lambda_ << ")"; break;
    case PenaltyKind::elastic_net: os << "(lambda=" << lambda_ << ", lambda2=" << lambda2_ << ")"; break;
    case PenaltyKind::scad:
    case PenaltyKind::mcp:
    case PenaltyKind::bridge: os << "(lambda=" << lambda_ << ", a=" << a_ << ")"; break;
    case PenaltyKind::berhu: os << "(lambda=" << lambda_ << ", delta=" << delta_ << ")"; break;
    case PenaltyKind::garrote: os << "(lambda=" << lambda_ << ")"; break;
  }
  return os.str();
}

double solve_scalar(double d, double u, Eigen::Index j, const PenaltySpec& spec) {
  if (!(d > 0.0) || !std::isfinite(d)) throw std::domain_error("solve_scalar: d must be positive");
  if (!std::isfinite(u)) throw std::domain_error("solve_scalar: u must be finite");
  const double lambda = spec.lambda();
  const double au = std::abs(u);
  switch (spec.kind()) {
    case PenaltyKind::none:
      return u / d;
    case PenaltyKind::lasso:
      return signed_like(pos(au - lambda) / d, u);
    case PenaltyKind::elastic_net:
      return signed_like(pos(au - lambda) / (d + spec.lambda2()), u);
    case PenaltyKind::scad: {
      if (d < 1.0) throw std::domain_error("solve_scalar: scad closed form needs d >= 1");
      const double a = spec.a();
      if (au <= (d + 1.0) * lambda) return signed_like(pos(au - lambda) / d, u);
      if (au <= a * lambda * d) return signed_like(((a - 1.0) * au - a * lambda) / ((a - 1.0) * d - 1.0), u);
      return u / d;
    }
    case PenaltyKind::mcp: {
      if (d < 1.0) throw std::domain_error("solve_scalar: mcp closed form needs d >= 1");
      const double a = spec.a();
      if (au <= a * lambda * d) return signed_like(a * pos(au - lambda) / (a * d - 1.0), u);
      return u / d;
    }
    case PenaltyKind::garrote: {
      const auto& base = *spec.garrote_base();
      if (j < 0 || j >= base.size()) throw std::out_of_range("solve_scalar: garrote index out of range");
      const double b = base(j);
      return pos((u * b - lambda) / (d * b * b)) * b;
    }
    case PenaltyKind::berhu: {
      const double delta = spec.delta();
      if (au < lambda + d * delta) return signed_like(pos(au - lambda) / d, u);
      return u * delta / (lambda + d * delta);
    }
    case PenaltyKind::bridge:
      return solve_bridge(d, u, lambda, spec.a());
  }
  throw std::logic_error("solve_scalar: unhandled penalty");
}

double penalty_term(double beta, Eigen::Index j, const PenaltySpec& spec) {
  const double lambda = spec.lambda();
  const double ab = std::abs(beta);
  switch (spec.kind()) {
    case PenaltyKind::none: return 0.0;
    case PenaltyKind::lasso: return 2.0 * lambda * ab;
    case PenaltyKind::elastic_net: return 2.0 * lambda * ab + spec.lambda2() * beta * beta;
    case PenaltyKind::scad: return 2.0 * scad_integral(ab, lambda, spec.a());
    case PenaltyKind::mcp: return 2.0 * mcp_integral(ab, lambda, spec.a());
    case PenaltyKind::garrote: {
      const auto& base = *spec.garrote_base();
      if (j < 0 || j >= base.size()) throw std::out_of_range("penalty_term: garrote index out of range");
      if (beta * base(j) < 0.0)
        throw std::domain_error("garrote: coefficient " + std::to_string(j) + " has the wrong sign");
      return 2.0 * lambda * beta / base(j);
    }
    case PenaltyKind::berhu: {
      const double delta = spec.delta();
      if (ab < delta) return 2.0 * lambda * ab;
      return 2.0 * lambda * (beta * beta + delta * delta) / (2.0 * delta);
    }
    case PenaltyKind::bridge: return lambda * std::pow(ab, spec.a());
  }
  throw std::logic_error("penalty_term: unhandled penalty");
}

double scalar_objective(double d, double u, double beta, Eigen::Index j, const PenaltySpec& spec) {
  return d * beta * beta - 2.0 * u * beta + penalty_term(beta, j, spec);
}

double penalty_value(const Eigen::VectorXd& beta, const PenaltySpec& spec) {
  if (spec.garrote_base() && spec.garrote_base()->size() != beta.size())
    throw std::invalid_argument("penalty_value: garrote baseline size mismatch");
  double total = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) total += penalty_term(beta(j), j, spec);
  return total;
}

bool is_feasible(const Eigen::VectorXd& beta, const PenaltySpec& spec) {
  if (!beta.allFinite()) return false;
  if (spec.kind() != PenaltyKind::garrote) return true;
  const auto& base = *spec.garrote_base();
  if (base.size() != beta.size()) return false;
  for (Eigen::Index j = 0; j < beta.size(); ++j)
    if (beta(j) * base(j) < 0.0) return false;
  return true;
}

}  // namespace oem
