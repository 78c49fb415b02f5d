#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>

namespace oscpair {

using Params = std::map<std::string, double>;

/// Coefficient value with its first two derivatives at a point.
struct QValues {
  double q = 0.0;
  double dq = 0.0;
  double d2q = 0.0;
};

/// Coefficient q of y'' + q(x) y = 0, with exact q' and q''.
///
/// Immutable after construction; evaluate() is pure and may be called
/// concurrently.
class EquationModel {
 public:
  using Evaluator = std::function<QValues(double)>;

  /// Wraps a closed-form evaluator. Used by the catalog and for internal
  /// auxiliary equations (e.g. the Bessel normal form).
  EquationModel(std::string name, Params params, double x0, Evaluator eval,
                std::string source = {}, bool positive_domain = false);

  QValues evaluate(double x) const { return eval_(x); }
  double q(double x) const { return eval_(x).q; }

  const std::string& name() const { return name_; }
  const Params& params() const { return params_; }
  double param(const std::string& key) const;
  /// Textual description of q (catalog formula or the parsed expression).
  const std::string& source() const { return source_; }
  double x0() const { return x0_; }
  bool is_catalog() const { return catalog_; }

  /// q is only defined for x > 0 (singular at the origin).
  bool positive_domain() const { return positive_domain_; }

  /// Same coefficient with a different left endpoint. Throws ConfigError if
  /// the model is singular at the origin and x0 <= 0.
  EquationModel with_x0(double x0) const;

 private:
  friend EquationModel catalog_get(const std::string&, const Params&);
  std::string name_;
  Params params_;
  double x0_;
  Evaluator eval_;
  std::string source_;
  bool positive_domain_ = false;
  bool catalog_ = false;
};

/// Catalog entries: constant (c), gen-airy (nu), inverse-x, cauchy-euler (gamma).
/// Parameters are validated against the oscillatory regime. Throws ConfigError.
EquationModel catalog_get(const std::string& name, const Params& params);

/// True if `name` is one of the catalog identifiers.
bool is_catalog_name(const std::string& name);

/// Parses an arithmetic expression in x and named parameters. q' and q'' come
/// from forward-mode differentiation of the expression tree. Throws ParseError
/// on malformed input and ConfigError for unbound identifiers; evaluation
/// errors (division by zero, log of a non-positive value, ...) surface as
/// NumericError when the model is evaluated.
EquationModel parse_q(const std::string& text, const Params& params, double x0 = 1.0);

}  // namespace oscpair
