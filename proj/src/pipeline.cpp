#include "oscpair/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <string>

#include "json.hpp"
#include "oscpair/error.hpp"

namespace oscpair {

using ojson = nlohmann::ordered_json;

const char* const kNormalizationNote =
    "Amplitudes are normalized to a unit Wronskian, |y1 y2' - y1' y2| = 1. The Cauchy-Euler pair "
    "x^(1/2) sin(s log x), x^(1/2) cos(s log x) with s = sqrt(gamma^2 - 1/4) has Wronskian -s, so its "
    "normalized amplitude is v = x/s with v' = 1/s (2/sqrt(3) at gamma = 1), not v = x and v' = 1 as "
    "for the unscaled pair.";

namespace {

const std::map<std::string, double> kDefaultXmax = {
    {"constant", 50.0}, {"gen-airy", 200.0}, {"inverse-x", 400.0}, {"cauchy-euler", 500.0}};

IntegratorOptions integrator_options(const RunConfig& cfg) {
  IntegratorOptions opt;
  opt.rtol = cfg.rtol;
  opt.atol = cfg.atol;
  return opt;
}

std::vector<double> phase_grid(const Interval& span, std::size_t n) {
  if (span.a > 0.0 && span.b / span.a >= 1000.0) return logspace(span.a, span.b, n);
  return linspace(span.a, span.b, n);
}

// Window from the configured fraction. A span with less than pi of phase
// cannot support any of the fits.
Interval analysis_window(const PairTrajectory& traj, const RunConfig& cfg) {
  const std::vector<double> ends{traj.x_begin(), traj.x_end()};
  const PhaseData whole = phase_unwrap(traj, ends);
  const double advance = std::abs(whole.alpha[1] - whole.alpha[0]);
  if (advance < std::numbers::pi) {
    throw ConfigError("span carries only " + std::to_string(advance) +
                      " rad of phase; extend xmax so the solutions oscillate");
  }
  return tail_window(traj, cfg.window_fraction);
}

std::string number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string quoted(const std::string& s) { return ojson(s).dump(); }

void write(const ojson& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + quoted(it.key()) + ": ";
        write(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out += ",\n";
        out += inner;
        write(j[i], out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case ojson::value_t::number_float: out += number(j.get<double>()); return;
    default: out += j.dump(); return;
  }
}

std::string dump(const ojson& j) {
  std::string out;
  write(j, out, 0);
  out += "\n";
  return out;
}

ojson optional_number(const std::optional<double>& x) { return x ? ojson(*x) : ojson(nullptr); }

ojson config_json(const RunConfig& c, const Interval& span) {
  ojson p = ojson::object();
  for (const auto& [k, v] : c.params) p[k] = v;
  return {{"eq", c.eq},          {"params", p},       {"x0", span.a},
          {"xmax", span.b},      {"rtol", c.rtol},    {"atol", c.atol},
          {"window", c.window_fraction}, {"format", c.format}, {"seed", c.seed}};
}

ojson predicate_json(const Predicate& p) {
  return {{"verdict", to_string(p.verdict)},
          {"fails_at", optional_number(p.fails_at)},
          {"failing_points", p.failing_points},
          {"points", p.points},
          {"note", p.note}};
}

ojson classification_json(const Classification& c) {
  ojson windows = ojson::array();
  for (const Interval& w : c.windows) windows.push_back(ojson::array({w.a, w.b}));
  return {{"windows", windows},
          {"v_means", ojson(std::vector<double>(c.v_means.begin(), c.v_means.end()))},
          {"dv_means", ojson(std::vector<double>(c.dv_means.begin(), c.dv_means.end()))},
          {"ripple", c.ripple},
          {"diagnostics", c.diagnostics}};
}

}  // namespace

void RunConfig::validate() const {
  if (!(window_fraction > 0.0 && window_fraction <= 0.5)) throw ConfigError("--window must lie in (0, 0.5]");
  if (!(rtol > 0.0 && rtol < 1.0)) throw ConfigError("--rtol must lie in (0, 1)");
  if (!(atol > 0.0)) throw ConfigError("--atol must be positive");
  if (format != "json" && format != "csv") throw ConfigError("--format must be json or csv");
  if (x0 && xmax && !(*x0 < *xmax)) throw ConfigError("x0 must be smaller than xmax");
}

EquationModel make_model(const RunConfig& cfg) {
  EquationModel m = is_catalog_name(cfg.eq) ? catalog_get(cfg.eq, cfg.params) : parse_q(cfg.eq, cfg.params);
  return cfg.x0 ? m.with_x0(*cfg.x0) : m;
}

Interval run_span(const RunConfig& cfg) {
  const EquationModel m = make_model(cfg);
  double b = 100.0;
  if (cfg.xmax) {
    b = *cfg.xmax;
  } else if (auto it = kDefaultXmax.find(cfg.eq); it != kDefaultXmax.end()) {
    b = it->second;
  }
  if (!(m.x0() < b)) throw ConfigError("x0 must be smaller than xmax");
  return {m.x0(), b};
}

PairTrajectory default_unit_pair(const RunConfig& cfg, double* raw_wronskian) {
  cfg.validate();
  const EquationModel m = make_model(cfg);
  const Interval span = run_span(cfg);
  const PairTrajectory raw = integrate_pair(m, {0.0, 1.0}, {1.0, 0.0}, span.b, integrator_options(cfg));
  if (raw_wronskian) *raw_wronskian = raw.wronskian();
  return normalize_unit_wronskian(raw);
}

AnalysisReport analyze(const RunConfig& cfg) {
  AnalysisReport r;
  r.config = cfg;
  r.span = run_span(cfg);
  const PairTrajectory traj = default_unit_pair(cfg, &r.raw_wronskian);
  r.principal = find_principal(traj, analysis_window(traj, cfg));
  const PairTrajectory p = transform_pair(traj, r.principal.matrix);
  const double pad = 1e-3 * (r.span.b - r.span.a);
  r.appell = appell_residual(p, {1.0, 1.0, 0.0}, phase_grid({r.span.a + pad, r.span.b - pad}, 400));
  r.conditions = sufficient_conditions(make_model(cfg), r.span);
  r.notes.push_back(kNormalizationNote);
  if (!r.principal.diagnostics.empty()) r.notes.push_back(r.principal.diagnostics);
  return r;
}

ZerosReport zero_gaps(const RunConfig& cfg) {
  ZerosReport r;
  r.config = cfg;
  r.span = run_span(cfg);
  const PairTrajectory traj = default_unit_pair(cfg);
  r.principal = find_principal(traj, analysis_window(traj, cfg));
  const PairTrajectory p = transform_pair(traj, r.principal.matrix);
  const PhaseData phase = phase_unwrap(p, phase_grid(r.span, 2001));
  r.table = gap_table(p, phase, r.span);
  r.d_first = r.table.rows.front().gap;
  r.d_last = r.table.rows.back().gap;
  r.delta_last = r.table.rows.back().phase_gap;
  return r;
}

std::string to_json(const AnalysisReport& r) {
  const PrincipalReport& p = r.principal;
  const Classification& c = p.classification;
  ojson params = ojson::object();
  for (const auto& [k, v] : r.config.params) params[k] = v;
  ojson j;
  j["equation"] = r.config.eq;
  j["params"] = params;
  j["span"] = ojson::array({r.span.a, r.span.b});
  j["tolerances"] = {{"rtol", r.config.rtol}, {"atol", r.config.atol}};
  j["wronskian"] = r.raw_wronskian;
  j["coefficients"] = {{"A", p.coeffs.A}, {"B", p.coeffs.B}, {"C", p.coeffs.C}};
  j["classification"] = to_string(c.tag);
  j["L"] = optional_number(c.L);
  j["K"] = optional_number(c.K);
  j["k1"] = p.k1_est;
  j["k2"] = p.k2_est;
  j["objective"] = p.objective;
  j["window"] = ojson::array({p.window.a, p.window.b});
  j["appell_residual"] = {{"max", r.appell.max}, {"rms", r.appell.rms}, {"points", r.appell.count}};
  j["corollary1"] = predicate_json(r.conditions.corollary1);
  j["corollary2"] = predicate_json(r.conditions.corollary2);
  j["remark_finite_q"] = predicate_json(r.conditions.remark_finite_q);
  j["q_growth"] = r.conditions.q_growth;
  j["classifier"] = classification_json(c);
  j["config"] = config_json(r.config, r.span);
  j["notes"] = r.notes;
  return dump(j);
}

std::string to_json(const ZerosReport& r) {
  ojson rows = ojson::array();
  for (const ZeroGapRow& row : r.table.rows) {
    rows.push_back(
        {{"j", row.j}, {"x_crit", row.x_crit}, {"x_zero", row.x_zero}, {"gap", row.gap}, {"phase_gap", row.phase_gap}});
  }
  ojson j;
  j["equation"] = r.config.eq;
  j["span"] = ojson::array({r.span.a, r.span.b});
  j["coefficients"] = {{"A", r.principal.coeffs.A}, {"B", r.principal.coeffs.B}, {"C", r.principal.coeffs.C}};
  j["summary"] = {{"rows", r.table.rows.size()}, {"d_first", r.d_first}, {"d_last", r.d_last},
                  {"delta_last", r.delta_last}};
  j["rows"] = rows;
  j["config"] = config_json(r.config, r.span);
  j["notes"] = ojson::array({kNormalizationNote});
  return dump(j);
}

std::string to_csv(const ZerosReport& r) {
  std::string out = r.table.to_csv();
  out += "# summary d_first=" + number(r.d_first) + " d_last=" + number(r.d_last) +
         " delta_last=" + number(r.delta_last) + "\n";
  return out;
}

std::string to_json(const std::vector<Check>& checks) {
  ojson arr = ojson::array();
  for (const Check& c : checks) {
    arr.push_back({{"name", c.name},
                   {"measured", c.measured},
                   {"bound", c.bound},
                   {"status", c.pass ? "PASS" : "FAIL"},
                   {"known_failure", c.known_failure},
                   {"detail", c.detail}});
  }
  return dump(ojson{{"checks", arr}});
}

}  // namespace oscpair
