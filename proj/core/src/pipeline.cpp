#include "lanemden/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>

#include "lanemden/bubble_constants.hpp"
#include "lanemden/errors.hpp"
#include "lanemden/expansion.hpp"
#include "lanemden/ground_state_io.hpp"
#include "lanemden/kernel.hpp"
#include "lanemden/reduced_energy.hpp"
#include "lanemden/svg_plot.hpp"
#include "lanemden/table.hpp"

#ifndef LANEMDEN_VERSION
#define LANEMDEN_VERSION "0.0.0"
#endif

namespace lanemden {
namespace {

using json = nlohmann::json;

const std::map<std::string, std::vector<std::string>>& prerequisites() {
  static const std::map<std::string, std::vector<std::string>> deps{
      {"hyperbola", {}},
      {"ground_state", {"hyperbola"}},
      {"constants", {"ground_state"}},
      {"manifold", {}},
      {"reduce", {"constants", "manifold"}},
      {"expansion", {"constants", "manifold"}},
      {"kernel", {"ground_state"}},
  };
  return deps;
}

void close_over(const std::string& s, std::set<std::string>& out) {
  if (!out.insert(s).second) return;
  for (const auto& d : prerequisites().at(s)) close_over(d, out);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

json estimate_json(const Estimate& e) { return {{"value", e.value}, {"error", e.error}}; }

json point_json(const Point& x) { return std::vector<double>(x.data(), x.data() + x.size()); }

bool is_scalar_point(const HyperbolaPoint& hp) {
  const int N = hp.N;
  return std::abs(hp.p.value - hp.q.value) < 1e-14 && std::abs(hp.p.value - (N + 2.0) / (N - 2.0)) < 1e-12;
}

// Peaks for the expansion stage: configured, or the base point for k = 1,
// evenly spaced along the first torus axis, or antipodal on the sphere.
std::vector<Point> expansion_peaks(const RunConfig& cfg, const ModelManifold& m) {
  if (!cfg.peaks.empty()) {
    std::vector<Point> out;
    for (const auto& x : cfg.peaks) out.push_back(m.canonical(x));
    return out;
  }
  const Point base = m.base_point();
  if (cfg.k == 1) return {base};
  if (!m.is_sphere()) {
    const double P = std::get<FlatTorus>(m.kind()).periods[0];
    std::vector<Point> out;
    for (int j = 0; j < cfg.k; ++j) {
      Point x = base;
      x[0] += P * j / cfg.k;
      out.push_back(m.canonical(x));
    }
    return out;
  }
  require(cfg.k == 2, ErrorCode::ConfigInvalid, "sphere with k > 2 needs explicit expansion.peaks");
  return {base, m.canonical(-base)};
}

class Runner {
 public:
  Runner(const RunConfig& cfg, std::set<std::string> requested) : cfg_(cfg), requested_(std::move(requested)) {}

  RunReport run() {
    std::set<std::string> needed;
    for (const auto& s : requested_) close_over(s, needed);
    for (const auto& s : all_stages()) {
      if (!needed.count(s)) continue;
      bool blocked = false;
      for (const auto& d : prerequisites().at(s))
        if (status_[d] != "ok") blocked = true;
      if (blocked) {
        status_[s] = "skipped";
        stages_[s] = {{"status", "skipped"}};
        continue;
      }
      try {
        json out = dispatch(s);
        out["status"] = "ok";
        stages_[s] = out;
        status_[s] = "ok";
      } catch (const Error& e) {
        fail_stage(s, std::string(to_string(e.code())), e.what());
      } catch (const std::exception& e) {
        fail_stage(s, "Internal", e.what());
      }
    }
    return finish();
  }

 private:
  void fail_stage(const std::string& s, const std::string& code, const std::string& msg) {
    status_[s] = "failed";
    stages_[s] = {{"status", "failed"}, {"error", {{"code", code}, {"message", msg}}}};
    report_.failures.push_back({s, code, msg});
  }

  void verdict(const std::string& stage, const std::string& name, double value, double threshold, bool upper = true) {
    if (!requested_.count(stage)) return;
    const bool ok = std::isfinite(value) && (upper ? value <= threshold : value >= threshold);
    report_.verdicts.push_back({stage, name, value, threshold, upper ? "<=" : ">=", ok});
  }

  json dispatch(const std::string& s) {
    if (s == "hyperbola") return hyperbola();
    if (s == "ground_state") return ground_state();
    if (s == "constants") return constants();
    if (s == "manifold") return manifold();
    if (s == "reduce") return reduce();
    if (s == "expansion") return expansion();
    return kernel();
  }

  json hyperbola() {
    hp_ = config_hyperbola(cfg_);
    const int N = hp_->N;
    const double relation = std::abs(1.0 / (hp_->p.value + 1) + 1.0 / (hp_->q.value + 1) - (N - 2.0) / N);
    const Regime regime = classify_regime(hp_->p, N);
    verdict("hyperbola", "relation_residual", relation, kHyperbolaTolerance);
    json out{{"p", hp_->p.str()},
             {"q", hp_->q.str()},
             {"p_value", hp_->p.value},
             {"q_value", hp_->q.value},
             {"N", N},
             {"regime", std::string(to_string(regime.tag))},
             {"minimum_dimension", regime.minimum_dimension},
             {"relation_residual", relation}};
    if (regime.tag != RegimeTag::Unsupported) {
      const DecayRates d = decay_rates(hp_->p, N);
      out["decay"] = {{"v_rate", d.v_rate}, {"u_rate", d.u_rate}, {"u_log_flag", d.u_log_flag}};
    }
    return out;
  }

  json ground_state() {
    SolverOptions opts = cfg_.solver;
    bool hit = false;
    gs_ = load_or_solve(cache_directory(cfg_), *hp_, opts, &hit);
    const auto& d = gs_->diagnostics();
    const auto& t = gs_->tail_fit();
    verdict("ground_state", "profile_residual", d.residual_max, cfg_.solver.residual_tol);
    verdict("ground_state", "tail_slope_deviation", t.worst_deviation(), t.band);
    json out{{"U_at_zero", gs_->normalization().U_at_zero},
             {"V_at_zero", gs_->normalization().V_at_zero},
             {"a_error", d.a_error},
             {"match_residual", d.match_residual},
             {"junction_radius", d.junction_radius},
             {"residual_max", d.residual_max},
             {"bisection_iterations", d.bisection_iterations},
             {"newton_iterations", d.newton_iterations},
             {"r_max", gs_->r_max()},
             {"grid_points", gs_->grid().size()},
             {"half_radius", gs_->half_radius()},
             {"tail",
              {{"r_lo", t.r_lo},
               {"r_hi", t.r_hi},
               {"U_slope", t.U.measured},
               {"U_predicted", t.U.predicted},
               {"V_slope", t.V.measured},
               {"V_predicted", t.V.predicted},
               {"worst_deviation", t.worst_deviation()}}}};
    if (is_scalar_point(*hp_)) {
      // Closed-form bubble (1 + r^2/(N(N-2)))^{-(N-2)/2} in the V(0) = 1 gauge.
      const int N = gs_->N();
      double worst = 0.0;
      for (std::size_t i = 0; i < gs_->grid().size() && gs_->grid()[i] <= 50.0; ++i) {
        const double r = gs_->grid()[i];
        const double w = std::pow(1.0 + r * r / (N * (N - 2.0)), -(N - 2.0) / 2.0);
        worst = std::max({worst, std::abs(gs_->U()[i] - w) / w, std::abs(gs_->V()[i] - w) / w});
      }
      out["closed_form_deviation"] = worst;
      verdict("ground_state", "closed_form_deviation", worst, 1e-6);
    }
    return out;
  }

  json constants() {
    c_ = compute_constants(*gs_, cfg_.quadrature);
    const auto& c = *c_;
    const double l1 = std::max({rel(c.L1_from_V.value, c.L1.value), rel(c.L1_from_U.value, c.L1.value),
                                rel(c.L1_from_U.value, c.L1_from_V.value)});
    verdict("constants", "L1_pairwise_deviation", l1, 1e-4);
    const double phic = phi_coefficient(c);
    json out{{"omega", c.omega},         {"L1", estimate_json(c.L1)}, {"L1_from_V", estimate_json(c.L1_from_V)},
             {"L1_from_U", estimate_json(c.L1_from_U)}, {"L2", estimate_json(c.L2)}, {"L3", estimate_json(c.L3)},
             {"L4", estimate_json(c.L4)}, {"L5", estimate_json(c.L5)}, {"L6", estimate_json(c.L6)},
             {"L7", estimate_json(c.L7)}, {"phi_coefficient", phic},    {"L1_pairwise_deviation", l1}};
    if (std::abs(c.p - c.q) < 1e-14) {
      const double target = (c.N - 2.0) / (4.0 * (c.N - 1.0));
      verdict("constants", "scalar_phi_coefficient_deviation", rel(phic, target), 1e-3);
      out["scalar_phi_coefficient_target"] = target;
    }
    const C1C2 cc = c1_c2(c, cfg_.alpha, cfg_.beta, cfg_.k);
    out["c1"] = cc.c1;
    out["c2"] = cc.c2;
    out["c_tilde"] = c_tilde(c, cfg_.alpha, cfg_.beta);
    return out;
  }

  json manifold() {
    m_ = config_manifold(cfg_);
    validate_potential(*m_, cfg_.potential);
    const Point xi = m_->base_point();
    const double kappa = sphere_area_ratio_check(*m_, xi, default_area_radii(*m_));
    const double target = -m_->scal(xi) / (6.0 * m_->N());
    if (m_->is_sphere())
      verdict("manifold", "area_ratio_deviation", rel(kappa, target), 1e-2);
    else
      verdict("manifold", "area_ratio_kappa", std::abs(kappa), 1e-10);
    return {{"kind", m_->describe()},
            {"injectivity_radius", m_->injectivity_radius()},
            {"diameter", m_->diameter()},
            {"volume", m_->volume()},
            {"scal", m_->scal(xi)},
            {"r0", config_r0(cfg_, *m_)},
            {"kappa", kappa},
            {"kappa_target", target}};
  }

  json reduce() {
    SearchOptions o;
    o.starts = cfg_.search.starts;
    o.seed = cfg_.seed;
    o.rho1 = cfg_.rho1;
    o.rho2 = cfg_.rho2;
    o.r0 = config_r0(cfg_, *m_);
    o.gtol = cfg_.search.gtol;
    o.max_iterations = cfg_.search.max_iterations;
    const auto pts = find_critical_points(*m_, cfg_.potential, *c_, cfg_.k, cfg_.alpha, cfg_.beta, o);
    json list = json::array();
    double worst_t = 0.0, worst_g = 0.0;
    for (const auto& pt : pts) {
      json xs = json::array();
      for (const auto& x : pt.xi) xs.push_back(point_json(x));
      std::vector<double> t0;
      for (std::size_t j = 0; j < pt.t.size(); ++j) {
        t0.push_back(optimal_t(*c_, cfg_.alpha, cfg_.beta, pt.phi[j]));
        worst_t = std::max(worst_t, rel(pt.t[j], t0.back()));
      }
      worst_g = std::max(worst_g, pt.gradient_norm);
      list.push_back({{"t", pt.t},
                      {"t_optimal", t0},
                      {"xi", xs},
                      {"phi", pt.phi},
                      {"value", pt.value},
                      {"gradient_norm", pt.gradient_norm},
                      {"eig_min_abs", pt.eig_min_abs},
                      {"eig_max_abs", pt.eig_max_abs},
                      {"negative_eigs", pt.negative_eigs},
                      {"degenerate", pt.degenerate}});
    }
    verdict("reduce", "gradient_norm", worst_g, cfg_.search.gtol);
    verdict("reduce", "scale_vs_closed_form", worst_t, 1e-8);
    return {{"count", pts.size()}, {"critical_points", list}};
  }

  json expansion() {
    const double r0 = config_r0(cfg_, *m_);
    const auto peaks = expansion_peaks(cfg_, *m_);
    std::vector<double> t;
    std::vector<double> phis;
    for (const auto& x : peaks) {
      phis.push_back(phi(*m_, cfg_.potential, *c_, x));
      t.push_back(optimal_t(*c_, cfg_.alpha, cfg_.beta, phis.back()));
    }
    const auto eps = config_epsilon(cfg_);
    const ExpansionFit f = sweep_and_fit(*m_, cfg_.potential, *gs_, *c_, t, peaks, cfg_.alpha, cfg_.beta, eps, r0);
    verdict("expansion", "a_relative_error", f.a_error, 1e-3);
    verdict("expansion", "c_relative_error", f.c_error, 5e-2);
    verdict("expansion", "b_relative_error", f.b_error, 5e-2);

    Table sweep({"epsilon", "J", "grad_term", "h_term", "p_term", "q_term", "quadrature_error"});
    for (std::size_t i = 0; i < eps.size(); ++i) {
      const auto& e = f.terms[i];
      sweep.add_row({eps[i], f.J[i], e.grad_term, e.h_term, e.p_term, e.q_term, e.error});
    }
    report_.sweep_csv = sweep.to_csv();
    sweep_text_ = sweep.to_text();

    json xs = json::array();
    for (const auto& x : peaks) xs.push_back(point_json(x));
    json out{{"r0", r0},
             {"peaks", xs},
             {"phi", phis},
             {"t", t},
             {"epsilon", eps},
             {"J", f.J},
             {"fit",
              {{"a", f.a},
               {"b", f.b},
               {"c", f.c},
               {"a_predicted", f.a_predicted},
               {"b_predicted", f.b_predicted},
               {"c_predicted", f.c_predicted},
               {"a_relative_error", f.a_error},
               {"b_relative_error", f.b_error},
               {"c_relative_error", f.c_error},
               {"residual_norm", f.residual_norm},
               {"condition", f.condition}}}};

    if (peaks.size() > 1) {
      double sa = 0, sb = 0, sc = 0;
      for (std::size_t j = 0; j < peaks.size(); ++j) {
        const auto g = sweep_and_fit(*m_, cfg_.potential, *gs_, *c_, {t[j]}, {peaks[j]}, cfg_.alpha, cfg_.beta, eps, r0);
        sa += g.a;
        sb += g.b;
        sc += g.c;
      }
      const double add = std::max({rel(sa, f.a), rel(sb, f.b), rel(sc, f.c)});
      verdict("expansion", "additivity_deviation", add, 1e-9);
      out["additivity_deviation"] = add;
    }

    // Second-order coefficients of the gradient and potential terms at the first peak.
    const auto ds = delta_sweep(*m_, cfg_.potential, *gs_, peaks[0], r0, geometric_grid(1e-3, 5e-3, 6));
    const int N = m_->N();
    const double scal = m_->scal(peaks[0]);
    const double h0 = evaluate(*m_, cfg_.potential, peaks[0]);
    const double grad_target = -c_->L2.value * scal / (6.0 * N);
    const double h_target = c_->L3.value * h0;
    const double grad_dev = std::abs(ds.grad.c2 - grad_target) /
                            std::max(std::abs(grad_target), c_->L2.value / (6.0 * N));
    const double h_dev = std::abs(ds.h.c2 - h_target) / std::max(std::abs(h_target), c_->L3.value);
    verdict("expansion", "grad_delta2_deviation", grad_dev, 5e-2);
    verdict("expansion", "h_delta2_deviation", h_dev, 5e-2);
    out["delta_sweep"] = {{"delta", ds.delta},
                          {"grad_c0", ds.grad.c0},
                          {"grad_c2", ds.grad.c2},
                          {"grad_c2_target", grad_target},
                          {"h_c2", ds.h.c2},
                          {"h_c2_target", h_target},
                          {"grad_deviation", grad_dev},
                          {"h_deviation", h_dev}};

    if (cfg_.plot) {
      PlotSpec spec;
      spec.title = "J(eps) - a";
      spec.x_label = "epsilon";
      spec.y_label = "J - a";
      spec.log_x = true;
      PlotSeries measured{"measured", eps, {}, true};
      for (double j : f.J) measured.y.push_back(j - f.a);
      PlotSeries fitted{"fit b eps + c eps log eps", geometric_grid(eps.front(), eps.back(), 60), {}, false};
      for (double e : fitted.x) fitted.y.push_back(f.b * e + f.c * e * std::log(e));
      spec.series = {measured, fitted};
      report_.plot_svg = svg_plot(spec);
    }
    return out;
  }

  json kernel() {
    const KernelReport k = kernel_residual(*gs_, cfg_.kernel.control_seed, cfg_.kernel.window);
    verdict("kernel", "dilation_residual", k.dilation.worst(), 1e-5);
    verdict("kernel", "translation_residual", k.translation.worst(), 1e-5);
    verdict("kernel", "control_residual", k.control.worst(), 1e-1, false);
    auto pr = [](const PairResidual& r) {
      return json{{"psi_equation", r.psi_equation}, {"phi_equation", r.phi_equation}, {"r_lo", r.r_lo},
                  {"r_hi", r.r_hi}};
    };
    return {{"dilation", pr(k.dilation)}, {"translation", pr(k.translation)}, {"control", pr(k.control)}};
  }

  RunReport finish() {
    report_.version = tool_version();
    report_.config_hash = config_hash(cfg_);
    json verdicts = json::array();
    for (const auto& v : report_.verdicts)
      verdicts.push_back({{"stage", v.stage},
                          {"name", v.name},
                          {"value", v.value},
                          {"threshold", v.threshold},
                          {"relation", v.relation},
                          {"passed", v.passed}});
    std::vector<std::string> requested(requested_.begin(), requested_.end());
    const json doc{{"provenance",
                    {{"tool", "lanemden"},
                     {"version", report_.version},
                     {"config_hash", report_.config_hash},
                     {"config", json::parse(serialize_config(cfg_))}}},
                   {"requested_stages", requested},
                   {"stages", stages_},
                   {"verdicts", verdicts},
                   {"all_passed", report_.all_passed()}};
    report_.report_json = doc.dump(2) + "\n";
    report_.report_hash = hex64(fnv1a(report_.report_json));
    report_.summary = summary();
    return report_;
  }

  std::string summary() const {
    std::string s = "lanemden " + report_.version + "  config " + report_.config_hash + "  report " +
                     report_.report_hash + "\n\n";
    Table st({"stage", "status"});
    for (const auto& name : all_stages())
      if (status_.count(name)) st.add_row({name, status_.at(name)});
    s += st.to_text() + "\n";
    if (c_) {
      Table lt({"constant", "value", "error"});
      const std::pair<const char*, const Estimate*> rows[] = {
          {"L1", &c_->L1}, {"L2", &c_->L2}, {"L3", &c_->L3}, {"L4", &c_->L4},
          {"L5", &c_->L5}, {"L6", &c_->L6}, {"L7", &c_->L7}};
      for (const auto& [n, e] : rows) lt.add_row({std::string(n), e->value, e->error});
      s += lt.to_text() + "\n";
    }
    if (!sweep_text_.empty()) s += sweep_text_ + "\n";
    Table vt({"verdict", "stage", "check", "value", "threshold"});
    for (const auto& v : report_.verdicts)
      vt.add_row({std::string(v.passed ? "PASS" : "FAIL"), v.stage, v.name, v.value, v.relation + " " +
                  format_double(v.threshold, 6)});
    s += vt.to_text();
    for (const auto& f : report_.failures) s += "\nstage " + f.stage + " failed [" + f.code + "]: " + f.message;
    if (!report_.failures.empty()) s += "\n";
    s += std::string("\nall verdicts ") + (report_.all_passed() ? "passed" : "did not pass") + "\n";
    return s;
  }

  const RunConfig& cfg_;
  std::set<std::string> requested_;
  RunReport report_;
  std::map<std::string, std::string> status_;
  json stages_ = json::object();
  std::string sweep_text_;
  std::optional<HyperbolaPoint> hp_;
  std::optional<GroundState> gs_;
  std::optional<BubbleConstants> c_;
  std::optional<ModelManifold> m_;
};

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << text;
}

}  // namespace

bool RunReport::all_passed() const {
  if (!failures.empty()) return false;
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

const char* tool_version() { return LANEMDEN_VERSION; }

std::filesystem::path cache_directory(const RunConfig& cfg) {
  if (const char* env = std::getenv("LANEMDEN_CACHE_DIR"); env && *env) return env;
  return std::filesystem::path(cfg.output_dir) / "cache";
}

RunReport run_pipeline(const RunConfig& cfg, const std::vector<std::string>& requested) {
  validate_config(cfg);
  const auto& chosen = requested.empty() ? cfg.stages : requested;
  std::set<std::string> req;
  for (const auto& s : chosen) {
    require(prerequisites().count(s) > 0, ErrorCode::ConfigInvalid, "unknown stage " + s);
    req.insert(s);
  }
  return Runner(cfg, std::move(req)).run();
}

void write_outputs(const RunReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "report.json", report.report_json);
  write_text(dir / "summary.txt", report.summary);
  if (!report.sweep_csv.empty()) write_text(dir / "sweep.csv", report.sweep_csv);
  if (!report.plot_svg.empty()) write_text(dir / "plot.svg", report.plot_svg);
}

}  // namespace lanemden
