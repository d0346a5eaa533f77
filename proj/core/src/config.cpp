#include "lanemden/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "lanemden/errors.hpp"
#include "lanemden/expansion.hpp"

namespace lanemden {
namespace {

using json = nlohmann::json;

[[noreturn]] void invalid(const std::string& msg) { fail(ErrorCode::ConfigInvalid, msg); }

// Object view that rejects keys nobody asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) invalid(path_ + " must be an object");
  }

  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, _] : j_.items())
      if (!seen_.count(key)) invalid("unknown key " + path_ + "." + key);
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() || it->is_null() ? nullptr : &*it;
  }

  template <class T>
  void read(const std::string& key, T& out) {
    if (const json* v = find(key)) out = as<T>(*v, path_ + "." + key);
  }

  std::string path(const std::string& key) const { return path_ + "." + key; }

  template <class T>
  static T as(const json& v, const std::string& where) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) invalid(where + " must be a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) invalid(where + " must be a string");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) invalid(where + " must be an integer");
      if constexpr (std::is_unsigned_v<T>)
        if (v.is_number_integer() && !v.is_number_unsigned()) invalid(where + " must be non-negative");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) invalid(where + " must be a number");
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      if (!v.is_array()) invalid(where + " must be an array of numbers");
      for (const auto& x : v)
        if (!x.is_number()) invalid(where + " must be an array of numbers");
    }
    return v.get<T>();
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string exponent_text(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  invalid(where + " must be a string or a number");
}

Point read_point(const json& v, const std::string& where) {
  const auto x = Section::as<std::vector<double>>(v, where);
  return Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

json point_json(const Point& x) { return std::vector<double>(x.data(), x.data() + x.size()); }

PotentialSpec read_potential(const json& j) {
  Section s(j, "potential");
  std::string kind = "constant";
  s.read("kind", kind);
  if (kind == "constant") {
    ConstantPotential c;
    s.read("value", c.value);
    return c;
  }
  if (kind == "radial") {
    RadialPotential r;
    s.read("offset", r.offset);
    if (const json* b = s.find("bumps")) {
      if (!b->is_array()) invalid("potential.bumps must be an array");
      for (const auto& e : *b) {
        Section bs(e, "potential.bumps[]");
        RadialBump bump;
        if (const json* a = bs.find("anchor")) bump.anchor = read_point(*a, "potential.bumps[].anchor");
        bs.read("amplitude", bump.amplitude);
        bs.read("width", bump.width);
        r.bumps.push_back(bump);
      }
    }
    return r;
  }
  if (kind == "trig") {
    TrigPotential t;
    s.read("offset", t.offset);
    if (const json* terms = s.find("terms")) {
      if (!terms->is_array()) invalid("potential.terms must be an array");
      for (const auto& e : *terms) {
        Section ts(e, "potential.terms[]");
        TrigTerm term;
        ts.read("axis", term.axis);
        ts.read("amplitude", term.amplitude);
        ts.read("mode", term.mode);
        ts.read("phase", term.phase);
        t.terms.push_back(term);
      }
    }
    return t;
  }
  if (kind == "ambient_linear") {
    AmbientLinearPotential a;
    s.read("offset", a.offset);
    if (const json* d = s.find("direction")) a.direction = read_point(*d, "potential.direction");
    return a;
  }
  invalid("potential.kind must be constant, radial, trig or ambient_linear");
}

json potential_json(const PotentialSpec& h) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ConstantPotential>) {
          return {{"kind", "constant"}, {"value", v.value}};
        } else if constexpr (std::is_same_v<T, RadialPotential>) {
          json bumps = json::array();
          for (const auto& b : v.bumps)
            bumps.push_back({{"anchor", point_json(b.anchor)}, {"amplitude", b.amplitude}, {"width", b.width}});
          return {{"kind", "radial"}, {"offset", v.offset}, {"bumps", bumps}};
        } else if constexpr (std::is_same_v<T, TrigPotential>) {
          json terms = json::array();
          for (const auto& t : v.terms)
            terms.push_back({{"axis", t.axis}, {"amplitude", t.amplitude}, {"mode", t.mode}, {"phase", t.phase}});
          return {{"kind", "trig"}, {"offset", v.offset}, {"terms", terms}};
        } else {
          return {{"kind", "ambient_linear"}, {"offset", v.offset}, {"direction", point_json(v.direction)}};
        }
      },
      h);
}

json to_json(const RunConfig& c) {
  json peaks = json::array();
  for (const auto& x : c.peaks) peaks.push_back(point_json(x));
  return {
      {"hyperbola", {{"p", c.p}, {"q", c.q ? json(*c.q) : json(nullptr)}, {"N", c.N}}},
      {"manifold", {{"kind", c.manifold.kind}, {"radius", c.manifold.radius}, {"periods", c.manifold.periods}}},
      {"potential", potential_json(c.potential)},
      {"reduction",
       {{"k", c.k},
        {"alpha", c.alpha},
        {"beta", c.beta},
        {"rho1", c.rho1},
        {"rho2", c.rho2},
        {"r0", c.r0},
        {"starts", c.search.starts},
        {"gtol", c.search.gtol},
        {"max_iterations", c.search.max_iterations},
        {"seed", c.seed}}},
      {"solver",
       {{"r_max", c.solver.r_max},
        {"rtol", c.solver.rtol},
        {"bisection_tol", c.solver.bisection_tol},
        {"grid_ratio", c.solver.grid_ratio},
        {"residual_tol", c.solver.residual_tol},
        {"decay_band", c.solver.decay_band}}},
      {"quadrature", {{"panel_split", c.quadrature.panel_split}}},
      {"expansion", {{"epsilon", c.epsilon}, {"peaks", peaks}}},
      {"kernel", {{"window", c.kernel.window}, {"control_seed", c.kernel.control_seed}}},
      {"stages", c.stages},
      {"output", {{"dir", c.output_dir}, {"plot", c.plot}}},
  };
}

RunConfig from_json(const json& j) {
  RunConfig c;
  Section top(j, "config");
  if (const json* h = top.find("hyperbola")) {
    Section s(*h, "hyperbola");
    if (const json* p = s.find("p")) c.p = exponent_text(*p, "hyperbola.p");
    if (const json* q = s.find("q")) c.q = exponent_text(*q, "hyperbola.q");
    s.read("N", c.N);
  }
  if (const json* m = top.find("manifold")) {
    Section s(*m, "manifold");
    s.read("kind", c.manifold.kind);
    s.read("radius", c.manifold.radius);
    s.read("periods", c.manifold.periods);
  }
  if (const json* h = top.find("potential")) c.potential = read_potential(*h);
  if (const json* r = top.find("reduction")) {
    Section s(*r, "reduction");
    s.read("k", c.k);
    s.read("alpha", c.alpha);
    s.read("beta", c.beta);
    s.read("rho1", c.rho1);
    s.read("rho2", c.rho2);
    s.read("r0", c.r0);
    s.read("starts", c.search.starts);
    s.read("gtol", c.search.gtol);
    s.read("max_iterations", c.search.max_iterations);
    s.read("seed", c.seed);
  }
  if (const json* o = top.find("solver")) {
    Section s(*o, "solver");
    s.read("r_max", c.solver.r_max);
    s.read("rtol", c.solver.rtol);
    s.read("bisection_tol", c.solver.bisection_tol);
    s.read("grid_ratio", c.solver.grid_ratio);
    s.read("residual_tol", c.solver.residual_tol);
    s.read("decay_band", c.solver.decay_band);
  }
  if (const json* o = top.find("quadrature")) {
    Section s(*o, "quadrature");
    s.read("panel_split", c.quadrature.panel_split);
  }
  if (const json* e = top.find("expansion")) {
    Section s(*e, "expansion");
    s.read("epsilon", c.epsilon);
    if (const json* pk = s.find("peaks")) {
      if (!pk->is_array()) invalid("expansion.peaks must be an array of points");
      for (const auto& x : *pk) c.peaks.push_back(read_point(x, "expansion.peaks[]"));
    }
  }
  if (const json* k = top.find("kernel")) {
    Section s(*k, "kernel");
    s.read("window", c.kernel.window);
    s.read("control_seed", c.kernel.control_seed);
  }
  if (const json* st = top.find("stages")) {
    if (!st->is_array()) invalid("stages must be an array of strings");
    c.stages.clear();
    for (const auto& x : *st) c.stages.push_back(Section::as<std::string>(x, "stages[]"));
  }
  if (const json* o = top.find("output")) {
    Section s(*o, "output");
    s.read("dir", c.output_dir);
    s.read("plot", c.plot);
  }
  return c;
}

void check(bool cond, const std::string& msg) {
  if (!cond) invalid(msg);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    invalid(std::string("malformed JSON: ") + e.what());
  }
  RunConfig c;
  try {
    c = from_json(j);
  } catch (const json::exception& e) {
    invalid(e.what());
  }
  validate_config(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

void validate_config(const RunConfig& c) {
  check(c.N >= 3, "hyperbola.N must be at least 3");
  check(c.k >= 1, "reduction.k must be at least 1");
  check(c.alpha > 0 && std::isfinite(c.alpha), "reduction.alpha must be positive");
  check(c.beta > 0 && std::isfinite(c.beta), "reduction.beta must be positive");
  check(c.rho1 > 0 && c.rho1 < 1, "reduction.rho1 must lie in (0, 1)");
  check(c.rho2 >= 0, "reduction.rho2 must be non-negative");
  check(c.r0 >= 0, "reduction.r0 must be non-negative");
  check(c.search.starts >= 1, "reduction.starts must be at least 1");
  check(c.search.gtol > 0, "reduction.gtol must be positive");
  check(c.search.max_iterations >= 1, "reduction.max_iterations must be at least 1");
  check(c.solver.r_max >= 50, "solver.r_max must be at least 50");
  check(c.solver.rtol > 0 && c.solver.rtol < 1e-6, "solver.rtol must lie in (0, 1e-6)");
  check(c.solver.bisection_tol > 0, "solver.bisection_tol must be positive");
  check(c.solver.grid_ratio > 1 && c.solver.grid_ratio < 1.1, "solver.grid_ratio must lie in (1, 1.1)");
  check(c.solver.residual_tol > 0, "solver.residual_tol must be positive");
  check(c.solver.decay_band > 0, "solver.decay_band must be positive");
  check(c.quadrature.panel_split >= 1, "quadrature.panel_split must be at least 1");
  check(c.kernel.window > 0 && c.kernel.window <= 1, "kernel.window must lie in (0, 1]");
  check(!c.output_dir.empty(), "output.dir must not be empty");
  check(!c.stages.empty(), "stages must not be empty");
  for (const auto& s : c.stages)
    check(std::find(all_stages().begin(), all_stages().end(), s) != all_stages().end(), "unknown stage " + s);
  if (!c.epsilon.empty()) {
    check(c.epsilon.size() >= 6, "expansion.epsilon needs at least 6 points");
    for (std::size_t i = 0; i < c.epsilon.size(); ++i) {
      check(c.epsilon[i] > 0, "expansion.epsilon must be positive");
      if (i > 0) check(c.epsilon[i] < c.epsilon[i - 1], "expansion.epsilon must be strictly decreasing");
    }
    check(c.epsilon.front() / c.epsilon.back() >= 100.0 * (1 - 1e-12), "expansion.epsilon must span two decades");
  }
  check(c.manifold.kind == "torus" || c.manifold.kind == "sphere", "manifold.kind must be torus or sphere");
  if (c.manifold.kind == "sphere") check(c.manifold.radius > 0, "manifold.radius must be positive");
  if (c.manifold.kind == "torus" && !c.manifold.periods.empty())
    check(c.manifold.periods.size() == static_cast<std::size_t>(c.N), "manifold.periods needs N entries");

  try {
    config_hyperbola(c);
    const ModelManifold m = config_manifold(c);
    validate_potential(m, c.potential);
    const double r0 = config_r0(c, m);
    check(r0 < m.injectivity_radius() / 2, "reduction.r0 must be below injectivity/2");
    check(c.rho2 == 0 || c.rho2 > 2 * r0, "reduction.rho2 must exceed 2 r0");
    for (const auto& x : c.peaks) m.canonical(x);
    check(c.peaks.empty() || c.peaks.size() == static_cast<std::size_t>(c.k), "expansion.peaks needs k points");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigInvalid) throw;
    if (e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::ChartViolation)
      invalid(e.what());
    throw;
  }
}

std::string config_schema() {
  const json d = to_json(RunConfig{});
  auto prop = [](const std::string& type, const json& def, const std::string& desc) {
    return json{{"type", type}, {"default", def}, {"description", desc}};
  };
  auto obj = [](json props) {
    return json{{"type", "object"}, {"additionalProperties", false}, {"properties", std::move(props)}};
  };
  json potential = obj({
      {"kind", prop("string", "constant", "constant | radial | trig | ambient_linear")},
      {"value", prop("number", 8.0, "constant: the value of h")},
      {"offset", prop("number", 0.0, "radial, trig, ambient_linear: additive constant")},
      {"bumps", prop("array", json::array(),
                     "radial: [{anchor: point, amplitude, width}], h += amplitude (1 - (d/width)^2)^3 for d < width")},
      {"terms", prop("array", json::array(),
                     "trig (torus): [{axis, amplitude, mode, phase}], h += amplitude cos(2 pi mode x_axis / P + phase)")},
      {"direction", prop("array", json::array(), "ambient_linear (sphere): h += <direction, x> / radius")},
  });
  potential["default"] = d["potential"];
  json schema = obj({
      {"hyperbola", obj({{"p", prop("string", d["hyperbola"]["p"], "exponent p as a fraction, decimal or number")},
                         {"q", prop("string", nullptr, "exponent q; derived from the critical hyperbola when null")},
                         {"N", prop("integer", d["hyperbola"]["N"], "dimension")}})},
      {"manifold", obj({{"kind", prop("string", "torus", "torus | sphere")},
                        {"radius", prop("number", 1.0, "sphere radius")},
                        {"periods", prop("array", json::array(), "torus periods; empty selects N copies of 2 pi")}})},
      {"potential", potential},
      {"reduction",
       obj({{"k", prop("integer", 1, "number of peaks")},
            {"alpha", prop("number", 1.0, "perturbation weight on the p exponent, > 0")},
            {"beta", prop("number", 1.0, "perturbation weight on the q exponent, > 0")},
            {"rho1", prop("number", d["reduction"]["rho1"], "scales are confined to (rho1, 1/rho1)")},
            {"rho2", prop("number", 0.0, "minimum peak separation; 0 selects 2.02 r0")},
            {"r0", prop("number", 0.0, "cutoff radius; 0 selects injectivity/4")},
            {"starts", prop("integer", 64, "multi-start count of the critical point search")},
            {"gtol", prop("number", d["reduction"]["gtol"], "gradient tolerance of the search")},
            {"max_iterations", prop("integer", 200, "iterations per start")},
            {"seed", prop("integer", d["reduction"]["seed"], "random seed of the search")}})},
      {"solver", obj({{"r_max", prop("number", d["solver"]["r_max"], "outer radius of the stored profile")},
                      {"rtol", prop("number", d["solver"]["rtol"], "integrator relative tolerance")},
                      {"bisection_tol", prop("number", d["solver"]["bisection_tol"], "relative bracket width")},
                      {"grid_ratio", prop("number", d["solver"]["grid_ratio"], "geometric ratio of the radial grid")},
                      {"residual_tol", prop("number", d["solver"]["residual_tol"], "profile acceptance residual")},
                      {"decay_band", prop("number", d["solver"]["decay_band"], "relative band for tail slopes")}})},
      {"quadrature", obj({{"panel_split", prop("integer", 1, "quadrature panels per grid interval")}})},
      {"expansion", obj({{"epsilon", prop("array", json::array(),
                                          "decreasing epsilon grid over two decades; empty selects 8 points "
                                          "from 1e-4 to 1e-6")},
                         {"peaks", prop("array", json::array(), "k peak points; empty selects the base point")}})},
      {"kernel", obj({{"window", prop("number", 0.8, "checked range as a fraction of r_max")},
                      {"control_seed", prop("integer", 7, "seed of the random negative control")}})},
      {"stages", prop("array", d["stages"], "subset of hyperbola, ground_state, constants, manifold, reduce, "
                                            "expansion, kernel")},
      {"output", obj({{"dir", prop("string", d["output"]["dir"], "output directory")},
                      {"plot", prop("boolean", true, "write plot.svg for the expansion stage")}})},
  });
  schema["$schema"] = "https://json-schema.org/draft/2020-12/schema";
  schema["title"] = "lanemden run configuration";
  return schema.dump(2) + "\n";
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

std::string config_hash(const RunConfig& cfg) { return hex64(fnv1a(serialize_config(cfg))); }

HyperbolaPoint config_hyperbola(const RunConfig& cfg) {
  const Exponent p = Exponent::parse(cfg.p);
  if (cfg.q) return make_hyperbola_point(p, Exponent::parse(*cfg.q), cfg.N);
  return make_hyperbola_point(p, cfg.N);
}

ModelManifold config_manifold(const RunConfig& cfg) {
  if (cfg.manifold.kind == "sphere") return ModelManifold::sphere(cfg.N, cfg.manifold.radius);
  if (cfg.manifold.periods.empty()) return ModelManifold::torus(cfg.N, 2.0 * M_PI);
  return ModelManifold::torus(cfg.manifold.periods);
}

double config_r0(const RunConfig& cfg, const ModelManifold& m) { return cfg.r0 > 0 ? cfg.r0 : default_r0(m); }

std::vector<double> config_epsilon(const RunConfig& cfg) {
  return cfg.epsilon.empty() ? default_epsilon_grid() : cfg.epsilon;
}

}  // namespace lanemden
