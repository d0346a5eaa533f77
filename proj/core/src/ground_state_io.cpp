#include "lanemden/ground_state_io.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "lanemden/errors.hpp"

namespace lanemden {
namespace {

constexpr const char* kMagic = "# lanemden ground state";

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::CacheFormat, "bad number for '" + key + "': " + text);
  }
}

}  // namespace

void write_ground_state(std::ostream& out, const GroundState& gs) {
  const auto& n = gs.normalization();
  const auto& d = gs.diagnostics();
  out << kMagic << "\n";
  out << "format_version=" << kGroundStateFormatVersion << "\n";
  out << "p=" << gs.hyperbola().p.str() << "\n";
  out << "p_exact=" << gs.hyperbola().p.exact.has_value() << "\n";
  out << "q=" << gs.hyperbola().q.str() << "\n";
  out << "q_exact=" << gs.hyperbola().q.exact.has_value() << "\n";
  out << "N=" << gs.N() << "\n";
  out << "V_at_zero=" << num(n.V_at_zero) << "\n";
  out << "U_at_zero=" << num(n.U_at_zero) << "\n";
  out << "gauge_delta=" << num(n.gauge_delta) << "\n";
  out << "r_max=" << num(d.r_max) << "\n";
  out << "rtol=" << num(d.rtol) << "\n";
  out << "a_error=" << num(d.a_error) << "\n";
  out << "match_residual=" << num(d.match_residual) << "\n";
  out << "junction_radius=" << num(d.junction_radius) << "\n";
  out << "bisection_iterations=" << d.bisection_iterations << "\n";
  out << "newton_iterations=" << d.newton_iterations << "\n";
  out << "decay_band=" << num(gs.tail_fit().band) << "\n";
  out << "rows=" << gs.grid().size() << "\n";
  out << "r,U,V,dU,dV\n";
  for (std::size_t i = 0; i < gs.grid().size(); ++i)
    out << num(gs.grid()[i]) << ',' << num(gs.U()[i]) << ',' << num(gs.V()[i]) << ',' << num(gs.dU()[i]) << ','
        << num(gs.dV()[i]) << '\n';
}

GroundState read_ground_state(std::istream& in) {
  std::string line;
  require(std::getline(in, line) && line == kMagic, ErrorCode::CacheFormat, "missing ground state header");
  std::map<std::string, std::string> header;
  while (std::getline(in, line) && line != "r,U,V,dU,dV") {
    auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::CacheFormat, "bad header line: " + line);
    header[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto field = [&](const std::string& key) {
    auto it = header.find(key);
    require(it != header.end(), ErrorCode::CacheFormat, "missing header field '" + key + "'");
    return it->second;
  };
  require(std::stoi(field("format_version")) == kGroundStateFormatVersion, ErrorCode::CacheFormat,
          "unsupported format version " + field("format_version"));
  const int N = std::stoi(field("N"));
  auto exponent = [&](const std::string& key) {
    const std::string text = field(key);
    return field(key + "_exact") == "1" ? Exponent::parse(text) : Exponent::from_double(to_double(key, text));
  };
  const HyperbolaPoint hp = make_hyperbola_point(exponent("p"), exponent("q"), N);

  Normalization norm{to_double("V_at_zero", field("V_at_zero")), to_double("U_at_zero", field("U_at_zero")),
                     to_double("gauge_delta", field("gauge_delta"))};
  SolverDiagnostics diag;
  diag.r_max = to_double("r_max", field("r_max"));
  diag.rtol = to_double("rtol", field("rtol"));
  diag.a_error = to_double("a_error", field("a_error"));
  diag.match_residual = to_double("match_residual", field("match_residual"));
  diag.junction_radius = to_double("junction_radius", field("junction_radius"));
  diag.bisection_iterations = std::stoi(field("bisection_iterations"));
  diag.newton_iterations = std::stoi(field("newton_iterations"));
  const double band = to_double("decay_band", field("decay_band"));
  const auto rows = static_cast<std::size_t>(std::stoull(field("rows")));

  std::vector<double> r, U, V, dU, dV;
  for (auto* v : {&r, &U, &V, &dU, &dV}) v->reserve(rows);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(row, cell, ',')) values.push_back(to_double("row", cell));
    require(values.size() == 5, ErrorCode::CacheFormat, "row with " + std::to_string(values.size()) + " columns");
    r.push_back(values[0]);
    U.push_back(values[1]);
    V.push_back(values[2]);
    dU.push_back(values[3]);
    dV.push_back(values[4]);
  }
  require(r.size() == rows, ErrorCode::CacheFormat, "row count does not match header");
  return GroundState::from_samples(hp, std::move(r), std::move(U), std::move(V), std::move(dU), std::move(dV), norm,
                                   diag, band);
}

void save_ground_state(const std::filesystem::path& path, const GroundState& gs) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  // Write to a sibling file first so a crash never leaves a torn cache entry.
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    require(static_cast<bool>(out), ErrorCode::CacheFormat, "cannot write " + tmp.string());
    write_ground_state(out, gs);
  }
  std::filesystem::rename(tmp, path);
}

GroundState load_ground_state(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::CacheFormat, "cannot read " + path.string());
  return read_ground_state(in);
}

std::string cache_file_name(const HyperbolaPoint& hp, const SolverOptions& opts) {
  std::string p = hp.p.str();
  for (auto& c : p)
    if (c == '/') c = '_';
  std::ostringstream s;
  s << "gs_p" << p << "_N" << hp.N << "_tol" << std::setprecision(6) << opts.rtol << "_rmax" << opts.r_max
    << ".csv";
  return s.str();
}

GroundState load_or_solve(const std::filesystem::path& cache_dir, const HyperbolaPoint& hp,
                          const SolverOptions& opts, bool* hit) {
  const auto path = cache_dir / cache_file_name(hp, opts);
  if (std::filesystem::exists(path)) {
    if (hit) *hit = true;
    return load_ground_state(path);
  }
  if (hit) *hit = false;
  GroundState gs = solve_ground_state(hp, opts);
  save_ground_state(path, gs);
  return gs;
}

}  // namespace lanemden
