#include "clme/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "clme/analysis.hpp"
#include "clme/exact_propagator.hpp"
#include "clme/grid_io.hpp"
#include "clme/states.hpp"
#include "clme/transforms.hpp"

namespace clme {

using nlohmann::json;

const char* to_string(Output o) {
  switch (o) {
    case Output::Density: return "density";
    case Output::Char: return "char";
    case Output::Wigner: return "wigner";
    case Output::Spectrum: return "spectrum";
    case Output::Observables: return "observables";
    case Output::Audit: return "audit";
    case Output::OracleCompare: return "oracle-compare";
  }
  return "?";
}

bool Scenario::wants(Output o) const {
  return std::find(pipeline.begin(), pipeline.end(), o) != pipeline.end();
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidParameter:
    case ErrorCode::CriticalDamping:
    case ErrorCode::FreeParticle:
      return 2;
    case ErrorCode::IoError:
      return 4;
    default:
      return 3;
  }
}

namespace {

[[noreturn]] void config_error(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::ConfigError, "key '" + key + "': " + what);
}

// Typed access into a JSON object that reports failures by dotted key path.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) config_error(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  std::string key(const char* k) const { return path_.empty() ? k : path_ + "." + k; }

  Node object(const char* k) const {
    if (!has(k)) config_error(key(k), "missing");
    return Node(j_.at(k), key(k));
  }

  const json& raw(const char* k) const {
    if (!has(k)) config_error(key(k), "missing");
    return j_.at(k);
  }

  double number(const char* k) const {
    const json& v = raw(k);
    if (!v.is_number()) config_error(key(k), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) config_error(key(k), "must be finite");
    return d;
  }

  double number(const char* k, double fallback) const { return has(k) ? number(k) : fallback; }

  long long integer(const char* k) const {
    const json& v = raw(k);
    if (!v.is_number_integer()) config_error(key(k), "expected an integer");
    return v.get<long long>();
  }

  long long integer(const char* k, long long fallback) const {
    return has(k) ? integer(k) : fallback;
  }

  std::string string(const char* k) const {
    const json& v = raw(k);
    if (!v.is_string()) config_error(key(k), "expected a string");
    return v.get<std::string>();
  }

  bool boolean(const char* k, bool fallback) const {
    if (!has(k)) return fallback;
    const json& v = raw(k);
    if (!v.is_boolean()) config_error(key(k), "expected true or false");
    return v.get<bool>();
  }

  void reject_unknown(std::initializer_list<const char*> allowed) const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      const bool known = std::any_of(allowed.begin(), allowed.end(),
                                     [&](const char* a) { return it.key() == a; });
      if (!known) config_error(key(it.key().c_str()), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
};

// Re-tags parameter errors raised while validating a sub-tree so the message
// names the config key, keeping the original code (CriticalDamping etc.).
template <class F>
auto validated(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    throw Error(e.code(), "key '" + key + "': " + e.what());
  }
}

StateSpec parse_state(const Node& n) {
  const std::string type = n.string("type");
  StateSpec spec;
  if (type == "gaussian") {
    n.reject_unknown({"type", "x0", "p0", "sigma"});
    spec = GaussianSpec{n.number("x0", 0.0), n.number("p0", 0.0), n.number("sigma")};
  } else if (type == "cat") {
    n.reject_unknown({"type", "x0", "separation", "p0", "sigma", "phase"});
    spec = CatSpec{n.number("x0", 0.0), n.number("separation"), n.number("p0", 0.0),
                   n.number("sigma"), n.number("phase", 0.0)};
  } else if (type == "fock") {
    n.reject_unknown({"type", "n"});
    spec = FockSpec{static_cast<int>(n.integer("n"))};
  } else if (type == "thermal") {
    n.reject_unknown({"type", "temperature"});
    spec = ThermalSpec{n.number("temperature")};
  } else {
    config_error(n.key("type"), "unknown state type '" + type + "'");
  }
  validated(n.key("type"), [&] {
    validate(spec);
    return 0;
  });
  return spec;
}

RawParams parse_params(const Node& n, double boltzmann) {
  n.reject_unknown({"mass", "gamma", "omega", "hbar", "diffusion"});
  RawParams raw;
  raw.mass = n.number("mass", 1.0);
  raw.gamma = n.number("gamma");
  raw.omega = n.number("omega");
  raw.hbar = n.number("hbar", 1.0);
  const Node d = n.object("diffusion");
  const std::string mode = d.string("mode");
  if (mode == "explicit") {
    d.reject_unknown({"mode", "D"});
    raw.diffusion = ExplicitDiffusion{d.number("D")};
  } else if (mode == "high_temperature") {
    d.reject_unknown({"mode", "temperature"});
    raw.diffusion = HighTemperature{boltzmann * d.number("temperature")};
  } else if (mode == "oscillator_bath") {
    d.reject_unknown({"mode", "temperature"});
    raw.diffusion = OscillatorBath{boltzmann * d.number("temperature")};
  } else {
    config_error(d.key("mode"), "unknown diffusion mode '" + mode + "'");
  }
  return raw;
}

std::vector<double> parse_times(const Node& root) {
  const json& t = root.raw("times");
  std::vector<double> times;
  if (t.is_array()) {
    for (const auto& v : t) {
      if (!v.is_number()) config_error("times", "entries must be numbers");
      times.push_back(v.get<double>());
    }
  } else if (t.is_object()) {
    const Node n(t, "times");
    n.reject_unknown({"start", "stop", "count"});
    const double start = n.number("start");
    const double stop = n.number("stop");
    const long long count = n.integer("count");
    if (count < 1) config_error("times.count", "must be >= 1");
    for (long long k = 0; k < count; ++k)
      times.push_back(count == 1 ? start
                                 : start + (stop - start) * static_cast<double>(k) /
                                               static_cast<double>(count - 1));
  } else {
    config_error("times", "expected a list or {start, stop, count}");
  }
  if (times.empty()) config_error("times", "at least one time is required");
  for (double v : times)
    if (!(v >= 0.0) || !std::isfinite(v)) config_error("times", "times must be finite and >= 0");
  if (!std::is_sorted(times.begin(), times.end())) config_error("times", "times must be sorted");
  return times;
}

Axis parse_axis(const Node& n, const char* size_key, const char* half_key, std::size_t size,
                double half) {
  const long long s = n.integer(size_key, static_cast<long long>(size));
  if (s < 4 || !is_power_of_two(static_cast<std::size_t>(s)))
    config_error(n.key(size_key), "must be a power of two >= 4");
  const double h = n.number(half_key, half);
  if (!(h > 0.0)) config_error(n.key(half_key), "must be > 0");
  return Axis(static_cast<std::size_t>(s), h);
}

Output parse_output(const std::string& s) {
  for (Output o : {Output::Density, Output::Char, Output::Wigner, Output::Spectrum,
                   Output::Observables, Output::Audit, Output::OracleCompare})
    if (s == to_string(o)) return o;
  config_error("pipeline", "unknown entry '" + s + "'");
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("malformed JSON: ") + e.what());
  }
  const Node root(doc, "");
  root.reject_unknown({"params", "units", "state", "times", "grid", "pipeline", "spectrum",
                       "audit", "oracle", "output"});

  double boltzmann = 1.0;
  if (root.has("units")) {
    const Node u = root.object("units");
    u.reject_unknown({"boltzmann"});
    boltzmann = u.number("boltzmann", 1.0);
    if (!(boltzmann > 0.0)) config_error("units.boltzmann", "must be > 0");
  }

  Scenario sc;
  sc.raw_params = parse_params(root.object("params"), boltzmann);
  sc.params = validated("params", [&] { return make_params(sc.raw_params); });
  sc.state = parse_state(root.object("state"));
  sc.times = parse_times(root);

  if (root.has("grid")) {
    const Node g = root.object("grid");
    g.reject_unknown({"n_R", "n_r", "R_max", "r_max"});
    sc.R = parse_axis(g, "n_R", "R_max", 256, 8.0);
    sc.r = parse_axis(g, "n_r", "r_max", 256, 8.0);
  } else {
    sc.R = Axis(256, 8.0);
    sc.r = Axis(256, 8.0);
  }

  const json& pipe = root.raw("pipeline");
  if (!pipe.is_array() || pipe.empty()) config_error("pipeline", "expected a non-empty list");
  for (const auto& e : pipe) {
    if (!e.is_string()) config_error("pipeline", "entries must be strings");
    sc.pipeline.push_back(parse_output(e.get<std::string>()));
  }

  if (root.has("spectrum")) {
    const Node s = root.object("spectrum");
    s.reject_unknown({"n_max"});
    sc.basis_cutoff = static_cast<int>(s.integer("n_max", 32));
    if (sc.basis_cutoff < 0 || sc.basis_cutoff > 60)
      config_error("spectrum.n_max", "must be in [0, 60]");
  }

  if (root.has("audit")) {
    const Node a = root.object("audit");
    a.reject_unknown({"reference", "samples", "seed"});
    if (a.has("reference")) sc.audit_reference = parse_state(a.object("reference"));
    const long long n = a.integer("samples", 1000);
    if (n < 1) config_error("audit.samples", "must be >= 1");
    sc.audit_samples = static_cast<std::size_t>(n);
    sc.audit_seed = static_cast<std::uint64_t>(a.integer("seed", 20240611));
  }

  if (root.has("oracle")) {
    const Node o = root.object("oracle");
    o.reject_unknown({"dt", "stencil_order", "n_K", "K_max", "n_r", "r_max", "tolerance"});
    sc.oracle.dt = o.number("dt", sc.oracle.dt);
    if (!(sc.oracle.dt > 0.0)) config_error("oracle.dt", "must be > 0");
    sc.oracle.stencil_order = static_cast<int>(o.integer("stencil_order", 4));
    if (sc.oracle.stencil_order != 2 && sc.oracle.stencil_order != 4)
      config_error("oracle.stencil_order", "must be 2 or 4");
    if (o.has("n_K") || o.has("K_max")) sc.oracle_K = parse_axis(o, "n_K", "K_max", 256, 8.0);
    if (o.has("n_r") || o.has("r_max")) sc.oracle_r = parse_axis(o, "n_r", "r_max", 256, 8.0);
    sc.oracle_tolerance = o.number("tolerance", 1e-4);
  }

  if (root.has("output")) {
    const Node o = root.object("output");
    o.reject_unknown({"dir", "grids"});
    if (o.has("dir")) sc.output_dir = o.string("dir");
    sc.write_grids = o.boolean("grids", true);
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kTraceTolerance = 1e-8;

json state_json(const StateSpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GaussianSpec>)
          return {{"type", "gaussian"}, {"x0", s.x0}, {"p0", s.p0}, {"sigma", s.sigma}};
        else if constexpr (std::is_same_v<T, CatSpec>)
          return {{"type", "cat"},        {"x0", s.x0},       {"separation", s.separation},
                  {"p0", s.p0},           {"sigma", s.sigma}, {"phase", s.phase}};
        else if constexpr (std::is_same_v<T, FockSpec>)
          return {{"type", "fock"}, {"n", s.n}};
        else
          return {{"type", "thermal"}, {"temperature", s.kT}};
      },
      spec);
}

std::string time_tag(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "t%04zu", index);
  return buf;
}

class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir_.string() + ": " + ec.message());
  }

  void bytes(const std::string& name, const std::vector<unsigned char>& data) {
    const std::string sum = write_file(dir_ / name, data);
    manifest_.push_back({{"file", name}, {"bytes", data.size()}, {"sha256", sum}});
    names_.push_back(name);
  }

  void text(const std::string& name, const std::string& body) {
    bytes(name, std::vector<unsigned char>(body.begin(), body.end()));
  }

  const json& manifest_entries() const { return manifest_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  json manifest_ = json::array();
  std::vector<std::string> names_;
};

}  // namespace

RunResult run_scenario(const Scenario& sc, const RunOptions& options, std::ostream& log) {
  const ModelParams& params = sc.params;
  const auto state = realize(sc.state, params);
  check_fits(state, sc.R, sc.r);

  ArtifactWriter out(options.output_dir.value_or(sc.output_dir));
  RunResult result;

  const Axis K = sc.R.reciprocal();
  const bool oscillator = !params.free_particle();
  const bool need_density = sc.wants(Output::Density) || sc.wants(Output::Wigner) ||
                            sc.wants(Output::Spectrum) || sc.wants(Output::Observables);

  std::ostringstream observables;
  observables << "t,trace,purity,S,dx,dp,dxdp,offdiag_ratio\n";
  std::ostringstream spectrum_csv;
  spectrum_csv << "t,n,population,eigenvalue,analytic\n";
  std::vector<double> analytic;
  if (oscillator && params.diffusion() >= params.pure_state_diffusion())
    analytic = eigen_spectrum_analytic(params, sc.basis_cutoff);

  for (std::size_t k = 0; k < sc.times.size(); ++k) {
    const double t = sc.times[k];
    const std::string tag = time_tag(k);
    const CharGrid chi = propagate(state.char_function, t, params, K, sc.r);

    const double trace_char =
        std::sqrt(2.0 * std::numbers::pi) * chi(K.zero_index(), sc.r.zero_index()).real();
    if (std::abs(trace_char - 1.0) > kTraceTolerance) {
      std::ostringstream os;
      os << "trace drift " << std::abs(trace_char - 1.0) << " at t = " << t;
      throw Error(ErrorCode::ContractViolation, os.str());
    }
    if (sc.wants(Output::Char) && sc.write_grids)
      out.bytes("char_" + tag + ".clgrid", encode_grid(to_dump(chi)));
    if (!need_density) continue;

    const PositionGrid rho = to_position(chi);
    if (sc.wants(Output::Density) && sc.write_grids)
      out.bytes("density_" + tag + ".clgrid", encode_grid(to_dump(rho)));

    WignerGrid w;
    if (sc.wants(Output::Wigner) || sc.wants(Output::Observables)) w = wigner(rho, params.hbar());
    if (sc.wants(Output::Wigner) && sc.write_grids)
      out.bytes("wigner_" + tag + ".clgrid", encode_grid(to_dump(w)));

    std::optional<Spectrum> spec;
    if (oscillator && (sc.wants(Output::Spectrum) || sc.wants(Output::Observables)))
      spec = project_energy_basis(rho, params, sc.basis_cutoff);

    if (sc.wants(Output::Spectrum)) {
      if (!spec) throw Error(ErrorCode::ConfigError, "key 'pipeline': spectrum needs omega > 0");
      const auto pops = spec->diagonal();
      for (std::size_t n = 0; n < pops.size(); ++n)
        spectrum_csv << format_double(t) << ',' << n << ',' << format_double(pops[n]) << ','
                     << format_double(spec->eigenvalues[n]) << ','
                     << (analytic.empty() ? "nan" : format_double(analytic[n])) << '\n';
    }

    if (sc.wants(Output::Observables)) {
      const double tr = trace(rho);
      const double pur = purity(rho);
      const auto u = uncertainties(w);
      observables << format_double(t) << ',' << format_double(tr) << ',' << format_double(pur)
                  << ',' << format_double(tr - pur) << ',' << format_double(u.dx) << ','
                  << format_double(u.dp) << ',' << format_double(u.product()) << ','
                  << format_double(spec ? spec->offdiag_ratio : std::nan("")) << '\n';
    }
    log << "t = " << format_double(t) << " done\n";
  }

  if (sc.wants(Output::Observables)) out.text("observables.csv", observables.str());
  if (sc.wants(Output::Spectrum)) out.text("spectrum.csv", spectrum_csv.str());

  if (sc.wants(Output::Audit) || options.audit) {
    const auto reference = realize(sc.audit_reference, params);
    const double t_max = std::max(sc.times.back(), 1e-3);
    const auto samples = make_audit_samples(sc.audit_samples, 0.5 * K.half_width(),
                                            0.5 * sc.r.half_width(), t_max, sc.audit_seed);
    const auto rep = factorization_audit(state.char_function, reference.char_function, params,
                                         samples);
    std::ostringstream csv;
    csv << "samples,accepted,rejected,max_discrepancy\n"
        << samples.size() << ',' << rep.accepted << ',' << rep.rejected << ','
        << format_double(rep.max_discrepancy) << '\n';
    out.text("audit.csv", csv.str());
    result.audit_discrepancy = rep.max_discrepancy;
    log << "factorization audit: max ratio discrepancy " << format_double(rep.max_discrepancy)
        << " over " << rep.accepted << " samples (" << rep.rejected << " rejected)\n";
  }

  if (sc.wants(Output::OracleCompare) || options.check) {
    const Axis oK = sc.oracle_K.value_or(K);
    const Axis orr = sc.oracle_r.value_or(sc.r);
    const CharGrid initial = render_char(state, oK, orr);
    OracleDiagnostics diag;
    const auto evolved_grids = evolve(initial, sc.times, sc.oracle, params, &diag);
    std::ostringstream csv;
    csv << "t,linf_gap\n";
    double worst = 0.0;
    for (std::size_t k = 0; k < sc.times.size(); ++k) {
      const CharGrid exact = propagate(state.char_function, sc.times[k], params, oK, orr);
      double gap = 0.0;
      for (std::size_t i = 0; i < exact.size(); ++i)
        gap = std::max(gap, std::abs(exact.values()[i] - evolved_grids[k].values()[i]));
      worst = std::max(worst, gap);
      csv << format_double(sc.times[k]) << ',' << format_double(gap) << '\n';
    }
    out.text("oracle.csv", csv.str());
    result.oracle_gap = worst;
    log << "oracle check: max L-inf gap " << format_double(worst) << " (tolerance "
        << format_double(sc.oracle_tolerance) << ", " << diag.steps << " RK4 steps)\n";
  }

  json manifest;
  manifest["tool"] = "clgrid";
  manifest["version"] = kToolVersion;
  manifest["params"] = {{"mass", params.mass()},   {"gamma", params.gamma()},
                        {"omega", params.omega()}, {"hbar", params.hbar()},
                        {"D", params.diffusion()}};
  manifest["state"] = state_json(sc.state);
  manifest["times"] = sc.times;
  manifest["grid"] = {{"n_R", sc.R.size()},
                      {"R_max", sc.R.half_width()},
                      {"n_r", sc.r.size()},
                      {"r_max", sc.r.half_width()},
                      {"n_K", K.size()},
                      {"K_max", K.half_width()}};
  json pipe = json::array();
  for (Output o : sc.pipeline) pipe.push_back(to_string(o));
  manifest["pipeline"] = pipe;
  if (result.oracle_gap) manifest["oracle_gap"] = *result.oracle_gap;
  if (result.audit_discrepancy) manifest["audit_discrepancy"] = *result.audit_discrepancy;
  manifest["outputs"] = out.manifest_entries();
  write_file(out.dir() / "manifest.json", manifest.dump(2) + "\n");

  result.files = out.names();
  result.files.push_back("manifest.json");

  if (result.oracle_gap && *result.oracle_gap > sc.oracle_tolerance) {
    std::ostringstream os;
    os << "oracle gap " << *result.oracle_gap << " exceeds " << sc.oracle_tolerance;
    throw Error(ErrorCode::ContractViolation, os.str());
  }
  return result;
}

}  // namespace clme
