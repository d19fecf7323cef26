#include "weyllab/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "weyllab/error.hpp"
#include "weyllab/heat.hpp"
#include "weyllab/io.hpp"
#include "weyllab/tauberian.hpp"

namespace weyllab {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::string command_name(Command command) {
  switch (command) {
    case Command::spectrum: return "spectrum";
    case Command::heat: return "heat";
    case Command::tauberian: return "tauberian";
    case Command::criterion: return "criterion";
    case Command::weyl: return "weyl";
  }
  return "weyl";
}

Command command_from_name(const std::string& name) {
  if (name == "spectrum") return Command::spectrum;
  if (name == "heat") return Command::heat;
  if (name == "tauberian") return Command::tauberian;
  if (name == "criterion") return Command::criterion;
  if (name == "weyl") return Command::weyl;
  throw Error(ErrorCode::config, "unknown command '" + name + "'");
}

namespace {

void check_grid(const std::optional<GridSpec>& g, const char* name) {
  if (!g) return;
  const std::string field = std::string("grids.") + name;
  if (g->count < 2) throw Error(ErrorCode::config, field + ".count must be >= 2");
  if (!(g->start < g->stop)) throw Error(ErrorCode::config, field + ": start must be below stop");
  if (g->scale == GridScale::log && !(g->start > 0.0)) throw Error(ErrorCode::config, field + ": log grid needs start > 0");
  if (!std::isfinite(g->start) || !std::isfinite(g->stop)) throw Error(ErrorCode::config, field + " must be finite");
}

// Sweeps toward 0 (s, t) run from large to small.
std::vector<double> descending(const GridSpec& g) {
  auto v = g.values();
  std::reverse(v.begin(), v.end());
  return v;
}

}  // namespace

void ExperimentConfig::validate() const {
  weyllab::validate(space);
  check_grid(s_grid, "s");
  check_grid(t_grid, "t");
  check_grid(lambda_grid, "lambda");
  if (!(tolerances.criterion > 0.0) || !(tolerances.consistency > 0.0) || !(tolerances.audit > 0.0) ||
      !(tolerances.heat > 0.0)) {
    throw Error(ErrorCode::config, "tolerances must be positive");
  }
  if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) throw Error(ErrorCode::config, "lambda_max must be positive");
  if (!(gamma >= 0.0)) throw Error(ErrorCode::config, "gamma must be >= 0");
  if (output.empty()) throw Error(ErrorCode::config, "output directory must be named");
}

namespace {

ojson grid_json(const std::optional<GridSpec>& g) {
  if (!g) return nullptr;
  ojson j;
  j["start"] = g->start;
  j["stop"] = g->stop;
  j["count"] = g->count;
  j["scale"] = g->scale == GridScale::log ? "log" : "linear";
  return j;
}

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::config, "field '" + field + "': " + what);
}

double get_number(const nlohmann::json& j, const std::string& field) {
  if (!j.is_number()) field_error(field, "expected a number");
  return j.get<double>();
}

long long get_integer(const nlohmann::json& j, const std::string& field) {
  if (!j.is_number_integer()) field_error(field, "expected an integer");
  return j.get<long long>();
}

bool get_bool(const nlohmann::json& j, const std::string& field) {
  if (!j.is_boolean()) field_error(field, "expected true or false");
  return j.get<bool>();
}

std::string get_string(const nlohmann::json& j, const std::string& field) {
  if (!j.is_string()) field_error(field, "expected a string");
  return j.get<std::string>();
}

std::optional<GridSpec> grid_from_json(const nlohmann::json& j, const std::string& field) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_object()) field_error(field, "expected {start, stop, count, scale}");
  GridSpec g;
  for (const auto& [key, value] : j.items()) {
    const std::string f = field + "." + key;
    if (key == "start") g.start = get_number(value, f);
    else if (key == "stop") g.stop = get_number(value, f);
    else if (key == "count") g.count = static_cast<int>(get_integer(value, f));
    else if (key == "scale") {
      const std::string s = get_string(value, f);
      if (s == "log") g.scale = GridScale::log;
      else if (s == "linear") g.scale = GridScale::linear;
      else field_error(f, "expected 'linear' or 'log'");
    } else {
      field_error(f, "unknown field");
    }
  }
  return g;
}

}  // namespace

ojson config_to_json(const ExperimentConfig& c) {
  ojson j;
  j["command"] = command_name(c.command);
  j["space"] = space_to_json(c.space);
  j["method"] = c.method ? ojson(method_name(*c.method)) : ojson(nullptr);
  j["lambda_max"] = c.lambda_max;
  j["fd_nodes"] = c.fd_nodes;
  j["grids"]["s"] = grid_json(c.s_grid);
  j["grids"]["t"] = grid_json(c.t_grid);
  j["grids"]["lambda"] = grid_json(c.lambda_grid);
  j["tolerances"]["criterion"] = c.tolerances.criterion;
  j["tolerances"]["consistency"] = c.tolerances.consistency;
  j["tolerances"]["audit"] = c.tolerances.audit;
  j["tolerances"]["heat"] = c.tolerances.heat;
  j["output"] = c.output;
  j["threads"] = c.threads;
  j["emit"]["spectrum"] = c.emit_spectrum;
  j["emit"]["curves"] = c.emit_curves;
  j["point"] = c.point ? ojson(*c.point) : ojson(nullptr);
  j["modes"] = c.modes;
  j["nodes"] = c.nodes;
  j["atoms"] = c.atoms;
  j["family"] = c.family;
  j["gamma"] = c.gamma;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::config, "configuration must be a JSON object");
  ExperimentConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "command") {
      c.command = command_from_name(get_string(value, key));
    } else if (key == "space") {
      c.space = space_from_json(value);
    } else if (key == "method") {
      if (value.is_null()) c.method.reset();
      else c.method = method_from_name(get_string(value, key));
    } else if (key == "lambda_max") {
      c.lambda_max = get_number(value, key);
    } else if (key == "fd_nodes") {
      c.fd_nodes = static_cast<int>(get_integer(value, key));
    } else if (key == "grids") {
      if (!value.is_object()) field_error(key, "expected an object");
      for (const auto& [g, spec] : value.items()) {
        if (g == "s") c.s_grid = grid_from_json(spec, "grids.s");
        else if (g == "t") c.t_grid = grid_from_json(spec, "grids.t");
        else if (g == "lambda") c.lambda_grid = grid_from_json(spec, "grids.lambda");
        else field_error("grids." + g, "unknown grid");
      }
    } else if (key == "tolerances") {
      if (!value.is_object()) field_error(key, "expected an object");
      for (const auto& [t, v] : value.items()) {
        const std::string f = "tolerances." + t;
        if (t == "criterion") c.tolerances.criterion = get_number(v, f);
        else if (t == "consistency") c.tolerances.consistency = get_number(v, f);
        else if (t == "audit") c.tolerances.audit = get_number(v, f);
        else if (t == "heat") c.tolerances.heat = get_number(v, f);
        else field_error(f, "unknown tolerance");
      }
    } else if (key == "output") {
      c.output = get_string(value, key);
    } else if (key == "threads") {
      const long long n = get_integer(value, key);
      if (n < 0) field_error(key, "must be >= 0");
      c.threads = static_cast<unsigned>(n);
    } else if (key == "emit") {
      if (!value.is_object()) field_error(key, "expected an object");
      for (const auto& [e, v] : value.items()) {
        if (e == "spectrum") c.emit_spectrum = get_bool(v, "emit.spectrum");
        else if (e == "curves") c.emit_curves = get_bool(v, "emit.curves");
        else field_error("emit." + e, "unknown flag");
      }
    } else if (key == "point") {
      if (value.is_null()) c.point.reset();
      else c.point = get_number(value, key);
    } else if (key == "modes") {
      const long long n = get_integer(value, key);
      if (n < 1) field_error(key, "must be >= 1");
      c.modes = static_cast<std::size_t>(n);
    } else if (key == "nodes") {
      const long long n = get_integer(value, key);
      if (n < 0) field_error(key, "must be >= 0");
      c.nodes = static_cast<std::size_t>(n);
    } else if (key == "atoms") {
      c.atoms = get_string(value, key);
    } else if (key == "family") {
      c.family = get_string(value, key);
    } else if (key == "gamma") {
      c.gamma = get_number(value, key);
    } else {
      field_error(key, "unknown field");
    }
  }
  return c;
}

ExperimentConfig config_from_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorCode::config,
                "line " + std::to_string(line) + ", column " + std::to_string(column) + ": invalid JSON");
  }
  return config_from_json(j);
}

GridSpec parse_grid_spec(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() < 3 || parts.size() > 4) {
    throw Error(ErrorCode::config, "grid '" + text + "' must read start:stop:count[:linear|log]");
  }
  auto number = [&](const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw Error(ErrorCode::config, "grid '" + text + "': bad number '" + s + "'");
    return v;
  };
  GridSpec g;
  g.start = number(parts[0]);
  g.stop = number(parts[1]);
  const double count = number(parts[2]);
  if (count != std::floor(count)) throw Error(ErrorCode::config, "grid '" + text + "': count must be an integer");
  g.count = static_cast<int>(count);
  if (parts.size() == 4) {
    if (parts[3] == "log") g.scale = GridScale::log;
    else if (parts[3] == "linear") g.scale = GridScale::linear;
    else throw Error(ErrorCode::config, "grid '" + text + "': scale must be linear or log");
  }
  return g;
}

namespace {

struct Writer {
  fs::path dir;
  RunResult* result;
  void write(const std::string& name, const std::string& contents) const {
    write_text_file(dir / name, contents);
    result->files.push_back(dir / name);
  }
};

SpectrumRequest spectrum_request(const ExperimentConfig& c) {
  SpectrumRequest r;
  r.method = c.method.value_or(default_method(c.space));
  r.lambda_max = c.lambda_max;
  r.fd_nodes = c.fd_nodes;
  r.threads = resolve_threads(c.threads);
  return r;
}

ojson trend_json(const Trend& t) {
  ojson j;
  j["last"] = t.last;
  j["log_slope"] = t.log_slope;
  j["tail_min"] = t.tail_min;
  j["tail_max"] = t.tail_max;
  return j;
}

int run_spectrum(const ExperimentConfig& c, const Writer& out, std::string& summary) {
  const SpectrumRequest request = spectrum_request(c);
  const Spectrum spectrum = build_spectrum(c.space, request);
  ojson j;
  j["command"] = "spectrum";
  j["space"] = space_to_json(c.space);
  j["method"] = method_name(request.method);
  j["lambda_max"] = c.lambda_max;
  j["levels"] = spectrum.entries().size();
  j["total_multiplicity"] = spectrum.total_multiplicity();
  j["complete_up_to"] = spectrum.complete_up_to();
  out.write("report.json", dump_json(j));
  if (c.emit_spectrum) out.write("spectrum.csv", to_csv(spectrum));
  summary = std::to_string(spectrum.total_multiplicity()) + " eigenvalues <= " + format_double(c.lambda_max);
  return 0;
}

int run_heat(const ExperimentConfig& c, const Writer& out, std::string& summary) {
  ResolutionOptions options;
  options.nodes = c.nodes;
  options.modes = c.modes;
  options.threads = resolve_threads(c.threads);
  const bool circle = std::holds_alternative<Circle>(c.space);
  const double x = c.point.value_or(circle ? 0.0 : 0.5 * kPi);
  const auto t = c.t_grid ? descending(*c.t_grid) : make_grid(1e-2, 1e-4, 5, GridScale::log);

  const ShortTimeResult st = short_time_diag(c.space, Point{x}, t, options);
  const SpectralResolution res = make_resolution(c.space, options);
  const double residual = trace_identity_residual(res, t.front(), res.mode_count());
  const double ck = chapman_kolmogorov_residual(res, st.node, t.front(), res.mode_count());
  const RatioScan scan = gaussian_ratio_scan(c.space, res, std::vector<double>{x}, t);

  ojson j;
  j["command"] = "heat";
  j["space"] = space_to_json(c.space);
  j["resolution"] = res.source;
  j["modes"] = res.mode_count();
  j["point"] = x;
  j["node"] = st.node;
  j["snap_distance"] = st.snap_distance;
  j["short_time"]["t"] = st.t;
  j["short_time"]["values"] = st.values;
  j["short_time"]["extrapolated"] = st.extrapolated;
  j["short_time"]["target"] = st.target;
  j["short_time"]["monotone"] = st.monotone;
  j["short_time"]["trend"] = trend_json(st.trend);
  j["trace_identity_residual"] = residual;
  j["chapman_kolmogorov_residual"] = ck;
  j["ratio_scan"]["min"] = scan.min_ratio;
  j["ratio_scan"]["max"] = scan.max_ratio;
  const bool ok = std::fabs(st.extrapolated - st.target) <= c.tolerances.heat;
  j["within_tolerance"] = ok;
  out.write("report.json", dump_json(j));
  if (c.emit_curves) out.write("trace.csv", short_time_csv(c.space, Point{x}, st));
  summary = "short-time limit " + format_double(st.extrapolated) + " (target " + format_double(st.target) + ")";
  return ok ? 0 : 2;
}

AtomicMeasure load_measure(const ExperimentConfig& c) {
  if (!c.atoms.empty()) return measure_from_csv(read_text_file(c.atoms));
  if (c.family == "squares") return squares_measure(10001);
  if (c.family == "linear") return linear_measure(1000);
  if (c.family == "lacunary") return lacunary_measure(40);
  if (c.family == "dirac") return dirac_measure();
  if (c.family.empty()) throw Error(ErrorCode::config, "tauberian needs --atoms <file.csv> or --family");
  throw Error(ErrorCode::config, "unknown family '" + c.family + "' (squares|linear|lacunary|dirac)");
}

int run_tauberian(const ExperimentConfig& c, const Writer& out, std::string& summary) {
  const AtomicMeasure nu = load_measure(c);
  AuditGrids grids = default_audit_grids(nu);
  if (c.t_grid) grids.t = descending(*c.t_grid);
  if (c.lambda_grid) grids.lambda = c.lambda_grid->values();
  const AuditReport audit = one_sided_audit(nu, c.gamma, grids.t, grids.lambda, c.tolerances.audit);
  const KaramataCheck karamata = karamata_crosscheck(nu, c.gamma, grids.t, grids.lambda);
  double cavalieri = 0.0;
  for (double t : grids.t) {
    const double direct = laplace_direct(nu, t);
    cavalieri = std::max(cavalieri, std::fabs(laplace_cavalieri(nu, t, 1e-10) - direct) / (1.0 + direct));
  }
  ojson j;
  j["command"] = "tauberian";
  j["atoms"] = nu.atoms.size();
  j["tail"] = nu.tail ? ojson{{"coef", nu.tail->coef}, {"exponent", nu.tail->exponent}} : ojson(nullptr);
  j["audit"] = audit_to_json(audit);
  j["karamata"] = karamata_to_json(karamata);
  j["cavalieri_residual"] = cavalieri;
  out.write("report.json", dump_json(j));
  summary = std::string("audit ") + (audit.all_hold() ? "holds" : "FAILS");
  return audit.all_hold() ? 0 : 2;
}

int run_criterion(const ExperimentConfig& c, const Writer& out, std::string& summary) {
  const int k = regular_dimension(c.space);
  const auto s = c.s_grid ? descending(*c.s_grid) : make_grid(1e-1, 1e-3, 5, GridScale::log);
  const CriterionVerdict v = criterion_verdict(c.space, k, s, c.tolerances.criterion);
  ojson j;
  j["command"] = "criterion";
  j["space"] = space_to_json(c.space);
  j["k"] = k;
  j["limit_estimate"] = v.limit_estimate;
  j["pointwise_integral"] = v.pointwise_integral;
  j["dominating_bound"] = v.dominating_bound;
  j["finite"] = v.finite;
  j["equal"] = v.equal;
  j["trend"] = trend_json(v.trend);
  out.write("report.json", dump_json(j));
  if (c.emit_curves) out.write("criterion.csv", curve_csv(Curve{v.s, v.values, v.trend}, "s", "integral"));
  summary = "criterion limit " + format_double(v.limit_estimate) + " vs " + format_double(v.pointwise_integral);
  return v.finite && v.equal ? 0 : 2;
}

int run_weyl(const ExperimentConfig& c, const Writer& out, std::string& summary) {
  WeylConfig w;
  w.spectrum = spectrum_request(c);
  if (c.s_grid) w.s_grid = c.s_grid;
  w.t_grid = c.t_grid;
  w.lambda_grid = c.lambda_grid;
  w.consistency_tol = c.tolerances.consistency;
  w.criterion_tol = c.tolerances.criterion;
  // Sweeps toward 0 run from large to small.
  if (w.s_grid) w.s_grid = GridSpec{w.s_grid->stop, w.s_grid->start, w.s_grid->count, w.s_grid->scale};
  if (w.t_grid) w.t_grid = GridSpec{w.t_grid->stop, w.t_grid->start, w.t_grid->count, w.t_grid->scale};
  const WeylReport r = weyl_report(c.space, w);
  out.write("report.json", dump_json(report_to_json(r)));
  if (c.emit_curves) {
    if (r.ratio) out.write("ratio.csv", curve_csv(*r.ratio, "lambda", "ratio"));
    if (r.trace) out.write("trace.csv", curve_csv(r.trace->curve, "t", "trace"));
    if (r.criterion) {
      const auto& v = *r.criterion;
      out.write("criterion.csv", curve_csv(Curve{v.s, v.values, v.trend}, "s", "integral"));
    }
  }
  if (c.emit_spectrum && r.spectrum) out.write("spectrum.csv", to_csv(*r.spectrum));
  summary = std::string("weyl report: ") + (r.verdicts_hold() ? "consistent" : "verdict failure");
  return r.verdicts_hold() ? 0 : 2;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  RunResult result;
  const fs::path dir(config.output);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create output directory " + dir.string() + ": " + ec.message());
  const Writer out{dir, &result};
  switch (config.command) {
    case Command::spectrum: result.status = run_spectrum(config, out, result.summary); break;
    case Command::heat: result.status = run_heat(config, out, result.summary); break;
    case Command::tauberian: result.status = run_tauberian(config, out, result.summary); break;
    case Command::criterion: result.status = run_criterion(config, out, result.summary); break;
    case Command::weyl: result.status = run_weyl(config, out, result.summary); break;
  }
  return result;
}

}  // namespace weyllab
