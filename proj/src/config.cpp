#include "dflux/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dflux/errors.hpp"
#include "dflux/grid.hpp"

namespace dflux {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(std::string_view source, const std::string& path,
                              const std::string& what) {
  std::ostringstream msg;
  msg << source << ": field " << (path.empty() ? "/" : path) << ": " << what;
  throw ConfigError(msg.str());
}

// Walks a parsed document and reports errors by JSON pointer.
class Reader {
 public:
  explicit Reader(std::string_view source) : source_(source) {}

  const json& object(const json& parent, const std::string& path) const {
    if (!parent.is_object()) field_error(source_, path, "expected an object");
    return parent;
  }

  void only_keys(const json& obj, const std::string& path,
                 std::initializer_list<std::string_view> allowed) const {
    for (const auto& [key, value] : obj.items()) {
      bool ok = false;
      for (auto a : allowed) ok = ok || key == a;
      if (!ok) field_error(source_, path + "/" + key, "unknown field");
    }
  }

  const json& child(const json& obj, const std::string& path, const std::string& key) const {
    const auto it = obj.find(key);
    if (it == obj.end()) field_error(source_, path + "/" + key, "missing required field");
    return *it;
  }

  double number(const json& v, const std::string& path) const {
    if (!v.is_number()) field_error(source_, path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) field_error(source_, path, "expected a finite number");
    return x;
  }

  double number(const json& obj, const std::string& path, const std::string& key) const {
    return number(child(obj, path, key), path + "/" + key);
  }

  double number_or(const json& obj, const std::string& path, const std::string& key,
                   double fallback) const {
    return obj.contains(key) ? number(obj, path, key) : fallback;
  }

  std::size_t count(const json& v, const std::string& path) const {
    if (!v.is_number_integer() || v.get<long long>() <= 0)
      field_error(source_, path, "expected a positive integer");
    return v.get<std::size_t>();
  }

  std::string string(const json& v, const std::string& path) const {
    if (!v.is_string()) field_error(source_, path, "expected a string");
    return v.get<std::string>();
  }

  std::string string(const json& obj, const std::string& path, const std::string& key) const {
    return string(child(obj, path, key), path + "/" + key);
  }

  std::vector<double> numbers(const json& obj, const std::string& path,
                              const std::string& key) const {
    const json& arr = child(obj, path, key);
    if (!arr.is_array()) field_error(source_, path + "/" + key, "expected an array");
    std::vector<double> out;
    for (std::size_t k = 0; k < arr.size(); ++k)
      out.push_back(number(arr[k], path + "/" + key + "/" + std::to_string(k)));
    return out;
  }

  std::string_view source() const { return source_; }

 private:
  std::string_view source_;
};

InitialDescriptor read_initial(const Reader& r, const json& v) {
  const std::string path = "/initial";
  r.object(v, path);
  const std::string kind = r.string(v, path, "kind");
  if (kind == "piecewise_constant") {
    r.only_keys(v, path, {"kind", "breakpoints", "values"});
    return PiecewiseConstantInit{r.numbers(v, path, "breakpoints"), r.numbers(v, path, "values")};
  }
  if (kind == "gaussian_offset") {
    r.only_keys(v, path, {"kind", "base", "amplitude", "width", "center"});
    return GaussianOffsetInit{r.number(v, path, "base"), r.number(v, path, "amplitude"),
                              r.number(v, path, "width"), r.number(v, path, "center")};
  }
  if (kind == "table") {
    r.only_keys(v, path, {"kind", "path"});
    return TableInit{r.string(v, path, "path")};
  }
  field_error(r.source(), path + "/kind",
              "unknown initial datum '" + kind + "' (piecewise_constant, gaussian_offset, table)");
}

TraceDescriptor read_trace(const Reader& r, const json& v) {
  const std::string path = "/boundary/trace";
  r.object(v, path);
  const std::string kind = r.string(v, path, "kind");
  if (kind == "constant") {
    r.only_keys(v, path, {"kind", "value"});
    return ConstantTraceDescriptor{r.number(v, path, "value")};
  }
  if (kind == "linear") {
    r.only_keys(v, path, {"kind", "value", "slope"});
    return LinearTraceDescriptor{r.number(v, path, "value"), r.number(v, path, "slope")};
  }
  if (kind == "table") {
    r.only_keys(v, path, {"kind", "path"});
    return TableTraceDescriptor{r.string(v, path, "path")};
  }
  field_error(r.source(), path + "/kind", "unknown trace '" + kind + "' (constant, linear, table)");
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["domain"] = {{"xmin", c.xmin}, {"xmax", c.xmax}};
  j["interfaces"] = c.interfaces;
  j["fluxes"] = json::array();
  for (const auto& f : c.fluxes) j["fluxes"].push_back({{"kind", f.kind}, {"a", f.a}, {"b", f.b}});
  std::visit(
      [&j](const auto& init) {
        using T = std::decay_t<decltype(init)>;
        if constexpr (std::is_same_v<T, PiecewiseConstantInit>) {
          j["initial"] = {{"kind", "piecewise_constant"},
                          {"breakpoints", init.breakpoints},
                          {"values", init.values}};
        } else if constexpr (std::is_same_v<T, GaussianOffsetInit>) {
          j["initial"] = {{"kind", "gaussian_offset"},
                          {"base", init.base},
                          {"amplitude", init.amplitude},
                          {"width", init.width},
                          {"center", init.center}};
        } else {
          j["initial"] = {{"kind", "table"}, {"path", init.path}};
        }
      },
      c.initial);
  j["lambda"] = c.lambda;
  j["t_end"] = c.t_end;
  j["resolutions"] = c.resolutions;
  j["reference_n"] = c.reference_n;
  if (c.boundary.inflow) {
    json trace;
    std::visit(
        [&trace](const auto& t) {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, ConstantTraceDescriptor>) {
            trace = {{"kind", "constant"}, {"value", t.value}};
          } else if constexpr (std::is_same_v<T, LinearTraceDescriptor>) {
            trace = {{"kind", "linear"}, {"value", t.value}, {"slope", t.slope}};
          } else {
            trace = {{"kind", "table"}, {"path", t.path}};
          }
        },
        *c.boundary.inflow);
    j["boundary"] = {{"left", "inflow"}, {"trace", trace}};
  } else {
    j["boundary"] = {{"left", "outflow"}};
  }
  j["numerical_flux"] = std::string(to_string(c.numerical_flux));
  j["snapshots"] = c.snapshots;
  j["outputs"] = {{"dir", c.outputs.dir}, {"convergence", c.outputs.convergence}};
  return j;
}

ExperimentConfig from_json(const json& doc, std::string_view source) {
  const Reader r(source);
  r.object(doc, "");
  r.only_keys(doc, "",
              {"name", "domain", "interfaces", "fluxes", "initial", "lambda", "t_end",
               "resolutions", "reference_n", "boundary", "numerical_flux", "snapshots", "outputs"});
  ExperimentConfig c;
  if (doc.contains("name")) c.name = r.string(doc["name"], "/name");

  const json& domain = r.object(r.child(doc, "", "domain"), "/domain");
  r.only_keys(domain, "/domain", {"xmin", "xmax"});
  c.xmin = r.number(domain, "/domain", "xmin");
  c.xmax = r.number(domain, "/domain", "xmax");

  c.interfaces = doc.contains("interfaces") ? r.numbers(doc, "", "interfaces") : std::vector<double>{};

  const json& fluxes = r.child(doc, "", "fluxes");
  if (!fluxes.is_array()) field_error(source, "/fluxes", "expected an array");
  for (std::size_t k = 0; k < fluxes.size(); ++k) {
    const std::string path = "/fluxes/" + std::to_string(k);
    r.object(fluxes[k], path);
    r.only_keys(fluxes[k], path, {"kind", "a", "b"});
    FluxDescriptor f;
    f.kind = r.string(fluxes[k], path, "kind");
    f.a = r.number_or(fluxes[k], path, "a", 1.0);
    f.b = r.number_or(fluxes[k], path, "b", 0.0);
    c.fluxes.push_back(f);
  }

  c.initial = read_initial(r, r.child(doc, "", "initial"));
  c.lambda = r.number(doc, "", "lambda");
  c.t_end = r.number(doc, "", "t_end");

  const json& res = r.child(doc, "", "resolutions");
  if (!res.is_array()) field_error(source, "/resolutions", "expected an array");
  for (std::size_t k = 0; k < res.size(); ++k)
    c.resolutions.push_back(r.count(res[k], "/resolutions/" + std::to_string(k)));
  c.reference_n = r.count(r.child(doc, "", "reference_n"), "/reference_n");

  if (doc.contains("boundary")) {
    const json& b = r.object(doc["boundary"], "/boundary");
    r.only_keys(b, "/boundary", {"left", "trace"});
    const std::string left = b.contains("left") ? r.string(b["left"], "/boundary/left") : "outflow";
    if (left == "inflow") {
      c.boundary.inflow = read_trace(r, r.child(b, "/boundary", "trace"));
    } else if (left == "outflow") {
      if (b.contains("trace")) field_error(source, "/boundary/trace", "only valid with left = inflow");
    } else {
      field_error(source, "/boundary/left", "expected 'outflow' or 'inflow'");
    }
  }

  if (doc.contains("numerical_flux")) {
    const std::string nf = r.string(doc["numerical_flux"], "/numerical_flux");
    try {
      c.numerical_flux = numerical_flux_from_string(nf);
    } catch (const ConfigError&) {
      field_error(source, "/numerical_flux",
                  "unknown numerical flux '" + nf + "' (upwind, godunov, engquist_osher)");
    }
  }
  if (doc.contains("snapshots")) c.snapshots = r.numbers(doc, "", "snapshots");
  if (doc.contains("outputs")) {
    const json& o = r.object(doc["outputs"], "/outputs");
    r.only_keys(o, "/outputs", {"dir", "convergence"});
    if (o.contains("dir")) c.outputs.dir = r.string(o["dir"], "/outputs/dir");
    if (o.contains("convergence"))
      c.outputs.convergence = r.string(o["convergence"], "/outputs/convergence");
  }
  return c;
}

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json parse_document(std::string_view text, std::string_view source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_and_column(text, e.byte);
    std::ostringstream msg;
    msg << source << ":" << line << ":" << col << ": invalid JSON: " << e.what();
    throw ConfigError(msg.str());
  }
}

std::filesystem::path resolve(const ExperimentConfig& c, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : c.base_dir / path;
}

}  // namespace

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  return name == o.name && xmin == o.xmin && xmax == o.xmax && interfaces == o.interfaces &&
         fluxes == o.fluxes && initial == o.initial && lambda == o.lambda && t_end == o.t_end &&
         resolutions == o.resolutions && reference_n == o.reference_n &&
         boundary == o.boundary && numerical_flux == o.numerical_flux &&
         snapshots == o.snapshots && outputs == o.outputs;
}

std::string_view to_string(NumericalFlux kind) {
  switch (kind) {
    case NumericalFlux::upwind:
      return "upwind";
    case NumericalFlux::godunov:
      return "godunov";
    case NumericalFlux::engquist_osher:
      return "engquist_osher";
  }
  return "upwind";
}

NumericalFlux numerical_flux_from_string(std::string_view name) {
  if (name == "upwind") return NumericalFlux::upwind;
  if (name == "godunov") return NumericalFlux::godunov;
  if (name == "engquist_osher") return NumericalFlux::engquist_osher;
  throw ConfigError("unknown numerical flux '" + std::string(name) + "'");
}

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
  ExperimentConfig c = from_json(parse_document(text, source), source);
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string source = path.string();
  ExperimentConfig c = from_json(parse_document(buf.str(), source), source);
  c.base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  validate(c);
  return c;
}

std::string serialize_config(const ExperimentConfig& config) { return to_json(config).dump(2) + "\n"; }

std::string config_digest(const ExperimentConfig& config) {
  const std::string canonical = to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig preset(std::string_view name) {
  ExperimentConfig c;
  c.name = std::string(name);
  c.xmin = -1.0;
  c.xmax = 1.0;
  c.interfaces = {0.0};
  c.resolutions = {16, 32, 64, 128, 256, 512, 1024};
  c.reference_n = 2048;
  if (name == "experiment1") {
    // Transport to Burgers across x = 0.
    c.fluxes = {{"linear", 1.0, 0.0}, {"quadratic", 1.0, 0.0}};
    c.initial = PiecewiseConstantInit{{-0.5}, {0.5, 2.0}};
    c.lambda = 0.5;
    c.t_end = 0.9;
    c.snapshots = {0.3, 0.6, 0.9};
  } else if (name == "experiment2") {
    // Burgers to transport across x = 0.
    c.fluxes = {{"quadratic", 1.0, 0.0}, {"linear", 1.0, 0.0}};
    c.initial = GaussianOffsetInit{2.0, 1.0, 100.0, -0.75};
    c.lambda = 0.2;
    c.t_end = 0.5;
    c.snapshots = {0.2, 0.3, 0.5};
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "' (experiment1, experiment2)");
  }
  return c;
}

void validate(const ExperimentConfig& c) {
  const std::string_view src = c.name.empty() ? std::string_view("<config>") : c.name;
  if (!(c.xmin < c.xmax)) field_error(src, "/domain", "xmin must be below xmax");
  for (std::size_t i = 0; i < c.interfaces.size(); ++i) {
    const double xi = c.interfaces[i];
    if (!(xi > c.xmin && xi < c.xmax) || (i > 0 && !(c.interfaces[i - 1] < xi)))
      field_error(src, "/interfaces/" + std::to_string(i),
                  "interfaces must be strictly increasing and inside the domain");
  }
  if (c.fluxes.size() != c.interfaces.size() + 1) {
    field_error(src, "/fluxes",
                "expected " + std::to_string(c.interfaces.size() + 1) + " flux segments, got " +
                    std::to_string(c.fluxes.size()));
  }
  for (std::size_t k = 0; k < c.fluxes.size(); ++k) {
    if (c.fluxes[k].kind != "linear" && c.fluxes[k].kind != "quadratic")
      field_error(src, "/fluxes/" + std::to_string(k) + "/kind",
                  "unknown flux kind '" + c.fluxes[k].kind + "' (linear, quadratic)");
  }
  if (const auto* pc = std::get_if<PiecewiseConstantInit>(&c.initial)) {
    if (pc->values.size() != pc->breakpoints.size() + 1)
      field_error(src, "/initial/values", "needs one more value than breakpoints");
    for (std::size_t k = 0; k < pc->breakpoints.size(); ++k) {
      const double b = pc->breakpoints[k];
      if (b < c.xmin || b > c.xmax || (k > 0 && !(pc->breakpoints[k - 1] < b)))
        field_error(src, "/initial/breakpoints/" + std::to_string(k),
                    "breakpoints must be increasing and inside the domain");
    }
  }
  if (!(c.lambda > 0.0)) field_error(src, "/lambda", "must be positive");
  if (!(c.t_end >= 0.0)) field_error(src, "/t_end", "must be non-negative");
  if (c.resolutions.empty()) field_error(src, "/resolutions", "needs at least one entry");

  auto check_alignment = [&](std::size_t n, const std::string& path) {
    try {
      (void)build_grid(c.xmin, c.xmax, c.interfaces, n);
    } catch (const AlignmentError& e) {
      field_error(src, path, e.what());
    }
  };
  for (std::size_t k = 0; k < c.resolutions.size(); ++k) {
    const std::string path = "/resolutions/" + std::to_string(k);
    if (c.reference_n % c.resolutions[k] != 0)
      field_error(src, "/reference_n",
                  std::to_string(c.reference_n) + " is not divisible by resolution " +
                      std::to_string(c.resolutions[k]));
    check_alignment(c.resolutions[k], path);
  }
  check_alignment(c.reference_n, "/reference_n");
  for (std::size_t k = 0; k < c.snapshots.size(); ++k) {
    if (c.snapshots[k] < 0.0 || c.snapshots[k] > c.t_end)
      field_error(src, "/snapshots/" + std::to_string(k), "must lie in [0, t_end]");
  }
}

std::pair<std::vector<double>, std::vector<double>> read_two_column_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table " + path.string());
  std::vector<double> first;
  std::vector<double> second;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double a = 0.0;
    double b = 0.0;
    if (!(row >> a >> b)) {
      if (first.empty() && lineno == 1) continue;  // header
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": expected two numeric columns");
    }
    first.push_back(a);
    second.push_back(b);
  }
  return {std::move(first), std::move(second)};
}

Experiment build_experiment(const ExperimentConfig& c) {
  std::vector<FluxSegment> segments;
  for (const auto& f : c.fluxes) {
    segments.push_back(f.kind == "quadratic" ? FluxSegment::quadratic(f.a, f.b)
                                             : FluxSegment::linear(f.a, f.b));
  }
  PiecewiseFlux flux(c.interfaces, std::move(segments));

  ProblemSpec problem;
  problem.xmin = c.xmin;
  problem.xmax = c.xmax;
  problem.t_end = c.t_end;
  problem.lambda = c.lambda;
  if (const auto* pc = std::get_if<PiecewiseConstantInit>(&c.initial)) {
    problem.initial = PiecewiseConstantDatum{pc->breakpoints, pc->values};
  } else if (const auto* g = std::get_if<GaussianOffsetInit>(&c.initial)) {
    const GaussianOffsetInit p = *g;
    problem.initial = SmoothDatum{[p](double x) {
      const double d = x - p.center;
      return p.base + p.amplitude * std::exp(-p.width * d * d);
    }};
  } else {
    auto [x, u] = read_two_column_csv(resolve(c, std::get<TableInit>(c.initial).path));
    problem.initial = TableDatum{std::move(x), std::move(u)};
  }

  if (c.boundary.inflow) {
    InflowTrace trace;
    if (const auto* k = std::get_if<ConstantTraceDescriptor>(&*c.boundary.inflow)) {
      trace = ConstantTrace{k->value};
    } else if (const auto* l = std::get_if<LinearTraceDescriptor>(&*c.boundary.inflow)) {
      trace = LinearTrace{l->value, l->slope};
    } else {
      auto [t, a] = read_two_column_csv(resolve(c, std::get<TableTraceDescriptor>(*c.boundary.inflow).path));
      trace = TableTrace{std::move(t), std::move(a)};
    }
    problem.boundary_left = InflowBoundary{std::move(trace)};
  }

  Experiment e{std::move(flux), problem, SolverConfig::from(problem, c.numerical_flux), c.snapshots};
  if (e.snapshots.empty()) e.snapshots = {c.t_end};
  return e;
}

}  // namespace dflux
