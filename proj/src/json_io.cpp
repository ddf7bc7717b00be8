#include "killing2d/json_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "killing2d/errors.hpp"

namespace killing2d {

namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const char* what) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (std::string_view a : allowed) {
      if (it.key() == a) {
        ok = true;
        break;
      }
    }
    if (!ok) throw InputError(std::string(what) + ": unknown key '" + it.key() + "'");
  }
}

json parse_json_text(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

Expr parse_expr_field(const json& obj, const char* key, const char* what) {
  if (!obj.contains(key)) throw InputError(std::string(what) + ": missing key '" + key + "'");
  if (!obj[key].is_string())
    throw InputError(std::string(what) + ": key '" + key + "' must be an expression string");
  try {
    return Expr::parse(obj[key].get<std::string>());
  } catch (const ParseError& e) {
    throw InputError(std::string(what) + ": " + key + ": " + e.what());
  }
}

Region parse_region_array(const json& arr, const char* what) {
  if (!arr.is_array() || arr.size() != 4)
    throw InputError(std::string(what) +
                     ": region must be an array [x1min, x1max, x2min, x2max]");
  for (const auto& v : arr) {
    if (!v.is_number()) throw InputError(std::string(what) + ": region entries must be numbers");
  }
  Region r{arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>(), arr[3].get<double>()};
  if (!(r.x1min < r.x1max) || !(r.x2min < r.x2max))
    throw InputError(std::string(what) + ": region must satisfy x1min < x1max and x2min < x2max");
  return r;
}

MetricDoc parse_metric_json(const json& j, const char* what) {
  if (!j.is_object()) throw InputError(std::string(what) + ": expected a JSON object");
  check_keys(j, {"f1", "f2", "region", "grid"}, what);
  MetricDoc doc;
  doc.metric.f1 = parse_expr_field(j, "f1", what);
  doc.metric.f2 = parse_expr_field(j, "f2", what);
  if (j.contains("region")) doc.region = parse_region_array(j["region"], what);
  if (j.contains("grid")) {
    if (!j["grid"].is_number_integer() || j["grid"].get<int>() < 2)
      throw InputError(std::string(what) + ": grid must be an integer >= 2");
    doc.grid = j["grid"].get<int>();
  }
  return doc;
}

const char* basis_name(Basis b) { return b == Basis::Frame ? "frame" : "coordinate"; }

void write_metric(JsonWriter& w, const DiagonalMetric& m) {
  w.key("metric").begin_object();
  w.key("f1").value(m.f1.str());
  w.key("f2").value(m.f2.str());
  w.end_object();
}

void write_field(JsonWriter& w, const char* key, const VectorField& v) {
  w.key(key).begin_object();
  w.key("basis").value(basis_name(v.basis));
  w.key("v1").value(v.c1.str());
  w.key("v2").value(v.c2.str());
  w.end_object();
}

void write_region(JsonWriter& w, const Region& r) {
  w.key("region").begin_array();
  w.value(r.x1min).value(r.x1max).value(r.x2min).value(r.x2max);
  w.end_array();
}

void write_point(JsonWriter& w, const char* key, const Point& p) {
  w.key(key).begin_array();
  w.value(p.x1).value(p.x2);
  w.end_array();
}

std::string describe_metric(const DiagonalMetric& m) {
  return "f1 = " + m.f1.str() + ", f2 = " + m.f2.str();
}

std::string describe_field(const VectorField& v) {
  return std::string(basis_name(v.basis)) + ": v1 = " + v.c1.str() + ", v2 = " + v.c2.str();
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MetricDoc parse_metric_doc(const std::string& json_text) {
  return parse_metric_json(parse_json_text(json_text, "metric document"), "metric document");
}

FieldDoc parse_field_doc(const std::string& json_text) {
  const json j = parse_json_text(json_text, "field document");
  if (!j.is_object()) throw InputError("field document: expected a JSON object");
  check_keys(j, {"basis", "v1", "v2"}, "field document");
  if (!j.contains("basis") || !j["basis"].is_string())
    throw InputError("field document: missing key 'basis' (\"frame\" or \"coordinate\")");
  const std::string basis = j["basis"].get<std::string>();
  FieldDoc doc;
  if (basis == "frame") {
    doc.field.basis = Basis::Frame;
  } else if (basis == "coordinate") {
    doc.field.basis = Basis::Coordinate;
  } else {
    throw InputError("field document: basis must be \"frame\" or \"coordinate\"");
  }
  doc.field.c1 = parse_expr_field(j, "v1", "field document");
  doc.field.c2 = parse_expr_field(j, "v2", "field document");
  return doc;
}

FamilyRequest parse_family_request(const std::string& json_text) {
  const json j = parse_json_text(json_text, "family request");
  if (!j.is_object()) throw InputError("family request: expected a JSON object");
  check_keys(j, {"case", "params", "metric"}, "family request");
  if (!j.contains("case") || !j["case"].is_string())
    throw InputError("family request: missing key 'case'");
  if (!j.contains("metric")) throw InputError("family request: missing key 'metric'");

  FamilyRequest req;
  req.family = family_from_name(j["case"].get<std::string>());
  req.metric = parse_metric_json(j["metric"], "family request metric");

  if (j.contains("params")) {
    const json& p = j["params"];
    if (!p.is_object()) throw InputError("family request: params must be an object");
    check_keys(p, {"k", "c", "anchor"}, "family request params");
    if (p.contains("k")) {
      if (!p["k"].is_number()) throw InputError("family request: k must be a number");
      req.params.k = p["k"].get<double>();
    }
    if (p.contains("anchor")) {
      if (!p["anchor"].is_number()) throw InputError("family request: anchor must be a number");
      req.params.anchor = p["anchor"].get<double>();
    }
    if (!p.contains("c") || !p["c"].is_array())
      throw InputError("family request: params.c must be an array of numbers");
    for (const auto& v : p["c"]) {
      if (!v.is_number()) throw InputError("family request: params.c entries must be numbers");
      req.params.c.push_back(v.get<double>());
    }
  } else {
    throw InputError("family request: missing key 'params'");
  }
  return req;
}

// ---------------------------------------------------------------------------
// JsonWriter

void JsonWriter::newline_indent() {
  out_ += '\n';
  out_.append(2 * stack_.size(), ' ');
}

void JsonWriter::prefix() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (stack_.empty()) return;
  if (has_item_.back()) out_ += ',';
  has_item_.back() = true;
  newline_indent();
}

JsonWriter& JsonWriter::begin_object() {
  prefix();
  out_ += '{';
  stack_.push_back('{');
  has_item_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  const bool had = has_item_.back();
  stack_.pop_back();
  has_item_.pop_back();
  if (had) newline_indent();
  out_ += '}';
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  prefix();
  out_ += '[';
  stack_.push_back('[');
  has_item_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  const bool had = has_item_.back();
  stack_.pop_back();
  has_item_.pop_back();
  if (had) newline_indent();
  out_ += ']';
  return *this;
}

JsonWriter& JsonWriter::key(std::string_view name) {
  if (has_item_.back()) out_ += ',';
  has_item_.back() = true;
  newline_indent();
  out_ += '"';
  out_ += name;
  out_ += "\": ";
  pending_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  prefix();
  out_ += format_double(v);
  return *this;
}

JsonWriter& JsonWriter::value(int v) {
  prefix();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  prefix();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(std::string_view s) {
  prefix();
  out_ += '"';
  for (char c : s) {
    switch (c) {
      case '"': out_ += "\\\""; break;
      case '\\': out_ += "\\\\"; break;
      case '\n': out_ += "\\n"; break;
      case '\t': out_ += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out_ += buf;
        } else {
          out_ += c;
        }
    }
  }
  out_ += '"';
  return *this;
}

JsonWriter& JsonWriter::null() {
  prefix();
  out_ += "null";
  return *this;
}

std::string JsonWriter::take() { return std::move(out_); }

// ---------------------------------------------------------------------------
// Reports

namespace {

void write_grid_body(JsonWriter& w, const GridReport& r) {
  write_region(w, r.region);
  w.key("grid").begin_array().value(r.n1).value(r.n2).end_array();
  w.key("tol").value(r.tol);
  w.key("max_abs").value(r.max_abs);
  write_point(w, "argmax", r.argmax);
  w.key("component_max").begin_object();
  w.key("r11").value(r.max_r11);
  w.key("r22").value(r.max_r22);
  w.key("r12").value(r.max_r12);
  w.end_object();
  w.key("pass").value(r.pass);
}

}  // namespace

std::string grid_report_json(const DiagonalMetric& m, const VectorField& v,
                             const GridReport& report) {
  JsonWriter w;
  w.begin_object();
  w.key("type").value("grid_report");
  write_metric(w, m);
  write_field(w, "field", v);
  write_grid_body(w, report);
  w.end_object();
  return w.take();
}

std::string grid_report_table(const DiagonalMetric& m, const VectorField& v,
                              const GridReport& r) {
  std::string out;
  out += "grid residual check\n";
  out += "  metric: " + describe_metric(m) + "\n";
  out += "  field (" + describe_field(v) + ")\n";
  out += "  region: [" + format_double(r.region.x1min) + ", " + format_double(r.region.x1max) +
         "] x [" + format_double(r.region.x2min) + ", " + format_double(r.region.x2max) +
         "], grid " + std::to_string(r.n1) + " x " + std::to_string(r.n2) + ", tol " +
         format_double(r.tol) + "\n";
  out += "  max |residual|: " + format_double(r.max_abs) + " at (" +
         format_double(r.argmax.x1) + ", " + format_double(r.argmax.x2) + ")\n";
  out += "  component max: r11 " + format_double(r.max_r11) + ", r22 " +
         format_double(r.max_r22) + ", r12 " + format_double(r.max_r12) + "\n";
  out += std::string("  result: ") + (r.pass ? "PASS" : "FAIL") + "\n";
  return out;
}

std::string flow_report_json(const DiagonalMetric& m, const VectorField& v,
                             const FlowReport& report) {
  JsonWriter w;
  w.begin_object();
  w.key("type").value("flow_report");
  write_metric(w, m);
  write_field(w, "field", v);
  write_point(w, "start", report.start);
  w.key("t").value(report.t);
  w.key("steps").value(report.steps);
  w.key("tol").value(report.tol);
  write_point(w, "endpoint", report.endpoint);
  w.key("deviation").value(report.deviation);
  w.key("pass").value(report.pass);
  w.end_object();
  return w.take();
}

std::string flow_report_table(const DiagonalMetric& m, const VectorField& v,
                              const FlowReport& r) {
  std::string out;
  out += "flow isometry check\n";
  out += "  metric: " + describe_metric(m) + "\n";
  out += "  field (" + describe_field(v) + ")\n";
  out += "  start (" + format_double(r.start.x1) + ", " + format_double(r.start.x2) + "), t " +
         format_double(r.t) + ", steps " + std::to_string(r.steps) + ", tol " +
         format_double(r.tol) + "\n";
  out += "  endpoint (" + format_double(r.endpoint.x1) + ", " + format_double(r.endpoint.x2) +
         ")\n";
  out += "  max deviation of pulled-back metric: " + format_double(r.deviation) + "\n";
  out += std::string("  result: ") + (r.pass ? "PASS" : "FAIL") + "\n";
  return out;
}

std::string classify_report_json(const DiagonalMetric& m, const Region& region, int grid,
                                 DependenceLabel label) {
  JsonWriter w;
  w.begin_object();
  w.key("type").value("classification");
  write_metric(w, m);
  write_region(w, region);
  w.key("grid").value(grid);
  w.key("label").value(label_name(label));
  w.end_object();
  return w.take();
}

std::string classify_report_table(const DiagonalMetric& m, const Region& region, int grid,
                                  DependenceLabel label) {
  std::string out;
  out += "dependence classification\n";
  out += "  metric: " + describe_metric(m) + "\n";
  out += "  region: [" + format_double(region.x1min) + ", " + format_double(region.x1max) +
         "] x [" + format_double(region.x2min) + ", " + format_double(region.x2max) + "], grid " +
         std::to_string(grid) + " x " + std::to_string(grid) + "\n";
  out += std::string("  label: ") + label_name(label) + "\n";
  return out;
}

std::string family_report_json(const FamilyRequest& request, const VectorField& field) {
  const FamilyProvenance prov = family_provenance(request.family);
  JsonWriter w;
  w.begin_object();
  w.key("type").value("family");
  w.key("case").value(family_name(request.family));
  w.key("params").begin_object();
  w.key("k").value(request.params.k);
  w.key("c").begin_array();
  for (double c : request.params.c) w.value(c);
  w.end_array();
  w.key("anchor").value(request.params.anchor);
  w.end_object();
  write_metric(w, request.metric.metric);
  write_field(w, "field", field);
  w.key("provenance").begin_object();
  w.key("hypothesis").value(prov.hypothesis);
  w.key("construction").value(prov.construction);
  w.end_object();
  w.end_object();
  return w.take();
}

std::string family_report_table(const FamilyRequest& request, const VectorField& field) {
  const FamilyProvenance prov = family_provenance(request.family);
  std::string out;
  out += std::string("family ") + family_name(request.family) + "\n";
  out += "  metric: " + describe_metric(request.metric.metric) + "\n";
  out += "  k = " + format_double(request.params.k) + ", anchor = " +
         format_double(request.params.anchor) + ", c = [";
  for (std::size_t i = 0; i < request.params.c.size(); ++i) {
    if (i) out += ", ";
    out += format_double(request.params.c[i]);
  }
  out += "]\n";
  out += "  field (" + describe_field(field) + ")\n";
  out += std::string("  hypothesis: ") + prov.hypothesis + "\n";
  out += std::string("  construction: ") + prov.construction + "\n";
  return out;
}

std::string examples_report_json(const std::vector<ExampleResult>& results) {
  JsonWriter w;
  w.begin_object();
  w.key("type").value("examples_report");
  w.key("results").begin_array();
  for (const ExampleResult& r : results) {
    w.begin_object();
    w.key("name").value(r.name);
    write_metric(w, r.metric);
    write_field(w, "field", r.field);
    w.key("grid_max_abs").value(r.grid.max_abs);
    w.key("grid_pass").value(r.grid.pass);
    w.key("flow_deviation").value(r.flow.deviation);
    w.key("flow_pass").value(r.flow.pass);
    w.key("pass").value(r.pass);
    if (r.has_corrected) {
      write_field(w, "corrected_field", r.corrected);
      w.key("corrected_grid_max_abs").value(r.corrected_grid.max_abs);
      w.key("corrected_pass").value(r.corrected_grid.pass);
    }
    w.end_object();
  }
  w.end_array();
  w.key("failures").begin_array();
  for (const ExampleResult& r : results) {
    if (!r.pass) w.value(r.name);
  }
  w.end_array();
  bool all = true;
  for (const ExampleResult& r : results) all = all && r.pass;
  w.key("pass").value(all);
  w.end_object();
  return w.take();
}

std::string examples_report_table(const std::vector<ExampleResult>& results) {
  std::string out;
  out += "bundled examples\n";
  bool all = true;
  for (const ExampleResult& r : results) {
    out += "  " + r.name + ": grid max " + format_double(r.grid.max_abs) + ", flow deviation " +
           format_double(r.flow.deviation) + " -> " + (r.pass ? "PASS" : "FAIL") + "\n";
    if (r.has_corrected) {
      out += "    corrected field v1 = " + r.corrected.c1.str() + ": grid max " +
             format_double(r.corrected_grid.max_abs) + " -> " +
             (r.corrected_grid.pass ? "PASS" : "FAIL") + "\n";
    }
    all = all && r.pass;
  }
  out += "  failures:";
  for (const ExampleResult& r : results) {
    if (!r.pass) out += " " + r.name;
  }
  out += "\n";
  out += std::string("  result: ") + (all ? "PASS" : "FAIL") + "\n";
  return out;
}

std::string error_json(const std::string& kind, const std::string& message) {
  JsonWriter w;
  w.begin_object();
  w.key("type").value("error");
  w.key("error").begin_object();
  w.key("kind").value(kind);
  w.key("message").value(message);
  w.end_object();
  w.end_object();
  return w.take();
}

}  // namespace killing2d
