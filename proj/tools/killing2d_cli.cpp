#include <unistd.h>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "killing2d/errors.hpp"
#include "killing2d/examples.hpp"
#include "killing2d/families.hpp"
#include "killing2d/geometry.hpp"
#include "killing2d/json_io.hpp"
#include "killing2d/verify.hpp"

namespace k2 = killing2d;

namespace {

enum class Format { Auto, Json, Table };

bool use_json(Format f) {
  if (f == Format::Json) return true;
  if (f == Format::Table) return false;
  return isatty(fileno(stdout)) == 0;  // json when piped, table on a terminal
}

k2::Region region_from_flag(const std::vector<double>& flag, const k2::MetricDoc& doc) {
  if (!flag.empty()) {
    if (flag.size() != 4) throw k2::InputError("--region expects xmin,xmax,ymin,ymax");
    k2::Region r{flag[0], flag[1], flag[2], flag[3]};
    if (!(r.x1min < r.x1max) || !(r.x2min < r.x2max))
      throw k2::InputError("--region must satisfy xmin < xmax and ymin < ymax");
    return r;
  }
  if (doc.region) return *doc.region;
  return {};
}

std::string error_kind(const k2::Error& e) {
  if (dynamic_cast<const k2::ParseError*>(&e)) return "parse";
  if (dynamic_cast<const k2::EvalDomainError*>(&e)) return "domain";
  if (dynamic_cast<const k2::QuadratureError*>(&e)) return "quadrature";
  if (dynamic_cast<const k2::AdmissibilityError*>(&e)) return "admissibility";
  if (dynamic_cast<const k2::InputError*>(&e)) return "input";
  return "error";
}

struct CheckOptions {
  std::string metric_path;
  std::string field_path;
  std::vector<double> region;
  int grid = 21;
  double tol = 1e-9;
};

int run_check(const CheckOptions& opt, Format format) {
  const k2::MetricDoc mdoc = k2::parse_metric_doc(k2::read_file(opt.metric_path));
  const k2::FieldDoc vdoc = k2::parse_field_doc(k2::read_file(opt.field_path));
  const k2::Region region = region_from_flag(opt.region, mdoc);
  const int grid = mdoc.grid && opt.grid == 21 ? *mdoc.grid : opt.grid;

  k2::validate_nonzero(mdoc.metric, {region, 41, 41});
  const k2::GridReport report =
      k2::grid_residual_check(mdoc.metric, vdoc.field, region, grid, opt.tol);
  std::cout << (use_json(format) ? k2::grid_report_json(mdoc.metric, vdoc.field, report) + "\n"
                                 : k2::grid_report_table(mdoc.metric, vdoc.field, report));
  return report.pass ? 0 : 1;
}

struct FlowOptions {
  std::string metric_path;
  std::string field_path;
  std::vector<double> start{0.2, -0.3};
  double t = 0.5;
  int steps = 1000;
  double tol = 1e-6;
};

int run_flow(const FlowOptions& opt, Format format) {
  const k2::MetricDoc mdoc = k2::parse_metric_doc(k2::read_file(opt.metric_path));
  const k2::FieldDoc vdoc = k2::parse_field_doc(k2::read_file(opt.field_path));
  if (opt.start.size() != 2) throw k2::InputError("--start expects x1,x2");

  const k2::Region region = region_from_flag({}, mdoc);
  k2::validate_nonzero(mdoc.metric, {region, 41, 41});
  const k2::FlowReport report = k2::flow_isometry_check(
      mdoc.metric, vdoc.field, {opt.start[0], opt.start[1]}, opt.t, opt.steps, opt.tol);
  std::cout << (use_json(format) ? k2::flow_report_json(mdoc.metric, vdoc.field, report) + "\n"
                                 : k2::flow_report_table(mdoc.metric, vdoc.field, report));
  return report.pass ? 0 : 1;
}

struct ClassifyOptions {
  std::string metric_path;
  std::vector<double> region;
  int grid = 41;
};

int run_classify(const ClassifyOptions& opt, Format format) {
  const k2::MetricDoc mdoc = k2::parse_metric_doc(k2::read_file(opt.metric_path));
  const k2::Region region = region_from_flag(opt.region, mdoc);
  k2::validate_nonzero(mdoc.metric, {region, 41, 41});
  const k2::DependenceLabel label =
      k2::classify_dependence(mdoc.metric, {region, opt.grid, opt.grid});
  std::cout << (use_json(format)
                    ? k2::classify_report_json(mdoc.metric, region, opt.grid, label) + "\n"
                    : k2::classify_report_table(mdoc.metric, region, opt.grid, label));
  return 0;
}

struct FamilyOptions {
  std::string request_path;
  std::string metric_path;
  std::string case_name;
  double k = 0.0;
  std::vector<double> c;
  double anchor = 0.0;
  std::vector<double> region;
};

int run_family(const FamilyOptions& opt, Format format) {
  k2::FamilyRequest request;
  k2::Region region;
  if (!opt.request_path.empty()) {
    request = k2::parse_family_request(k2::read_file(opt.request_path));
    region = request.metric.region ? *request.metric.region : k2::Region{};
  } else {
    if (opt.metric_path.empty() || opt.case_name.empty())
      throw k2::InputError("family needs --case and --metric (or --request FILE)");
    request.family = k2::family_from_name(opt.case_name);
    request.metric = k2::parse_metric_doc(k2::read_file(opt.metric_path));
    request.params.k = opt.k;
    request.params.c = opt.c;
    request.params.anchor = opt.anchor;
    region = region_from_flag(opt.region, request.metric);
  }

  const k2::VectorField field =
      k2::build_family(request.family, request.params, request.metric.metric, region);
  std::cout << (use_json(format) ? k2::family_report_json(request, field) + "\n"
                                 : k2::family_report_table(request, field));
  return 0;
}

int run_examples(Format format) {
  const k2::Region region;
  const int grid = 21;
  const double grid_tol = 1e-9;
  const k2::Point start{0.5, 0.4};
  const double t = 0.5;
  const int steps = 1000;
  const double flow_tol = 1e-6;

  std::vector<k2::ExampleResult> results;
  for (const k2::ExampleFixture& fx : k2::bundled_examples()) {
    k2::ExampleResult r;
    r.name = fx.name;
    r.metric = {k2::Expr::parse(fx.f1), k2::Expr::parse(fx.f2)};
    r.field = {std::string(fx.basis) == "frame" ? k2::Basis::Frame : k2::Basis::Coordinate,
               k2::Expr::parse(fx.v1), k2::Expr::parse(fx.v2)};
    r.grid = k2::grid_residual_check(r.metric, r.field, region, grid, grid_tol);
    r.flow = k2::flow_isometry_check(r.metric, r.field, start, t, steps, flow_tol);
    r.pass = r.grid.pass && r.flow.pass;
    if (fx.corrected_v1 != nullptr) {
      r.has_corrected = true;
      r.corrected = {r.field.basis, k2::Expr::parse(fx.corrected_v1),
                     k2::Expr::parse(fx.corrected_v2)};
      r.corrected_grid = k2::grid_residual_check(r.metric, r.corrected, region, grid, grid_tol);
    }
    results.push_back(std::move(r));
  }

  bool all = true;
  for (const auto& r : results) all = all && r.pass;
  std::cout << (use_json(format) ? k2::examples_report_json(results) + "\n"
                                 : k2::examples_report_table(results));
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Killing vector fields of diagonal metrics on R^2: verification, construction "
               "and classification"};
  app.require_subcommand(1);

  Format format = Format::Auto;
  const std::map<std::string, Format> format_map{{"json", Format::Json}, {"table", Format::Table}};
  app.add_option("--format", format, "Output format (default: table on a terminal, json piped)")
      ->transform(CLI::CheckedTransformer(format_map, CLI::ignore_case));

  CheckOptions check_opt;
  auto* check = app.add_subcommand("check", "Grid sweep of the Killing residual");
  check->add_option("--metric", check_opt.metric_path, "Metric JSON file")->required();
  check->add_option("--field", check_opt.field_path, "Field JSON file")->required();
  check->add_option("--region", check_opt.region, "xmin,xmax,ymin,ymax (default -1,1,-1,1)")
      ->delimiter(',');
  check->add_option("--grid", check_opt.grid, "Lattice points per axis (default 21)");
  check->add_option("--tol", check_opt.tol, "Residual tolerance (default 1e-9)");

  FlowOptions flow_opt;
  auto* flow = app.add_subcommand("flow", "Flow-isometry check (RK4 with Jacobian transport)");
  flow->add_option("--metric", flow_opt.metric_path, "Metric JSON file")->required();
  flow->add_option("--field", flow_opt.field_path, "Field JSON file")->required();
  flow->add_option("--start", flow_opt.start, "Start point x1,x2 (default 0.2,-0.3)")
      ->delimiter(',');
  flow->add_option("--t", flow_opt.t, "Flow time (default 0.5)");
  flow->add_option("--steps", flow_opt.steps, "RK4 steps (default 1000)");
  flow->add_option("--tol", flow_opt.tol, "Deviation tolerance (default 1e-6)");

  ClassifyOptions classify_opt;
  auto* classify = app.add_subcommand("classify", "Lamé-function dependence label");
  classify->add_option("--metric", classify_opt.metric_path, "Metric JSON file")->required();
  classify->add_option("--region", classify_opt.region, "xmin,xmax,ymin,ymax")->delimiter(',');
  classify->add_option("--grid", classify_opt.grid, "Sampling lattice per axis (default 41)");

  FamilyOptions family_opt;
  auto* family = app.add_subcommand("family", "Construct a Killing family member");
  family->add_option("--request", family_opt.request_path, "Full request JSON file");
  family->add_option("--case", family_opt.case_name, "Family case tag");
  family->add_option("--metric", family_opt.metric_path, "Metric JSON file");
  family->add_option("--k", family_opt.k, "Coupling constant k (default 0)");
  family->add_option("--c", family_opt.c, "Free constants, comma separated")->delimiter(',');
  family->add_option("--anchor", family_opt.anchor, "Antiderivative anchor (default 0)");
  family->add_option("--region", family_opt.region, "xmin,xmax,ymin,ymax")->delimiter(',');

  auto* examples = app.add_subcommand(
      "examples", "Run the bundled example suite (one fixture is a known counterexample)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*check) return run_check(check_opt, format);
    if (*flow) return run_flow(flow_opt, format);
    if (*classify) return run_classify(classify_opt, format);
    if (*family) return run_family(family_opt, format);
    if (*examples) return run_examples(format);
  } catch (const k2::Error& e) {
    std::cout << k2::error_json(error_kind(e), e.what()) << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
