#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "killing2d/errors.hpp"
#include "killing2d/examples.hpp"
#include "killing2d/families.hpp"
#include "killing2d/geometry.hpp"
#include "killing2d/verify.hpp"

namespace py = pybind11;
namespace k2 = killing2d;

namespace {

k2::DiagonalMetric metric_from_dict(const py::dict& d) {
  if (!d.contains("f1") || !d.contains("f2"))
    throw k2::InputError("metric dict needs keys 'f1' and 'f2'");
  return {k2::Expr::parse(py::cast<std::string>(d["f1"])),
          k2::Expr::parse(py::cast<std::string>(d["f2"]))};
}

k2::VectorField field_from_dict(const py::dict& d) {
  if (!d.contains("basis") || !d.contains("v1") || !d.contains("v2"))
    throw k2::InputError("field dict needs keys 'basis', 'v1' and 'v2'");
  const std::string basis = py::cast<std::string>(d["basis"]);
  if (basis != "frame" && basis != "coordinate")
    throw k2::InputError("field basis must be 'frame' or 'coordinate'");
  return {basis == "frame" ? k2::Basis::Frame : k2::Basis::Coordinate,
          k2::Expr::parse(py::cast<std::string>(d["v1"])),
          k2::Expr::parse(py::cast<std::string>(d["v2"]))};
}

py::dict field_to_dict(const k2::VectorField& v) {
  py::dict d;
  d["basis"] = v.basis == k2::Basis::Frame ? "frame" : "coordinate";
  d["v1"] = v.c1.str();
  d["v2"] = v.c2.str();
  return d;
}

k2::Region region_from_tuple(const std::vector<double>& r) {
  if (r.size() != 4) throw k2::InputError("region needs 4 entries (x1min, x1max, x2min, x2max)");
  return {r[0], r[1], r[2], r[3]};
}

py::dict grid_report_to_dict(const k2::GridReport& r) {
  py::dict d;
  d["region"] = py::make_tuple(r.region.x1min, r.region.x1max, r.region.x2min, r.region.x2max);
  d["grid"] = py::make_tuple(r.n1, r.n2);
  d["tol"] = r.tol;
  d["max_abs"] = r.max_abs;
  d["argmax"] = py::make_tuple(r.argmax.x1, r.argmax.x2);
  d["component_max"] = py::make_tuple(r.max_r11, r.max_r22, r.max_r12);
  d["pass"] = r.pass;
  return d;
}

py::dict flow_report_to_dict(const k2::FlowReport& r) {
  py::dict d;
  d["start"] = py::make_tuple(r.start.x1, r.start.x2);
  d["t"] = r.t;
  d["steps"] = r.steps;
  d["tol"] = r.tol;
  d["endpoint"] = py::make_tuple(r.endpoint.x1, r.endpoint.x2);
  d["deviation"] = r.deviation;
  d["pass"] = r.pass;
  return d;
}

k2::AntiKind anti_kind_from_name(const std::string& name) {
  if (name == "square") return k2::AntiKind::Square;
  if (name == "reciprocal") return k2::AntiKind::Reciprocal;
  if (name == "plain") return k2::AntiKind::Plain;
  throw k2::InputError("antiderivative kind must be 'square', 'reciprocal' or 'plain'");
}

k2::Region region_or_default(const std::vector<double>& region) {
  if (region.empty()) return {};
  return region_from_tuple(region);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Killing vector fields of diagonal metrics on R^2";
  m.attr("__version__") = "0.1.0";

  py::register_exception<k2::Error>(m, "Killing2dError", PyExc_ValueError);

  m.def(
      "parse_expr",
      [](const std::string& text) { return k2::Expr::parse(text).str(); },
      py::arg("text"),
      "Parse an expression and return its canonical text form.");

  m.def(
      "eval_jet2",
      [](const std::string& text, double x1, double x2) {
        const k2::Jet2 j = k2::Expr::parse(text).jet({x1, x2});
        py::dict d;
        d["value"] = j.v;
        d["grad"] = py::make_tuple(j.d1, j.d2);
        d["hess"] = py::make_tuple(j.d11, j.d12, j.d22);
        return d;
      },
      py::arg("text"), py::arg("x1"), py::arg("x2"),
      "Value, gradient and Hessian of an expression at a point.");

  m.def(
      "derivative",
      [](const std::string& text, const std::string& var) {
        if (var != "x1" && var != "x2") throw k2::InputError("var must be 'x1' or 'x2'");
        return k2::Expr::parse(text)
            .derivative(var == "x1" ? k2::Var::X1 : k2::Var::X2)
            .str();
      },
      py::arg("text"), py::arg("var"), "Symbolic derivative (constant-folded).");

  m.def(
      "fd_oracle",
      [](const std::string& text, double x1, double x2, double h) {
        const k2::FdResult r = k2::fd_oracle(k2::Expr::parse(text), {x1, x2}, h);
        py::dict d;
        d["grad"] = py::make_tuple(r.g1, r.g2);
        d["hess"] = py::make_tuple(r.h11, r.h12, r.h22);
        d["err_est"] = r.err_est;
        return d;
      },
      py::arg("text"), py::arg("x1"), py::arg("x2"), py::arg("h") = 1e-3,
      "Richardson-extrapolated central differences.");

  m.def(
      "frame_coeffs",
      [](const py::dict& metric, double x1, double x2) {
        const k2::FrameCoeffs c = k2::frame_coeffs(metric_from_dict(metric), {x1, x2});
        return py::make_tuple(c.l12, c.l21);
      },
      py::arg("metric"), py::arg("x1"), py::arg("x2"),
      "(l12, l21) of the orthonormal frame at a point.");

  m.def(
      "residual_frame",
      [](const py::dict& metric, const py::dict& field, double x1, double x2) {
        const k2::KillingResidual r =
            k2::killing_residual_frame(metric_from_dict(metric), field_from_dict(field), {x1, x2});
        return py::make_tuple(r.r11, r.r22, r.r12);
      },
      py::arg("metric"), py::arg("field"), py::arg("x1"), py::arg("x2"),
      "Frame components of the Lie derivative of the metric.");

  m.def(
      "residual_coordinate",
      [](const py::dict& metric, const py::dict& field, double x1, double x2) {
        const k2::Sym2 t = k2::killing_residual_coordinate(metric_from_dict(metric),
                                                           field_from_dict(field), {x1, x2});
        return py::make_tuple(t.t11, t.t12, t.t22);
      },
      py::arg("metric"), py::arg("field"), py::arg("x1"), py::arg("x2"),
      "Coordinate components of the Lie derivative of the metric.");

  m.def(
      "convert_basis",
      [](const py::dict& metric, const py::dict& field, const std::string& target) {
        if (target != "frame" && target != "coordinate")
          throw k2::InputError("target must be 'frame' or 'coordinate'");
        return field_to_dict(k2::convert_basis(
            field_from_dict(field), metric_from_dict(metric),
            target == "frame" ? k2::Basis::Frame : k2::Basis::Coordinate));
      },
      py::arg("metric"), py::arg("field"), py::arg("target"));

  m.def(
      "classify",
      [](const py::dict& metric, const std::vector<double>& region, int grid) {
        return std::string(k2::label_name(k2::classify_dependence(
            metric_from_dict(metric), {region_or_default(region), grid, grid})));
      },
      py::arg("metric"), py::arg("region") = std::vector<double>{}, py::arg("grid") = 41,
      "Dependence label of the Lamé functions.");

  m.def(
      "curvature_constant",
      [](const py::dict& metric, const std::vector<double>& samples) {
        const k2::CurvatureConstant c = k2::curvature_constant_k(metric_from_dict(metric),
                                                                 samples);
        return py::make_tuple(c.k, c.constant);
      },
      py::arg("metric"), py::arg("samples"),
      "(k, constant) with k = -k2^2 (f1'/f1)'/f1^2 sampled at the given x2 values.");

  m.def(
      "antiderivative",
      [](const std::string& kind, const std::string& source, double anchor, double x) {
        const k2::Antiderivative a(anti_kind_from_name(kind), k2::Expr::parse(source), anchor);
        return k2::antiderivative_eval(a, x);
      },
      py::arg("kind"), py::arg("source"), py::arg("anchor"), py::arg("x"),
      "Anchored antiderivative value by adaptive quadrature.");

  m.def(
      "build_family",
      [](const std::string& family, const py::dict& metric, double k,
         const std::vector<double>& c, double anchor, const std::vector<double>& region) {
        const k2::FamilyCase fc = k2::family_from_name(family);
        k2::FamilyParams params;
        params.k = k;
        params.c = c;
        params.anchor = anchor;
        const k2::VectorField field =
            k2::build_family(fc, params, metric_from_dict(metric), region_or_default(region));
        const k2::FamilyProvenance prov = k2::family_provenance(fc);
        py::dict d;
        d["case"] = family;
        d["field"] = field_to_dict(field);
        py::dict p;
        p["hypothesis"] = prov.hypothesis;
        p["construction"] = prov.construction;
        d["provenance"] = p;
        return d;
      },
      py::arg("family"), py::arg("metric"), py::arg("k") = 0.0,
      py::arg("c") = std::vector<double>{}, py::arg("anchor") = 0.0,
      py::arg("region") = std::vector<double>{},
      "Construct a family member; raises on inadmissible case/metric pairs.");

  m.def(
      "enumerate_basis",
      [](const std::string& family, const py::dict& metric, const std::vector<double>& region) {
        const auto gens = k2::enumerate_basis(k2::family_from_name(family),
                                              metric_from_dict(metric), region_or_default(region));
        py::list out;
        for (const auto& g : gens) out.append(field_to_dict(g));
        return out;
      },
      py::arg("family"), py::arg("metric"), py::arg("region") = std::vector<double>{});

  m.def(
      "grid_check",
      [](const py::dict& metric, const py::dict& field, const std::vector<double>& region,
         int grid, double tol) {
        return grid_report_to_dict(k2::grid_residual_check(
            metric_from_dict(metric), field_from_dict(field), region_or_default(region), grid,
            tol));
      },
      py::arg("metric"), py::arg("field"), py::arg("region") = std::vector<double>{},
      py::arg("grid") = 21, py::arg("tol") = 1e-9);

  m.def(
      "flow_check",
      [](const py::dict& metric, const py::dict& field, const std::vector<double>& start,
         double t, int steps, double tol) {
        if (start.size() != 2) throw k2::InputError("start needs 2 entries");
        return flow_report_to_dict(
            k2::flow_isometry_check(metric_from_dict(metric), field_from_dict(field),
                                    {start[0], start[1]}, t, steps, tol));
      },
      py::arg("metric"), py::arg("field"), py::arg("start") = std::vector<double>{0.2, -0.3},
      py::arg("t") = 0.5, py::arg("steps") = 1000, py::arg("tol") = 1e-6);

  m.def(
      "bundled_examples_report",
      []() {
        py::list results;
        py::list failures;
        bool all = true;
        for (const k2::ExampleFixture& fx : k2::bundled_examples()) {
          const k2::DiagonalMetric m{k2::Expr::parse(fx.f1), k2::Expr::parse(fx.f2)};
          const k2::VectorField v{
              std::string(fx.basis) == "frame" ? k2::Basis::Frame : k2::Basis::Coordinate,
              k2::Expr::parse(fx.v1), k2::Expr::parse(fx.v2)};
          const k2::GridReport grid = k2::grid_residual_check(m, v, {}, 21, 1e-9);
          const k2::FlowReport flow = k2::flow_isometry_check(m, v, {0.5, 0.4}, 0.5, 1000, 1e-6);
          const bool pass = grid.pass && flow.pass;
          all = all && pass;
          if (!pass) failures.append(fx.name);
          py::dict r;
          r["name"] = fx.name;
          r["grid"] = grid_report_to_dict(grid);
          r["flow"] = flow_report_to_dict(flow);
          r["pass"] = pass;
          if (fx.corrected_v1 != nullptr) {
            const k2::VectorField corrected{v.basis, k2::Expr::parse(fx.corrected_v1),
                                            k2::Expr::parse(fx.corrected_v2)};
            r["corrected_field"] = field_to_dict(corrected);
            r["corrected_grid"] =
                grid_report_to_dict(k2::grid_residual_check(m, corrected, {}, 21, 1e-9));
          }
          results.append(r);
        }
        py::dict d;
        d["results"] = results;
        d["failures"] = failures;
        d["pass"] = all;
        return d;
      },
      "Run the bundled example suite and return the report.");
}
