#pragma once

#include <optional>
#include <string>
#include <vector>

#include "killing2d/families.hpp"
#include "killing2d/geometry.hpp"
#include "killing2d/verify.hpp"

namespace killing2d {

/// Metric document: {"f1": str, "f2": str} with optional "region"
/// [x1min,x1max,x2min,x2max] and "grid" n. Unknown keys are rejected.
struct MetricDoc {
  DiagonalMetric metric;
  std::optional<Region> region;
  std::optional<int> grid;
};

/// Field document: {"basis": "frame"|"coordinate", "v1": str, "v2": str}.
struct FieldDoc {
  VectorField field;
};

struct FamilyRequest {
  FamilyCase family = FamilyCase::Euclidean;
  FamilyParams params;
  MetricDoc metric;
};

MetricDoc parse_metric_doc(const std::string& json_text);
FieldDoc parse_field_doc(const std::string& json_text);
FamilyRequest parse_family_request(const std::string& json_text);

std::string read_file(const std::string& path);  // throws InputError

/// Deterministic JSON writer: insertion-ordered keys, two-space indentation,
/// floats rendered with up to 17 significant digits so identical inputs
/// produce byte-identical output.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view name);
  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(bool v);
  JsonWriter& value(std::string_view s);
  JsonWriter& value(const char* s) { return value(std::string_view(s)); }
  JsonWriter& value(const std::string& s) { return value(std::string_view(s)); }
  JsonWriter& null();

  std::string take();

 private:
  void prefix();
  void newline_indent();

  std::string out_;
  std::vector<char> stack_;     // '{' or '['
  std::vector<bool> has_item_;
  bool pending_key_ = false;
};

// Report serialization. Every report echoes its inputs for reproducibility.
std::string grid_report_json(const DiagonalMetric& m, const VectorField& v,
                             const GridReport& report);
std::string grid_report_table(const DiagonalMetric& m, const VectorField& v,
                              const GridReport& report);

std::string flow_report_json(const DiagonalMetric& m, const VectorField& v,
                             const FlowReport& report);
std::string flow_report_table(const DiagonalMetric& m, const VectorField& v,
                              const FlowReport& report);

std::string classify_report_json(const DiagonalMetric& m, const Region& region, int grid,
                                 DependenceLabel label);
std::string classify_report_table(const DiagonalMetric& m, const Region& region, int grid,
                                  DependenceLabel label);

std::string family_report_json(const FamilyRequest& request, const VectorField& field);
std::string family_report_table(const FamilyRequest& request, const VectorField& field);

struct ExampleResult {
  std::string name;
  DiagonalMetric metric;
  VectorField field;
  GridReport grid;
  FlowReport flow;
  bool pass = false;
  bool has_corrected = false;
  VectorField corrected;
  GridReport corrected_grid;
};

std::string examples_report_json(const std::vector<ExampleResult>& results);
std::string examples_report_table(const std::vector<ExampleResult>& results);

std::string error_json(const std::string& kind, const std::string& message);

}  // namespace killing2d
