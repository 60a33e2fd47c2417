#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sulfation/harness.hpp"

namespace sulfation {

/// Node record of a field dump; `value` is NaN for inactive nodes.
struct FieldDump {
  int N = 0;
  double L = 0.0;
  double h = 0.0;
  std::vector<NodeClass> classes;  // j-major lattice order
  std::vector<double> values;
};

/// Header line "N,L,h", its values, then "i,j,x,y,class,value" with one record
/// per lattice node in j-major order. Inactive nodes leave the value empty.
void write_field(const Domain& domain, const std::vector<double>& rows, std::ostream& out);
void write_field(const Domain& domain, const std::vector<double>& rows, const std::filesystem::path& path);
FieldDump read_field(std::istream& in);
FieldDump read_field(const std::filesystem::path& path);

void write_error_csv(const ErrorReport& report, std::ostream& out);
void write_rho_csv(const EfficiencyReport& report, std::ostream& out);
/// Columns t, polyline_id, x, y; closed polylines repeat their first point.
void write_contours_csv(const GeometryRun& run, std::ostream& out);

/// 17 significant digits, enough to read back the same double.
std::string format_double(double v);

/// Settings of one CLI run, loaded from an INI file or assembled from flags.
struct RunConfig {
  std::string command;  // accuracy | efficiency | geometry | solve
  ModelParams params;
  double s_boundary = 1.0;
  double c0 = 10.0;
  double s0 = 0.0;

  std::string test;        // accuracy: 1|2|1n|2n, efficiency: 3|4
  std::vector<int> sizes;  // accuracy
  int N = 64;
  std::string image;                                  // geometry, or solve with levelset = image
  std::vector<double> snapshots{0.25, 0.5, 0.75, 1.0};  // geometry, solve
  std::string levelset = "circle";                    // solve: circle | square_discs | image
  BoundaryKind boundary = BoundaryKind::Dirichlet;    // solve
  double t_final = 1.0;                               // solve
  double half_width = 0.0;                            // 0 picks 2 for analytic shapes, 1 for images
  std::string output = "sulfation_out";
};

/// Sections [model] (a, d, m_s, m_c, alpha, beta, s_b, c0, s0) and [run]
/// (command, test, sizes, N, image, snapshots, levelset, boundary, t_final,
/// half_width, output). Errors carry the offending line number.
RunConfig load_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

/// SULFATION_OUTPUT_DIR when set, otherwise `configured`.
std::filesystem::path output_directory(const std::string& configured);

std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

}  // namespace sulfation
