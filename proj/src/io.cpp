#include "sulfation/io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace sulfation {
namespace {

const char* class_name(NodeClass c) {
  switch (c) {
    case NodeClass::Inside: return "inside";
    case NodeClass::Ghost: return "ghost";
    case NodeClass::Inactive: return "inactive";
  }
  return "inactive";
}

NodeClass parse_class(const std::string& s) {
  if (s == "inside") return NodeClass::Inside;
  if (s == "ghost") return NodeClass::Ghost;
  if (s == "inactive") return NodeClass::Inactive;
  throw SolverError(ErrorCode::Io, "unknown node class '" + s + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

template <class T>
bool parse_number(const std::string& text, T& out) {
  const std::string t = trim(text);
  const char* end = t.data() + t.size();
  auto [p, ec] = std::from_chars(t.data(), end, out);
  return ec == std::errc() && p == end;
}

double number_or_throw(const std::string& text, const char* what) {
  double v = 0.0;
  if (!parse_number(text, v)) throw SolverError(ErrorCode::Io, std::string("bad ") + what + " '" + text + "'");
  return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw SolverError(ErrorCode::Io, "cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field(const Domain& domain, const std::vector<double>& rows, std::ostream& out) {
  const CartesianGrid& g = domain.grid();
  const auto& cls = domain.classes();
  if (rows.size() != std::size_t(cls.row_count())) {
    throw SolverError(ErrorCode::DimensionMismatch, "field has " + std::to_string(rows.size()) + " values for " +
                                                        std::to_string(cls.row_count()) + " rows");
  }
  out << "N,L,h\n"
      << g.intervals() << ',' << format_double(g.half_width()) << ',' << format_double(g.spacing()) << '\n'
      << "i,j,x,y,class,value\n";
  for (int j = 0; j <= g.intervals(); ++j) {
    for (int i = 0; i <= g.intervals(); ++i) {
      const NodeClass c = cls.at(i, j);
      out << i << ',' << j << ',' << format_double(g.x(i)) << ',' << format_double(g.y(j)) << ',' << class_name(c)
          << ',';
      if (c != NodeClass::Inactive) out << format_double(rows[std::size_t(cls.row_of(i, j))]);
      out << '\n';
    }
  }
  if (!out) throw SolverError(ErrorCode::Io, "field write failed");
}

void write_field(const Domain& domain, const std::vector<double>& rows, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  write_field(domain, rows, out);
}

FieldDump read_field(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "N,L,h") throw SolverError(ErrorCode::Io, "missing field header");
  FieldDump d;
  if (!std::getline(in, line)) throw SolverError(ErrorCode::Io, "missing grid line");
  const auto head = split(trim(line), ',');
  if (head.size() != 3 || !parse_number(head[0], d.N) || d.N < 1) {
    throw SolverError(ErrorCode::Io, "bad grid line '" + line + "'");
  }
  d.L = number_or_throw(head[1], "L");
  d.h = number_or_throw(head[2], "h");
  if (!std::getline(in, line) || trim(line) != "i,j,x,y,class,value") {
    throw SolverError(ErrorCode::Io, "missing record header");
  }
  const std::size_t n = std::size_t(d.N + 1) * std::size_t(d.N + 1);
  d.classes.assign(n, NodeClass::Inactive);
  d.values.assign(n, std::numeric_limits<double>::quiet_NaN());
  std::size_t count = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = split(trim(line), ',');
    int i = 0, j = 0;
    if (f.size() != 6 || !parse_number(f[0], i) || !parse_number(f[1], j) || i < 0 || j < 0 || i > d.N ||
        j > d.N) {
      throw SolverError(ErrorCode::Io, "bad record '" + line + "'");
    }
    const std::size_t k = std::size_t(j) * std::size_t(d.N + 1) + std::size_t(i);
    d.classes[k] = parse_class(f[4]);
    if (d.classes[k] != NodeClass::Inactive) d.values[k] = number_or_throw(f[5], "value");
    ++count;
  }
  if (count != n) {
    throw SolverError(ErrorCode::Io, "expected " + std::to_string(n) + " records, read " + std::to_string(count));
  }
  return d;
}

FieldDump read_field(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SolverError(ErrorCode::Io, "cannot read " + path.string());
  return read_field(in);
}

void write_error_csv(const ErrorReport& report, std::ostream& out) {
  out << "N,h";
  for (const auto& c : ErrorReport::columns()) out << ',' << c;
  out << ",steps,newton_iterations\n";
  for (const ErrorRow& r : report.rows) {
    out << r.N << ',' << format_double(r.h);
    for (double v : {r.l1_s, r.linf_s, r.l1_c, r.linf_c, r.l1_grad_s, r.linf_grad_s, r.l1_grad_c, r.linf_grad_c}) {
      out << ',' << format_double(v);
    }
    out << ',' << r.steps << ',' << r.newton_iterations << '\n';
  }
}

void write_rho_csv(const EfficiencyReport& report, std::ostream& out) {
  out << "cycle,time_index,newton_iter,cycle_in_system,defect,rho\n";
  for (const RhoRecord& r : report.rho) {
    out << r.cycle << ',' << r.time_index << ',' << r.newton_iter << ',' << r.cycle_in_system << ','
        << format_double(r.defect) << ',' << format_double(r.rho) << '\n';
  }
}

void write_contours_csv(const GeometryRun& run, std::ostream& out) {
  out << "t,polyline_id,x,y\n";
  for (const GeometrySnapshot& snap : run.snapshots) {
    int id = 0;
    for (const Polyline& line : snap.contours) {
      auto emit = [&](Vec2 p) {
        out << format_double(snap.t) << ',' << id << ',' << format_double(p.x) << ',' << format_double(p.y) << '\n';
      };
      for (Vec2 p : line.points) emit(p);
      if (line.closed && !line.points.empty()) emit(line.points.front());
      ++id;
    }
  }
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    int v = 0;
    if (!parse_number(item, v)) throw SolverError(ErrorCode::InvalidArgument, "bad integer '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    double v = 0.0;
    if (!parse_number(item, v)) throw SolverError(ErrorCode::InvalidArgument, "bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

RunConfig load_config(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  // The property tree drops positions, so remember where each key was written.
  std::map<std::string, int> line_of;
  {
    std::istringstream scan(text);
    std::string line, section;
    for (int n = 1; std::getline(scan, line); ++n) {
      const std::string t = trim(line);
      if (t.empty() || t[0] == ';' || t[0] == '#') continue;
      if (t.front() == '[' && t.back() == ']') {
        section = trim(t.substr(1, t.size() - 2));
      } else if (const auto eq = t.find('='); eq != std::string::npos) {
        line_of[section + "." + trim(t.substr(0, eq))] = n;
      }
    }
  }

  boost::property_tree::ptree tree;
  try {
    std::istringstream src(text);
    boost::property_tree::ini_parser::read_ini(src, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw SolverError(ErrorCode::ConfigParse, "line " + std::to_string(e.line()) + ": " + e.message());
  }

  auto fail = [&](const std::string& key, const std::string& why) -> SolverError {
    const auto it = line_of.find(key);
    const std::string where = it == line_of.end() ? key : "line " + std::to_string(it->second) + " (" + key + ")";
    return SolverError(ErrorCode::ConfigParse, where + ": " + why);
  };

  static const std::set<std::string> known = {
      "model.a",        "model.d",        "model.m_s",       "model.m_c",      "model.alpha",  "model.beta",
      "model.s_b",      "model.c0",       "model.s0",        "run.command",    "run.test",     "run.sizes",
      "run.N",          "run.image",      "run.snapshots",   "run.levelset",   "run.boundary", "run.t_final",
      "run.half_width", "run.output"};
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw fail(section, "key outside of a section");
    for (const auto& [key, value] : body) {
      (void)value;
      if (!known.count(section + "." + key)) throw fail(section + "." + key, "unknown key");
    }
  }

  auto number = [&](const std::string& key, double& target) {
    const auto v = tree.get_optional<std::string>(key);
    if (!v) return;
    if (!parse_number(*v, target)) throw fail(key, "expected a number, got '" + *v + "'");
  };
  auto text_of = [&](const std::string& key, std::string& target) {
    if (const auto v = tree.get_optional<std::string>(key)) target = trim(*v);
  };

  RunConfig cfg;
  number("model.a", cfg.params.a);
  number("model.d", cfg.params.d);
  number("model.m_s", cfg.params.m_s);
  number("model.m_c", cfg.params.m_c);
  number("model.alpha", cfg.params.alpha);
  number("model.beta", cfg.params.beta);
  number("model.s_b", cfg.s_boundary);
  number("model.c0", cfg.c0);
  number("model.s0", cfg.s0);
  try {
    cfg.params.validate();
  } catch (const SolverError& e) {
    throw SolverError(ErrorCode::ConfigParse, std::string("[model]: ") + e.what());
  }

  text_of("run.command", cfg.command);
  if (cfg.command.empty()) throw fail("run.command", "missing [run] command");
  static const std::set<std::string> commands = {"accuracy", "efficiency", "geometry", "solve"};
  if (!commands.count(cfg.command)) throw fail("run.command", "unknown command '" + cfg.command + "'");
  text_of("run.test", cfg.test);
  text_of("run.image", cfg.image);
  text_of("run.levelset", cfg.levelset);
  text_of("run.output", cfg.output);
  if (const auto v = tree.get_optional<std::string>("run.N")) {
    if (!parse_number(*v, cfg.N) || cfg.N < 1) throw fail("run.N", "expected a positive integer, got '" + *v + "'");
  }
  if (const auto v = tree.get_optional<std::string>("run.sizes")) {
    try {
      cfg.sizes = parse_int_list(*v);
    } catch (const SolverError&) {
      throw fail("run.sizes", "expected a comma-separated list of integers");
    }
  }
  if (const auto v = tree.get_optional<std::string>("run.snapshots")) {
    try {
      cfg.snapshots = parse_double_list(*v);
    } catch (const SolverError&) {
      throw fail("run.snapshots", "expected a comma-separated list of times");
    }
  }
  if (const auto v = tree.get_optional<std::string>("run.boundary")) {
    const std::string b = trim(*v);
    if (b == "dirichlet") {
      cfg.boundary = BoundaryKind::Dirichlet;
    } else if (b == "neumann") {
      cfg.boundary = BoundaryKind::Neumann;
    } else {
      throw fail("run.boundary", "expected dirichlet or neumann, got '" + b + "'");
    }
  }
  number("run.t_final", cfg.t_final);
  number("run.half_width", cfg.half_width);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SolverError(ErrorCode::ConfigParse, "cannot read " + path.string());
  return load_config(in);
}

std::filesystem::path output_directory(const std::string& configured) {
  if (const char* env = std::getenv("SULFATION_OUTPUT_DIR"); env && *env) return env;
  return configured;
}

}  // namespace sulfation
