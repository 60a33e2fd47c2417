#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "sulfation/io.hpp"

namespace fs = std::filesystem;
using namespace sulfation;

namespace {

std::ofstream open_artifact(const fs::path& dir, const std::string& name) {
  std::ofstream out(dir / name);
  if (!out) throw SolverError(ErrorCode::Io, "cannot write " + (dir / name).string());
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

void write_snapshots(const GeometryRun& run, const fs::path& dir) {
  for (const GeometrySnapshot& snap : run.snapshots) {
    char tag[32];
    std::snprintf(tag, sizeof tag, "%05d", snap.time_index);
    write_field(*run.domain, snap.state.s, dir / ("s_step" + std::string(tag) + ".csv"));
    write_field(*run.domain, snap.state.c, dir / ("c_step" + std::string(tag) + ".csv"));
  }
  std::ofstream out = open_artifact(dir, "contours.csv");
  write_contours_csv(run, out);
  std::ofstream trace = open_artifact(dir, "newton_trace.csv");
  run.trace.write_csv(trace);
}

GeometryOptions geometry_options(const RunConfig& cfg) {
  GeometryOptions opt;
  opt.N = cfg.N;
  opt.final_time = cfg.t_final;
  opt.snapshot_times = cfg.snapshots;
  opt.s0 = cfg.s0;
  opt.c0 = cfg.c0;
  opt.boundary = cfg.boundary;
  opt.s_boundary = cfg.s_boundary;
  return opt;
}

void run_accuracy_command(const RunConfig& cfg, const fs::path& dir) {
  if (cfg.sizes.empty()) throw SolverError(ErrorCode::InvalidArgument, "accuracy needs at least one size");
  const ManufacturedCase tc = manufactured_case(cfg.test);
  const ErrorReport rep = run_accuracy(tc, cfg.sizes, cfg.params);
  std::ofstream out = open_artifact(dir, "errors_" + tc.name + ".csv");
  write_error_csv(rep, out);
  std::printf("accuracy %s N=%d..%d", tc.name.c_str(), cfg.sizes.front(), cfg.sizes.back());
  if (rep.rows.size() >= 2) {
    std::printf(" order l1_s %.2f l1_c %.2f l1_grad_s %.2f l1_grad_c %.2f", rep.fitted_order("l1_s"),
                rep.fitted_order("l1_c"), rep.fitted_order("l1_grad_s"), rep.fitted_order("l1_grad_c"));
  }
  std::printf(" -> %s\n", (dir / ("errors_" + tc.name + ".csv")).string().c_str());
}

void run_efficiency_command(const RunConfig& cfg, const fs::path& dir) {
  ReactionCase tc = reaction_case(cfg.test);
  tc.s0 = cfg.s0;
  tc.c0 = cfg.c0;
  tc.s_boundary = cfg.s_boundary;
  const EfficiencyReport rep = run_efficiency(tc, cfg.N, cfg.params);
  std::ofstream out = open_artifact(dir, "rho_trace.csv");
  write_rho_csv(rep, out);
  std::ofstream trace = open_artifact(dir, "newton_trace.csv");
  rep.trace.write_csv(trace);
  std::printf("efficiency %s N=%d cycles %zu median rho %.3f max newton %d -> %s\n", tc.name.c_str(), cfg.N,
              rep.rho.size(), median(post_warmup_rho(rep, 3)), rep.max_newton_iterations,
              (dir / "rho_trace.csv").string().c_str());
}

void run_geometry_command(const RunConfig& cfg, const fs::path& dir) {
  if (cfg.image.empty()) throw SolverError(ErrorCode::InvalidArgument, "geometry needs an image");
  GeometryOptions opt = geometry_options(cfg);
  opt.boundary = BoundaryKind::Dirichlet;
  opt.half_width = cfg.half_width > 0.0 ? cfg.half_width : 1.0;
  const GeometryRun run = run_geometry(read_image(cfg.image), opt, cfg.params);
  write_snapshots(run, dir);
  std::printf("geometry %s N=%d snapshots %zu -> %s\n", cfg.image.c_str(), cfg.N, run.snapshots.size(),
              dir.string().c_str());
}

void run_solve_command(const RunConfig& cfg, const fs::path& dir) {
  const GeometryOptions opt = geometry_options(cfg);
  LevelSetField phi = [&] {
    if (cfg.levelset == "image") {
      if (cfg.image.empty()) throw SolverError(ErrorCode::InvalidArgument, "levelset = image needs an image");
      const CartesianGrid grid(cfg.half_width > 0.0 ? cfg.half_width : 1.0, cfg.N);
      return image_to_levelset(read_image(cfg.image), grid);
    }
    const CartesianGrid grid(cfg.half_width > 0.0 ? cfg.half_width : 2.0, cfg.N);
    if (cfg.levelset == "circle") return LevelSetField::sample(grid, circle_levelset);
    if (cfg.levelset == "square_discs") return LevelSetField::sample(grid, square_discs_levelset);
    throw SolverError(ErrorCode::InvalidArgument, "unknown level set '" + cfg.levelset + "'");
  }();
  const GeometryRun run = run_levelset(std::move(phi), opt, cfg.params);
  write_snapshots(run, dir);
  std::printf("solve %s N=%d t=%g snapshots %zu -> %s\n", cfg.levelset.c_str(), cfg.N, cfg.t_final,
              run.snapshots.size(), dir.string().c_str());
}

void execute(const RunConfig& cfg) {
  const fs::path dir = output_directory(cfg.output);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw SolverError(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  if (cfg.command == "accuracy") return run_accuracy_command(cfg, dir);
  if (cfg.command == "efficiency") return run_efficiency_command(cfg, dir);
  if (cfg.command == "geometry") return run_geometry_command(cfg, dir);
  if (cfg.command == "solve") return run_solve_command(cfg, dir);
  throw SolverError(ErrorCode::InvalidArgument, "unknown command '" + cfg.command + "'");
}

void add_model_options(CLI::App& cmd, RunConfig& cfg) {
  cmd.add_option("--a", cfg.params.a, "reaction rate")->capture_default_str();
  cmd.add_option("--d", cfg.params.d, "diffusivity")->capture_default_str();
  cmd.add_option("--m-s", cfg.params.m_s, "molar mass of SO2")->capture_default_str();
  cmd.add_option("--m-c", cfg.params.m_c, "molar mass of CaCO3")->capture_default_str();
  cmd.add_option("--alpha", cfg.params.alpha, "porosity slope")->capture_default_str();
  cmd.add_option("--beta", cfg.params.beta, "porosity offset")->capture_default_str();
  cmd.add_option("--s-b", cfg.s_boundary, "boundary value of s (or flux for neumann)")->capture_default_str();
  cmd.add_option("--c0", cfg.c0, "initial c")->capture_default_str();
  cmd.add_option("--s0", cfg.s0, "initial s")->capture_default_str();
  cmd.add_option("-o,--output", cfg.output, "output directory (SULFATION_OUTPUT_DIR overrides)")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Marble sulfation solver on level-set domains"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;

  CLI::App* acc = app.add_subcommand("accuracy", "convergence study against the exact pair");
  acc->add_option("--test", cfg.test, "1, 2, 1n or 2n")->required();
  std::string sizes = "16,32,64";
  acc->add_option("--sizes", sizes, "comma-separated grid sizes")->capture_default_str();
  add_model_options(*acc, cfg);

  CLI::App* eff = app.add_subcommand("efficiency", "multigrid convergence factors on the reaction tests");
  eff->add_option("--test", cfg.test, "3 or 4")->required();
  eff->add_option("-N,--N", cfg.N, "grid intervals")->capture_default_str();
  add_model_options(*eff, cfg);

  std::string snapshots = "0.25,0.5,0.75,1";
  CLI::App* geo = app.add_subcommand("geometry", "march on a domain read from an image");
  geo->add_option("--image", cfg.image, "PGM or PNG file")->required()->check(CLI::ExistingFile);
  geo->add_option("-N,--N", cfg.N, "grid intervals")->capture_default_str();
  geo->add_option("--snapshots", snapshots, "comma-separated output times")->capture_default_str();
  geo->add_option("--half-width", cfg.half_width, "half width of the box (default 1)");
  geo->add_option("--t-final", cfg.t_final, "final time")->capture_default_str();
  add_model_options(*geo, cfg);

  CLI::App* sol = app.add_subcommand("solve", "free-form run");
  sol->add_option("--levelset", cfg.levelset, "circle, square_discs or image")->capture_default_str();
  sol->add_option("--image", cfg.image, "image for levelset = image")->check(CLI::ExistingFile);
  sol->add_option("-N,--N", cfg.N, "grid intervals")->capture_default_str();
  std::string boundary = "dirichlet";
  sol->add_option("--boundary", boundary, "dirichlet or neumann")
      ->check(CLI::IsMember({"dirichlet", "neumann"}))
      ->capture_default_str();
  sol->add_option("--t-final", cfg.t_final, "final time")->capture_default_str();
  sol->add_option("--snapshots", snapshots, "comma-separated output times")->capture_default_str();
  sol->add_option("--half-width", cfg.half_width, "half width of the box (default 2, 1 for images)");
  add_model_options(*sol, cfg);

  CLI::App* run = app.add_subcommand("run", "run the command described by an INI file");
  run->add_option("config", config_path, "configuration file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      cfg = load_config(config_path);
    } else {
      cfg.command = app.get_subcommands().front()->get_name();
      cfg.sizes = parse_int_list(sizes);
      cfg.snapshots = parse_double_list(snapshots);
      cfg.boundary = boundary == "neumann" ? BoundaryKind::Neumann : BoundaryKind::Dirichlet;
      cfg.params.validate();
    }
    execute(cfg);
  } catch (const SolverError& e) {
    std::cerr << "sulfation: " << e.what() << '\n';
    return e.code() == ErrorCode::ConfigParse || e.code() == ErrorCode::InvalidArgument ? 2 : 1;
  }
  return 0;
}
