#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "weyllab/error.hpp"
#include "weyllab/experiment.hpp"
#include "weyllab/io.hpp"

using namespace weyllab;

namespace {

struct Flags {
  std::string config;
  std::string out;
  unsigned threads = 1;
  double tol = 0.0;
  bool dump_config = false;
  std::string space;
  double exponent = 0.0;
  double length = 0.0;
  int levels = 0;
  int dim = 0;
  std::string method;
  double lambda_max = 0.0;
  int grid = 0;
  std::string atoms;
  std::string family;
  double gamma = 0.0;
  double point = 0.0;
  std::size_t modes = 0;
  std::size_t nodes = 0;
  std::string s_grid, t_grid, lambda_grid;
};

ModelSpace default_space(const std::string& kind) {
  if (kind == "interval") return WeightedInterval{};
  if (kind == "circle") return Circle{};
  if (kind == "tower") return SuspensionTower{2, 0.0};
  if (kind == "gaussian") return Gaussian{2};
  throw Error(ErrorCode::config, "--space must be interval, circle, tower or gaussian");
}

void apply_space_flags(ExperimentConfig& c, const Flags& f, const CLI::App& app) {
  if (app.count("--space")) c.space = default_space(f.space);
  auto reject = [](const char* flag) {
    throw Error(ErrorCode::config, std::string(flag) + " does not apply to this space");
  };
  if (app.count("--exponent")) {
    if (auto* w = std::get_if<WeightedInterval>(&c.space)) w->exponent = f.exponent;
    else if (auto* t = std::get_if<SuspensionTower>(&c.space)) t->base_exponent = f.exponent;
    else reject("--exponent");
  }
  if (app.count("--length")) {
    if (auto* s = std::get_if<Circle>(&c.space)) s->length = f.length;
    else reject("--length");
  }
  if (app.count("--levels")) {
    if (auto* t = std::get_if<SuspensionTower>(&c.space)) t->levels = f.levels;
    else reject("--levels");
  }
  if (app.count("--dim")) {
    if (auto* g = std::get_if<Gaussian>(&c.space)) g->dim = f.dim;
    else reject("--dim");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for Weyl's law on model metric measure spaces"};
  app.require_subcommand(1);
  Flags f;

  app.add_option("--config", f.config, "JSON experiment configuration");
  app.add_option("--out", f.out, "output directory");
  app.add_option("--threads", f.threads, "worker threads (0 = hardware)");
  app.add_option("--tol", f.tol, "primary tolerance of the subcommand");
  app.add_flag("--dump-config", f.dump_config, "print the resolved configuration and exit");
  app.add_option("--space", f.space, "interval | circle | tower | gaussian");
  app.add_option("--exponent", f.exponent, "weight exponent p (interval, tower base)");
  app.add_option("--length", f.length, "circle length L");
  app.add_option("--levels", f.levels, "tower levels n");
  app.add_option("--dim", f.dim, "Gaussian dimension n");
  app.add_option("--method", f.method, "oracle | fd | prufer | suspension");
  app.add_option("--lambda-max", f.lambda_max, "spectral cutoff");
  app.add_option("--grid", f.grid, "finite-difference grid nodes");
  app.add_option("--atoms", f.atoms, "atomic measure CSV (position,mass)");
  app.add_option("--family", f.family, "squares | linear | lacunary | dirac");
  app.add_option("--gamma", f.gamma, "Tauberian exponent");
  app.add_option("--point", f.point, "heat kernel point");
  app.add_option("--modes", f.modes, "eigenmodes in heat kernel sums");
  app.add_option("--nodes", f.nodes, "resolution nodes");
  app.add_option("--s-grid", f.s_grid, "start:stop:count[:linear|log]");
  app.add_option("--t-grid", f.t_grid, "start:stop:count[:linear|log]");
  app.add_option("--lambda-grid", f.lambda_grid, "start:stop:count[:linear|log]");

  for (const char* name : {"spectrum", "heat", "tauberian", "criterion", "weyl"}) {
    app.add_subcommand(name)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    ExperimentConfig c;
    if (!f.config.empty()) c = config_from_text(read_text_file(f.config));
    c.command = command_from_name(app.get_subcommands().front()->get_name());
    apply_space_flags(c, f, app);
    if (app.count("--out")) c.output = f.out;
    if (app.count("--threads")) c.threads = f.threads;
    if (app.count("--method")) c.method = method_from_name(f.method);
    if (app.count("--lambda-max")) c.lambda_max = f.lambda_max;
    if (app.count("--grid")) c.fd_nodes = f.grid;
    if (app.count("--atoms")) c.atoms = f.atoms;
    if (app.count("--family")) c.family = f.family;
    if (app.count("--gamma")) c.gamma = f.gamma;
    if (app.count("--point")) c.point = f.point;
    if (app.count("--modes")) c.modes = f.modes;
    if (app.count("--nodes")) c.nodes = f.nodes;
    if (app.count("--s-grid")) c.s_grid = parse_grid_spec(f.s_grid);
    if (app.count("--t-grid")) c.t_grid = parse_grid_spec(f.t_grid);
    if (app.count("--lambda-grid")) c.lambda_grid = parse_grid_spec(f.lambda_grid);
    if (app.count("--tol")) {
      switch (c.command) {
        case Command::criterion: c.tolerances.criterion = f.tol; break;
        case Command::weyl: c.tolerances.consistency = f.tol; break;
        case Command::tauberian: c.tolerances.audit = f.tol; break;
        case Command::heat: c.tolerances.heat = f.tol; break;
        case Command::spectrum: break;
      }
    }
    c.validate();

    if (f.dump_config) {
      std::cout << dump_json(config_to_json(c)) << '\n';
      return 0;
    }
    const RunResult result = run_experiment(c);
    std::cout << result.summary << '\n';
    for (const auto& file : result.files) std::cout << "  wrote " << file.string() << '\n';
    return result.status;
  } catch (const Error& e) {
    std::cerr << "weyl-lab: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "weyl-lab: internal error: " << e.what() << '\n';
    return 1;
  }
}
