#include <CLI11.hpp>

#include "tsbvp/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"tsbvp: p-Laplacian boundary value problems on time scales"};
  tsbvp::RunConfig cfg;
  std::string command;
  std::string out = ".";
  double xi = 0.0, x_small = 0.0, x_large = 0.0;

  app.add_option("command", command, "check | sample-lw | solve | all")
      ->required()
      ->check(CLI::IsMember({"check", "sample-lw", "solve", "all"}));
  auto* preset = app.add_option("--preset", cfg.preset, "example1 | example2 | example3");
  auto* config = app.add_option("--config", cfg.config_path, "problem description (JSON)");
  preset->excludes(config);
  app.add_option("--out", out, "output directory");
  app.add_option("--tol", cfg.tol, "Picard residual target");
  app.add_option("--hmax", cfg.hmax, "max spacing inside intervals");
  app.add_option("--seed", cfg.seed, "sampling seed");
  app.add_option("--nsamples", cfg.nsamples, "samples per cone region");
  auto* xi_opt = app.add_option("--xi", xi, "window parameter of the concave functional");
  auto* xs_opt = app.add_option("--x-small", x_small, "upper end of the small-x ladder for limit checks");
  auto* xl_opt = app.add_option("--x-large", x_large, "lower end of the large-x ladder for limit checks");
  app.add_option("--override", cfg.overrides, "key=value, e.g. a=2 or lambda=0.5");
  app.add_flag("--emit-gnuplot", cfg.emit_gnuplot, "write plot.gp next to the solution CSVs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tsbvp::kExitError;
  }

  cfg.command = tsbvp::parse_command(command);
  cfg.out_dir = out;
  if (*xi_opt) cfg.xi = xi;
  if (*xs_opt) cfg.x_small = x_small;
  if (*xl_opt) cfg.x_large = x_large;
  return tsbvp::run(cfg);
}
