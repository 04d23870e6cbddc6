#include <iostream>

#include <CLI11.hpp>

#include "neqforce/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Non-equilibrium Casimir forces between spheres and plates"};
  app.require_subcommand(1);
  neqforce::CommandLine cl;
  std::string out;
  int threads = 0;
  double rel_tol = 0.0;

  const auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", cl.config, "Run configuration (JSON)")->required();
    sub->add_option("--out", out, "Output file");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--rel-tol", rel_tol, "Relative quadrature tolerance")->check(CLI::PositiveNumber);
    sub->callback([&cl, name] { cl.command = name; });
  };
  add("curve", "Force curve over the separation grid (CSV)");
  add("equilibria", "Zero crossings of the total force with stability (JSON)");
  add("spp", "Self-propelled pairs of two spheres (JSON)");
  add("validate", "Closed-form oracle suite (JSON); exit 1 on any failure");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : neqforce::kExitConfigError;
  }
  if (!out.empty()) cl.out = out;
  if (threads > 0) cl.threads = threads;
  if (rel_tol > 0.0) cl.rel_tol = rel_tol;
  return neqforce::run_command(cl, std::cerr);
}
