#include <CLI11.hpp>

#include <iostream>

#include "twist/errors.hpp"
#include "twist/pipeline.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"Twisted-electron wavepackets in plane-wave laser pulses"};
  app.require_subcommand(1);
  std::string config, out = "out", figure;
  int threads = 1;
  bool full = false, quiet = false;
  app.add_option("--out", out, "output directory");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", quiet, "no progress output");

  struct Cmd {
    const char* name;
    const char* help;
    std::vector<fs::path> (*run)(const twist::Scenario&, const twist::RunContext&);
  };
  const Cmd cmds[] = {
      {"field", "pulse E(xi) and A(xi)", twist::run_field},
      {"current", "radial current profiles of Bessel and rotated packets", twist::run_current},
      {"simulate", "density snapshots and mean-position series", twist::run_simulate},
      {"observables", "angular momentum at t_in and t_out", twist::run_observables},
      {"classical", "single and averaged classical trajectories", twist::run_classical},
      {"sweep", "angular momentum over the CEP list", twist::run_sweep},
  };
  std::vector<std::pair<CLI::App*, const Cmd*>> subs;
  for (const auto& c : cmds) {
    auto* sc = app.add_subcommand(c.name, c.help);
    sc->add_option("--config", config, "scenario JSON")->required()->check(CLI::ExistingFile);
    sc->add_option("--out", out, "output directory");
    sc->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    subs.emplace_back(sc, &c);
  }
  auto* rep = app.add_subcommand("reproduce", "run a figure preset");
  rep->add_option("figure", figure, "fig2 .. fig7")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig5", "fig6", "fig7"}));
  rep->add_flag("--full", full, "full-resolution grids");
  rep->add_option("--out", out, "output directory");
  rep->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  twist::RunContext ctx;
  ctx.out = out;
  ctx.threads = threads;
  ctx.quiet = quiet;
  try {
    std::vector<fs::path> files;
    if (rep->parsed()) {
      files = twist::reproduce(figure, full, ctx);
    } else {
      for (auto& [sc, cmd] : subs)
        if (sc->parsed()) files = cmd->run(twist::load_scenario(config), ctx);
    }
    for (const auto& f : files) std::cout << f.string() << "\n";
  } catch (const twist::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const twist::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const twist::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
