#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bdsmp/bdsmp.hpp"

namespace {

template <class T>
std::vector<T> split(const std::string& s) {
  std::vector<T> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::istringstream is(item);
    T v;
    if (!(is >> v) || !is.eof()) bdsmp::fail(bdsmp::Errc::invalid_argument, "cannot parse list item '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perturbed birth-death semi-Markov chains: expansions, exact distributions, simulation"};
  bdsmp::RunConfig cfg;
  std::string eps, states;
  app.add_option("--model", cfg.model, "JSON model descriptor");
  app.add_option("--preset", cfg.preset, "preset model (fig1..fig7b); for reproduce, a figure or 'all'");
  app.add_option("--command", cfg.command, "expand | exact | compare | simulate | reproduce")
      ->check(CLI::IsMember({"expand", "exact", "compare", "simulate", "reproduce"}));
  app.add_option("--L", cfg.L, "expansion length");
  app.add_option("--eps", eps, "comma separated eps values");
  app.add_option("--states", states, "comma separated state filter");
  app.add_option("--out", cfg.out, "output file (directory for reproduce)");
  app.add_option("--seed", cfg.seed, "simulation seed");
  app.add_option("--horizon", cfg.horizon, "simulation horizon");
  app.add_option("--reps", cfg.reps, "replications");
  app.add_option("--kind", cfg.kind, "compare target: stationary | quasi | auto");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    if (!eps.empty()) cfg.eps = split<double>(eps);
    if (!states.empty()) cfg.states = split<int>(states);
    if (cfg.command == "reproduce") {
      for (const auto& p : bdsmp::cmd_reproduce(cfg)) std::cout << p << '\n';
      return 0;
    }
    if (cfg.out.empty()) {
      bdsmp::run_command(cfg, std::cout);
    } else {
      // render fully before touching the output path
      std::ostringstream buf;
      bdsmp::run_command(cfg, buf);
      const std::string tmp = cfg.out + ".tmp";
      {
        std::ofstream os(tmp);
        if (!(os << buf.str())) bdsmp::fail(bdsmp::Errc::io_error, "cannot write '" + tmp + "'");
      }
      if (std::rename(tmp.c_str(), cfg.out.c_str()) != 0) bdsmp::fail(bdsmp::Errc::io_error, "cannot write '" + cfg.out + "'");
    }
  } catch (const bdsmp::Error& e) {
    std::cerr << "bdsmp: " << e.what() << '\n';
    return bdsmp::exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "bdsmp: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
