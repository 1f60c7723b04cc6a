#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "bendlab/experiments.hpp"

namespace {

int run(const std::string& command, const std::string& config_path, const std::string& out_path,
        std::optional<std::uint64_t> seed) {
  using namespace bendlab;
  const io::json config = io::read_json(config_path);
  CommandResult res;
  if (command == "counterexample") {
    res = cmd_counterexample(config);
  } else if (command == "converge") {
    res = cmd_converge(config);
  } else if (command == "bounds") {
    res = cmd_bounds(config, seed);
  } else if (command == "approx-sweep") {
    res = cmd_approx_sweep(config);
  } else {
    res = cmd_render(config);
  }
  if (res.svg) {
    io::write_atomic(out_path, *res.svg);
  } else {
    io::write_atomic(out_path, res.table.to_csv());
    io::write_atomic(out_path + ".summary.json", res.summary.dump(2) + "\n");
  }
  for (const auto& a : res.assertions) {
    std::cout << (a.pass ? "PASS " : "FAIL ") << a.name;
    if (!a.detail.empty()) std::cout << " (" << a.detail << ")";
    std::cout << "\n";
  }
  return res.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bending deformations of surface group representations"};
  app.require_subcommand(1);
  std::string config, out;
  std::optional<std::uint64_t> seed;
  for (const char* name : {"counterexample", "converge", "bounds", "approx-sweep", "render"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON experiment config")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output CSV (SVG for render)")->required();
    sub->add_option("--seed", seed, "override the config seed");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, config, out, seed);
  } catch (const std::exception& e) {
    std::cerr << "bendlab " << command << ": " << e.what() << "\n";
    return 2;
  }
}
