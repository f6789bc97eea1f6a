// Command-line driver: mlh <kernel|expand|simulate|solve-pde|compare> --config job.json [--out path]

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "mlh/commands.hpp"
#include "mlh/errors.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

// Writes `text` to `path`, or to stdout when path is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw mlh::ConfigError("cannot open output file \"" + path + "\"");
  f << text;
}

// ("table.csv", "partial_sums") -> "table.partial_sums.csv"
std::string sibling(const std::string& path, const std::string& tag) {
  std::filesystem::path p(path);
  p.replace_extension();
  return p.string() + "." + tag + ".csv";
}

int run(const std::string& command, const Options& opt) {
  const auto cfg = mlh::load_job_config(opt.config, opt.seed);
  std::ostringstream main;
  std::ostringstream diag;
  int code = mlh::kExitOk;
  if (command == "kernel") {
    code = mlh::cmd_kernel(cfg, main);
  } else if (command == "expand") {
    std::ostringstream partial;
    code = mlh::cmd_expand(cfg, main, partial);
    if (opt.out.empty()) {
      main << '\n' << partial.str();
    } else {
      emit(sibling(opt.out, "partial_sums"), partial.str());
    }
  } else if (command == "simulate") {
    std::ostringstream paths;
    code = mlh::cmd_simulate(cfg, main, &paths);
    const auto& file = cfg.simulate->paths_file;
    if (!paths.str().empty()) emit(file.empty() ? sibling(opt.out.empty() ? "simulate" : opt.out, "paths") : file, paths.str());
  } else if (command == "solve-pde") {
    code = mlh::cmd_solve_pde(cfg, main, diag);
  } else {
    code = mlh::cmd_compare(cfg, main);
    if (code == mlh::kExitTolerance) diag << "compare: at least one pair exceeded its tolerance\n";
  }
  emit(opt.out, main.str());
  if (!opt.quiet) std::cerr << diag.str();
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heat kernels, expansions and Monte Carlo for three-layer media"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(MLH_VERSION));
  Options opt;
  std::uint64_t seed = 0;
  for (const char* name : {"kernel", "expand", "simulate", "solve-pde", "compare"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config, "job configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output file (default: stdout)");
    sub->add_option("--seed", seed, "overrides the config seed");
    sub->add_flag("--quiet", opt.quiet, "suppress warnings on stderr");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? mlh::kExitOk : mlh::kExitUsage;
  }
  const auto* sub = app.get_subcommands().front();
  if (sub->count("--seed") > 0) opt.seed = seed;
  mlh::apply_thread_cap_from_env();
  try {
    return run(sub->get_name(), opt);
  } catch (const std::exception& e) {
    // Validation, matching-condition and derivative-order errors all map to the usage code.
    std::cerr << "error: " << e.what() << '\n';
  }
  return mlh::kExitUsage;
}
