#include <fmt/core.h>
#include <omp.h>

#include <CLI11.hpp>
#include <cstdlib>

#include "greenop/commands.hpp"

int main(int argc, char** argv) {
  using namespace greenop::cli;
  CLI::App app{"Space-time Green operators and their estimates"};
  app.require_subcommand(1);
  std::string manifest_path, out_dir;
  int threads = 0;
  for (const char* name : commands) {
    auto* sub = app.add_subcommand(name, fmt::format("run the {} pipeline", name));
    sub->add_option("--manifest", manifest_path, "run manifest (JSON)")->required();
    sub->add_option("--threads", threads, "OpenMP threads; GREENOP_THREADS takes precedence")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "output directory; overrides the manifest");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : bad_input;
  }
  if (const char* env = std::getenv("GREENOP_THREADS")) {
    try {
      threads = std::stoi(env);
    } catch (const std::exception&) {
      fmt::print(stderr, "greenop: GREENOP_THREADS must be an integer\n");
      return bad_input;
    }
  }
  if (threads > 0) omp_set_num_threads(threads);

  const std::string command = app.get_subcommands().front()->get_name();
  RunManifest m;
  try {
    m = load_manifest(manifest_path);
  } catch (const SchemaError& e) {
    fmt::print(stderr, "greenop: {}\n", e.what());
    return bad_input;
  }
  if (m.command != command) {
    fmt::print(stderr, "greenop: manifest is for '{}', not '{}'\n", m.command, command);
    return bad_input;
  }
  if (!out_dir.empty()) m.out = out_dir;
  const int status = run(m);
  fmt::print("{} {} -> {}\n", command, status == ok ? "pass" : "fail", (m.out / "summary.json").string());
  return status;
}
