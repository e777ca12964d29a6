#include <cstdio>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "qplab/parallel.hpp"
#include "qplab_cli/run.hpp"

int main(int argc, char** argv) {
  using namespace qplab::cli;
  CLI::App app{"qplab: quasiperiodic Schrodinger operator lab"};
  app.set_version_flag("--version", std::string("qplab ") + QPLAB_VERSION);
  std::string command, config_path, out_dir = "qplab_out";
  unsigned threads = 0;
  app.add_option("command", command, "butterfly | profile | classify | dual | spectrum | kotani | cohomology")
      ->required()
      ->check(CLI::IsMember(commands()));
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads (default: QPLAB_THREADS, else all cores)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  qplab::set_thread_count(threads);

  std::ifstream in(config_path);
  if (!in) {
    std::fprintf(stderr, "qplab: cannot read config %s\n", config_path.c_str());
    return kExitConfig;
  }
  std::stringstream text;
  text << in.rdbuf();
  try {
    const RunConfig cfg = parse_config_text(text.str(), command);
    return run(cfg, out_dir);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "qplab: config error at %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "qplab: %s\n", e.what());
    return exit_code_for(e);
  }
}
