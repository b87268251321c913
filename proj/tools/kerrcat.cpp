// kerrcat command-line front end: scenario files in, CSV tables and JSON sidecars out.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "kerrcat/runner.hpp"

namespace fs = std::filesystem;
using namespace kerrcat;

namespace {

constexpr int kExitOther = 1, kExitConfig = 2, kExitPartial = 3, kExitResource = 4;

fs::path preset_dir() {
  if (const char* env = std::getenv("KERRCAT_PRESETS")) return env;
#ifdef KERRCAT_PRESET_DIR
  return KERRCAT_PRESET_DIR;
#else
  return "presets";
#endif
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  std::error_code ec;
  for (const auto& e : fs::directory_iterator(preset_dir(), ec))
    if (e.path().extension() == ".ini") names.push_back(e.path().stem().string());
  std::sort(names.begin(), names.end());
  return names;
}

/// A path, or the name of a shipped preset.
fs::path locate(const std::string& arg) {
  if (fs::exists(arg)) return arg;
  const fs::path p = preset_dir() / (arg + ".ini");
  if (fs::exists(p)) return p;
  throw Error(ErrorKind::Config, "no scenario file or preset named '" + arg + "'");
}

int run_jobs(const std::vector<Job>& jobs, const std::string& out_flag, int n_jobs) {
  bool partial = false;
  for (const auto& job : jobs) {
    const fs::path dir = out_flag.empty() ? fs::path(job.scenario.out_dir) : fs::path(out_flag);
    const JobReport rep = execute(job, dir, n_jobs);
    for (const auto& f : rep.files) std::cout << f.string() << "\n";
    if (rep.failures > 0)
      std::cerr << rep.stem << ": " << rep.failures << " of " << rep.points << " points failed\n";
    partial = partial || too_many_failures(rep);
  }
  return partial ? kExitPartial : 0;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    std::cerr << "kerrcat: " << e.what() << "\n";
    if (e.kind() == ErrorKind::Config) return kExitConfig;
    if (e.kind() == ErrorKind::Resource) return kExitResource;
    return kExitOther;
  } catch (const std::exception& e) {
    std::cerr << "kerrcat: " << e.what() << "\n";
    return kExitOther;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kerr-cat qubit simulator"};
  app.require_subcommand(1);

  std::string file, out_dir, sidecar;
  std::vector<std::string> overrides;
  int n_jobs = default_jobs();
  std::string chosen;

  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name, "run a " + name + " scenario");
    sub->add_option("scenario", file, "scenario file or preset name")->required();
    sub->add_option("--set", overrides, "override section.key=value")->allow_extra_args(false);
    sub->add_option("--jobs", n_jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "output directory");
    sub->callback([&chosen, name] { chosen = name; });
  }
  auto* replay = app.add_subcommand("replay", "rerun the scenario recorded in a JSON sidecar");
  replay->add_option("sidecar", sidecar, "sidecar written by a previous run")->required()->check(CLI::ExistingFile);
  replay->add_option("--jobs", n_jobs, "worker threads")->check(CLI::PositiveNumber);
  replay->add_option("--out", out_dir, "output directory");
  replay->callback([&chosen] { chosen = "replay"; });
  auto* presets = app.add_subcommand("presets", "list shipped scenario presets");
  presets->callback([&chosen] { chosen = "presets"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (chosen == "presets") {
    return guarded([] {
      for (const auto& n : preset_names()) {
        const auto raw = load_scenario((preset_dir() / (n + ".ini")).string());
        std::cout << n << "\t" << raw.get("scenario", "command").value_or("?") << "\n";
      }
      return 0;
    });
  }
  if (chosen == "replay") {
    return guarded([&] {
      std::ifstream in(sidecar);
      nlohmann::json meta;
      try {
        meta = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Config, std::string("cannot parse sidecar: ") + e.what());
      }
      if (!meta.contains("scenario") || !meta.contains("stem"))
        throw Error(ErrorKind::Config, "sidecar has no recorded scenario");
      Job job;
      job.variant = meta.value("variant", "");
      job.scenario = resolve(raw_from_json(meta["scenario"]));
      check_scenario(job.scenario);
      job.stem = meta["stem"].get<std::string>();
      return run_jobs({job}, out_dir, n_jobs);
    });
  }
  return guarded([&] {
    const auto jobs = plan_jobs(load_scenario(locate(file).string()), chosen, overrides);
    return run_jobs(jobs, out_dir, n_jobs);
  });
}
