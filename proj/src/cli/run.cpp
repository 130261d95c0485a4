#include "bohm/cli/run.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "bohm/cli/presets.hpp"

namespace bohm::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os << contents;
  os.close();
  if (!os) throw IoError("failed writing '" + path.string() + "'");
}

json read_config_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("config: cannot read file '" + path + "'");
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw ValidationError("config: invalid JSON in '" + path + "': " + e.what());
  }
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& log) {
  const fs::path dir(cfg.out);
  json manifest = {{"config", to_json(cfg)}, {"seed", cfg.seed}, {"version", kVersion}};

  ReportBundle bundle;
  int code = kSuccess;
  try {
    bundle = run_preset(cfg);
    if (!bundle.valid) code = kInvalidRun;
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    bundle = {};
    bundle.valid = false;
    bundle.report = {{"preset", cfg.preset}, {"seed", cfg.seed}, {"version", kVersion},
                     {"status", "failed"}, {"error", e.what()}};
    code = kInvalidRun;
  }

  try {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    write_file(dir / "report.json", bundle.report.dump(2) + "\n");
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    for (const auto& [name, contents] : bundle.files) write_file(dir / name, contents);
  } catch (const IoError& e) {
    log << "error: " << e.what() << "\n";
    return kIoError;
  }

  log << cfg.preset << ": status=" << bundle.report.value("status", "unknown") << ", bundle in "
      << dir.string() << "\n";
  return code;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bohmian trajectory simulations: ergodicity of the coupled-oscillator model and "
               "joint detection in the two-slit interferometer."};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", kVersion);

  std::string preset;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> members;
  std::optional<double> h, T, delta0, sigma0, x0;
  std::vector<double> d1, d2;
  std::optional<std::string> out_dir;
  bool emit = false;

  std::string preset_list;
  for (const auto& p : kPresets) preset_list += (preset_list.empty() ? "" : ", ") + p;
  app.add_option("--preset", preset, "Pipeline to run: " + preset_list);
  app.add_option("--config", config_path, "JSON config file (keys listed below)");
  app.add_option("--seed", seed, "RNG seed (key: seed)");
  app.add_option("--members", members, "Ensemble size (key: members)");
  app.add_option("--h", h, "Integrator step (key: h)");
  app.add_option("--T", T, "Horizon (key: T)");
  app.add_option("--delta0", delta0, "Launch x-offset width (key: interferometer.delta0)");
  app.add_option("--sigma0", sigma0, "Launch y-sum width (key: interferometer.sigma0)");
  app.add_option("--x0", x0, "Detection plane (key: detectors.x0)");
  app.add_option("--d1", d1, "Detector D1 interval lo,hi (key: detectors.d1)")->expected(2)->delimiter(',');
  app.add_option("--d2", d2, "Detector D2 interval lo,hi (key: detectors.d2)")->expected(2)->delimiter(',');
  app.add_option("--out", out_dir, "Output directory (key: out)");
  app.add_flag("--emit-trajectories", emit, "Write trajectories.csv for member 0 (key: emit_trajectories)");
  app.footer(describe_keys() +
             "Exit codes: 0 success, 1 invalid run, 2 validation error, 3 I/O error.\n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kValidationError;
  }

  RunConfig cfg;
  try {
    json file = json::object();
    if (!config_path.empty()) file = read_config_file(config_path);
    if (!file.is_object()) throw ValidationError("config: expected a JSON object at top level");
    std::string name = preset;
    if (name.empty() && file.contains("preset")) {
      if (!file["preset"].is_string()) throw ValidationError("preset: expected a string");
      name = file["preset"].get<std::string>();
    }
    if (name.empty()) throw ValidationError("preset: required (--preset or config key preset)");
    cfg = preset_defaults(name);
    apply_json(cfg, file);
    cfg.preset = name;

    if (seed) cfg.seed = *seed;
    if (members) cfg.members = *members;
    if (h) cfg.h = *h;
    if (T) cfg.T = *T;
    if (delta0) cfg.interferometer.delta0 = *delta0;
    if (sigma0) cfg.interferometer.sigma0 = *sigma0;
    if (x0) cfg.detectors.x0 = *x0;
    if (!d1.empty()) cfg.detectors.d1 = {d1.at(0), d1.at(1)};
    if (!d2.empty()) cfg.detectors.d2 = {d2.at(0), d2.at(1)};
    if (out_dir) cfg.out = *out_dir;
    if (emit) cfg.emit_trajectories = true;
    validate(cfg);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  }

  try {
    return run(cfg, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  }
}

}  // namespace bohm::cli
