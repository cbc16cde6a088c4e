#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lfikit/config.hpp"
#include "lfikit/csv.hpp"
#include "lfikit/errors.hpp"
#include "lfikit/study.hpp"
#include "lfikit/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

void print_error(const std::string& code, const std::string& message) {
    nlohmann::json j;
    j["error"] = {{"code", code}, {"message", message}};
    std::fprintf(stderr, "%s\n", j.dump().c_str());
}

int classify_and_report(const std::exception& e) {
    if (const auto* err = dynamic_cast<const lfikit::Error*>(&e)) {
        print_error(err->code(), err->what());
        return err->code() == "config_invalid" ? kExitConfig : kExitRuntime;
    }
    print_error("internal_error", e.what());
    return kExitRuntime;
}

int cmd_run(const std::string& config_path, bool workers_given, unsigned workers_flag,
            bool outdir_given, const std::string& outdir_flag) {
    lfikit::ExperimentConfig cfg;
    try {
        cfg = lfikit::load_config(config_path);
    } catch (const std::exception& e) {
        return classify_and_report(e);
    }
    // Worker precedence: command line > environment > config file.
    if (workers_given) cfg.workers = workers_flag;
    else if (std::getenv("LFIKIT_WORKERS") != nullptr) cfg.workers = 0;
    if (outdir_given) cfg.output_dir = outdir_flag;

    try {
        lfikit::ExperimentOutcome out = lfikit::run_experiment(cfg);
        nlohmann::json j;
        j["status"] = "ok";
        j["output_dir"] = cfg.output_dir.string();
        j["files"] = out.files;
        j["simulator_calls"] = out.simulator_calls;
        j["wall_clock_seconds"] = out.wall_clock_seconds;
        std::printf("%s\n", j.dump().c_str());
        return kExitOk;
    } catch (const std::exception& e) {
        return classify_and_report(e);
    }
}

int cmd_validate(const std::string& config_path) {
    try {
        lfikit::ExperimentConfig cfg = lfikit::load_config(config_path);
        nlohmann::json j;
        j["status"] = "ok";
        j["study"] = cfg.study;
        j["method"] = cfg.method;
        j["config_hash"] = lfikit::fnv1a64_hex(lfikit::canonical_config_json(cfg));
        std::printf("%s\n", j.dump().c_str());
        return kExitOk;
    } catch (const std::exception& e) {
        return classify_and_report(e);
    }
}

int cmd_compare(const std::vector<std::string>& manifest_paths) {
    try {
        std::vector<std::string> texts;
        texts.reserve(manifest_paths.size());
        for (const auto& p : manifest_paths) texts.push_back(lfikit::read_file(p));
        std::string csv = lfikit::compare_manifests_csv(texts);
        std::fputs(csv.c_str(), stdout);
        return kExitOk;
    } catch (const std::exception& e) {
        return classify_and_report(e);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Likelihood-free inference batch runner"};
    app.set_version_flag("--version", std::string(lfikit::kLibraryVersion));
    app.require_subcommand(1);

    std::string config_path;
    unsigned workers_flag = 0;
    std::string outdir_flag;

    CLI::App* run = app.add_subcommand("run", "Execute the experiment a config describes");
    run->add_option("config", config_path, "Path to the experiment config (JSON)")
        ->required();
    CLI::Option* workers_opt =
        run->add_option("--workers", workers_flag, "Worker thread count (0 = auto)");
    CLI::Option* outdir_opt =
        run->add_option("--output-dir", outdir_flag, "Directory for output files");

    std::string validate_path;
    CLI::App* validate =
        app.add_subcommand("validate", "Check a config without running anything");
    validate->add_option("config", validate_path, "Path to the experiment config (JSON)")
        ->required();

    std::vector<std::string> manifest_paths;
    CLI::App* compare =
        app.add_subcommand("compare", "Tabulate simulator-call budgets across runs");
    compare->add_option("manifests", manifest_paths, "Two or more manifest.json paths")
        ->required()
        ->expected(-2);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help/--version
        print_error("config_invalid", e.what());
        return kExitConfig;
    }

    if (run->parsed())
        return cmd_run(config_path, workers_opt->count() > 0, workers_flag,
                       outdir_opt->count() > 0, outdir_flag);
    if (validate->parsed()) return cmd_validate(validate_path);
    return cmd_compare(manifest_paths);
}
