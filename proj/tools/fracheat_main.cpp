#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fracheat/config.hpp"
#include "fracheat/errors.hpp"

namespace {

int cmd_run(const std::string& config_path, std::string out_dir) {
    fracheat::ExperimentConfig cfg;
    try {
        cfg = fracheat::ExperimentConfig::parse_file(config_path);
        cfg.experiment();
        if (out_dir.empty()) out_dir = cfg.text_or("run.output", "fracheat-out");
    } catch (const fracheat::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    try {
        const int rc = fracheat::run_experiment(cfg, out_dir);
        std::cout << (rc == 0 ? "PASS" : "CHECK FAILURES") << "  report: " << out_dir
                  << "/report.json\n";
        return rc;
    } catch (const fracheat::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "compute error: " << e.what() << "\n";
        return 3;
    }
}

int cmd_list() {
    for (const auto& info : fracheat::experiment_catalog())
        std::printf("%-18s %s\n%18s   target: %s\n", info.kind.c_str(),
                    info.description.c_str(), "", info.target.c_str());
    return 0;
}

int cmd_check(const std::string& report_path) {
    std::ifstream in(report_path);
    if (!in) {
        std::cerr << "cannot open " << report_path << "\n";
        return 2;
    }
    nlohmann::json report;
    try {
        in >> report;
    } catch (const std::exception& e) {
        std::cerr << "bad report: " << e.what() << "\n";
        return 2;
    }
    bool all = report.value("pass", false);
    for (const auto& c : report.value("checks", nlohmann::json::array()))
        std::printf("[%s] %s (observed %.6g, threshold %.6g)\n",
                    c.value("pass", false) ? "PASS" : "FAIL",
                    c.value("name", std::string("?")).c_str(),
                    c.value("observed", 0.0), c.value("threshold", 0.0));
    return all ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracheat: numerical laboratory for the stochastic fractional heat equation"};
    app.require_subcommand(1);

    std::string config_path, out_dir, report_path;
    auto* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("-o,--output", out_dir, "output directory (default from config)");

    app.add_subcommand("list", "list experiment kinds");

    auto* check = app.add_subcommand("check", "re-evaluate a report.json");
    check->add_option("report", report_path, "report.json path")->required();

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand("run")) return cmd_run(config_path, out_dir);
    if (app.got_subcommand("list")) return cmd_list();
    if (app.got_subcommand("check")) return cmd_check(report_path);
    return 2;
}
