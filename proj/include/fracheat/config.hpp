#pragma once

#include <map>
#include <string>
#include <vector>

#include "fracheat/kernels.hpp"
#include "fracheat/measure.hpp"
#include "fracheat/solver.hpp"
#include "fracheat/stable.hpp"

namespace fracheat {

/// Key-value experiment configuration. The file grammar is INI-like:
/// `[section]` headers, `key = value` lines, `#` comments; list values are
/// whitespace-separated. Keys canonicalize to `section.key`.
class ExperimentConfig {
public:
    static ExperimentConfig parse_file(const std::string& path);
    static ExperimentConfig parse_string(const std::string& text);
    static ExperimentConfig from_map(std::map<std::string, std::string> kv);

    const std::map<std::string, std::string>& entries() const { return kv_; }
    std::string experiment() const;

    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    std::string text(const std::string& key) const;
    std::string text_or(const std::string& key, const std::string& fallback) const;
    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    long integer_or(const std::string& key, long fallback) const;
    bool flag_or(const std::string& key, bool fallback) const;
    std::vector<double> list_or(const std::string& key,
                                std::vector<double> fallback) const;

    StableParams stable_params() const;
    InitialMeasure measure(const std::string& section) const;
    RhoSpec rho() const;
    SpaceTimeGrid grid() const;

private:
    std::map<std::string, std::string> kv_;
};

struct ExperimentInfo {
    std::string kind;
    std::string description;
    std::string target; // the statement it exercises
};

const std::vector<ExperimentInfo>& experiment_catalog();

/// Execute one experiment: artifacts plus manifest.json and report.json in
/// out_dir. Returns 0 when every report check passes, 4 otherwise.
int run_experiment(const ExperimentConfig& config, const std::string& out_dir);

} // namespace fracheat
