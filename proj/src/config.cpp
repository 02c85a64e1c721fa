#include "fracheat/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fracheat/errors.hpp"

namespace fracheat {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("file", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

ExperimentConfig ExperimentConfig::parse_string(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno), "unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno), "expected key = value");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno), "empty key or value");
        if (!section.empty()) key = section + "." + key;
        kv[key] = value;
    }
    return from_map(std::move(kv));
}

ExperimentConfig ExperimentConfig::from_map(std::map<std::string, std::string> kv) {
    ExperimentConfig c;
    c.kv_ = std::move(kv);
    return c;
}

std::string ExperimentConfig::experiment() const {
    const std::string kind = text("experiment");
    for (const auto& info : experiment_catalog())
        if (info.kind == kind) return kind;
    throw ConfigError("experiment", "unknown kind '" + kind + "'");
}

std::string ExperimentConfig::text(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError(key, "missing required key");
    return it->second;
}

std::string ExperimentConfig::text_or(const std::string& key,
                                      const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double ExperimentConfig::number(const std::string& key) const {
    const std::string v = text(key);
    try {
        std::size_t pos = 0;
        const double out = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError(key, "not a number: '" + v + "'");
    }
}

double ExperimentConfig::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

long ExperimentConfig::integer_or(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    const double v = number(key);
    if (v != std::floor(v)) throw ConfigError(key, "not an integer");
    return static_cast<long>(v);
}

bool ExperimentConfig::flag_or(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = text(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key, "not a boolean: '" + v + "'");
}

std::vector<double> ExperimentConfig::list_or(const std::string& key,
                                              std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    std::istringstream in(text(key));
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError(key, "bad list entry '" + tok + "'");
        }
    }
    if (out.empty()) throw ConfigError(key, "empty list");
    return out;
}

StableParams ExperimentConfig::stable_params() const {
    const double a = number("params.a");
    const double delta = number_or("params.delta", 0.0);
    try {
        return make_params(a, delta);
    } catch (const OutOfRange& e) {
        throw ConfigError(std::abs(delta) > 2.0 - a && a > 1.0 && a <= 2.0
                              ? "params.delta"
                              : "params.a",
                          e.what());
    }
}

InitialMeasure ExperimentConfig::measure(const std::string& section) const {
    const std::string kind = text_or(section + ".kind", "dirac");
    try {
        if (kind == "zero") return InitialMeasure::zero();
        if (kind == "dirac")
            return InitialMeasure::dirac(number_or(section + ".mass", 1.0),
                                         number_or(section + ".location", 0.0));
        if (kind == "lebesgue")
            return InitialMeasure::lebesgue(number_or(section + ".level", 1.0));
        if (kind == "indicator")
            return InitialMeasure::indicator(number_or(section + ".half_width", 1.0),
                                             number_or(section + ".height", 1.0));
        if (kind == "dirac-plus-lebesgue") {
            InitialMeasure m = InitialMeasure::lebesgue(number_or(section + ".level", 1.0));
            m.add_atom(number_or(section + ".location", 0.0),
                       number_or(section + ".mass", 1.0));
            return m;
        }
    } catch (const OutOfRange& e) {
        throw ConfigError(section, e.what());
    }
    throw ConfigError(section + ".kind", "unknown measure kind '" + kind + "'");
}

RhoSpec ExperimentConfig::rho() const {
    const std::string kind = text_or("rho.kind", "linear");
    const double lambda = number_or("rho.lambda", 1.0);
    if (kind == "zero") return RhoSpec::zero();
    if (kind == "linear") return RhoSpec::linear(lambda);
    if (kind == "sinlip") {
        // rho(u) = lambda (u + 0.3 sin u): Lipschitz 1.3 |lambda|, rho(0) = 0
        return RhoSpec::custom(
            [lambda](double u) { return lambda * (u + 0.3 * std::sin(u)); },
            1.3 * std::abs(lambda), 1.3 * std::abs(lambda), 0.0);
    }
    throw ConfigError("rho.kind", "unknown rho kind '" + kind + "'");
}

SpaceTimeGrid ExperimentConfig::grid() const {
    SpaceTimeGrid g;
    g.horizon = number_or("grid.horizon", 1.0);
    g.half_width = number_or("grid.half_width", 4.0);
    g.n_t = static_cast<int>(integer_or("grid.n_t", 64));
    g.n_x = static_cast<int>(integer_or("grid.n_x", 128));
    g.allow_coarse_dt = flag_or("grid.allow_coarse_dt", false);
    if (!(g.horizon > 0.0)) throw ConfigError("grid.horizon", "must be > 0");
    if (!(g.half_width > 0.0)) throw ConfigError("grid.half_width", "must be > 0");
    if (g.n_t < 1) throw ConfigError("grid.n_t", "must be >= 1");
    if (g.n_x < 2) throw ConfigError("grid.n_x", "must be >= 2");
    return g;
}

const std::vector<ExperimentInfo>& experiment_catalog() {
    static const std::vector<ExperimentInfo> catalog = {
        {"green-checks",
         "Green function normalization, semigroup residual, and sup anchors",
         "Green function identities (section 2 machinery)"},
        {"kernel-checks",
         "Iterated-kernel series against the heat closed form and its upper bound",
         "Moment kernel K and Proposition 2.2 bound"},
        {"approx-ladder",
         "Discrete-semigroup kernel: mass identity, L1 lemma lattice, L2 ladder",
         "Appendix approximation lemmas for R~_eps"},
        {"simulate",
         "Ensemble runs: mean preservation and second-moment bound at probes",
         "Mild-solution sanity and Theorem 2.1 moment bound"},
        {"compare",
         "Coupled two-measure runs sharing one noise; ordering violations",
         "Theorem 1.1 weak comparison principle"},
        {"positivity",
         "Box-minimum tail probabilities against the log-shape transform",
         "Theorem 1.4 strict-positivity rate shape"},
        {"holder",
         "Increment second-moment regressions in time and space",
         "Theorem 1.8 Holder exponents (moment version)"},
        {"weak-convergence",
         "Test-function pairing gap as t decreases to 0",
         "Theorem 1.9 weak convergence to initial data"},
        {"intermittency",
         "Order-1 and order-2 Lyapunov slope estimates",
         "Corollary 1.2 full intermittency"},
    };
    return catalog;
}

} // namespace fracheat
