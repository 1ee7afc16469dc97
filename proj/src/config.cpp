#include "deid/config.hpp"

#include <sstream>

#include "deid/metrics.hpp"
#include "deid/util.hpp"

namespace deid {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": cannot read \"" + value + "\" as a number");
    }
}

int64_t parse_int(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        int64_t v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": cannot read \"" + value + "\" as an integer");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError(key + ": cannot read \"" + value + "\" as a boolean");
}

} // namespace

std::vector<double> parse_grid(const std::string& text) {
    if (text == "default") return default_rho_grid();
    std::vector<double> grid;
    for (const std::string& item : split_list(text)) grid.push_back(parse_double("eval.grid", item));
    if (grid.empty()) throw ConfigError("eval.grid: empty grid");
    for (size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0 && grid[i] <= 1.0))
            throw InvalidRho("eval.grid: rho must lie in (0, 1], got " + std::to_string(grid[i]));
        if (i > 0 && grid[i] <= grid[i - 1])
            throw InvalidRho("eval.grid: grid must be strictly increasing");
    }
    return grid;
}

std::vector<PhiLabel> parse_labels(const std::string& text) {
    if (text == "default") return evaluation_labels();
    if (text == "all") return all_phi_labels();
    std::vector<PhiLabel> labels;
    for (const std::string& item : split_list(text)) {
        auto kind = phi_label_from_string(item);
        if (!kind) throw ConfigError("eval.labels: unknown label \"" + item + "\"");
        labels.push_back(*kind);
    }
    if (labels.empty()) throw ConfigError("eval.labels: empty label list");
    return labels;
}

HarnessConfig parse_config(const std::string& text, const std::filesystem::path& workdir) {
    HarnessConfig cfg;
    auto resolve = [&](const std::string& p) { return workdir / p; };

    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected \"key = value\"");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));

        if (key == "asr.backend") {
            if (value != "fixture" && value != "noisy_fixture" && value != "http")
                throw ConfigError("asr.backend: unknown backend \"" + value + "\"");
            cfg.asr_backend = value;
        } else if (key == "asr.k") {
            cfg.asr_k = static_cast<int>(parse_int(key, value));
            if (cfg.asr_k < 1) throw ConfigError("asr.k must be >= 1");
        } else if (key == "asr.fixture") {
            cfg.asr_fixture = resolve(value);
        } else if (key == "asr.reference") {
            cfg.asr_reference = resolve(value);
        } else if (key == "asr.noise.sub_rate") {
            cfg.asr_noise.sub_rate = parse_double(key, value);
        } else if (key == "asr.noise.del_rate") {
            cfg.asr_noise.del_rate = parse_double(key, value);
        } else if (key == "asr.noise.ins_rate") {
            cfg.asr_noise.ins_rate = parse_double(key, value);
        } else if (key == "asr.noise.seed") {
            cfg.asr_noise.seed = static_cast<uint64_t>(parse_int(key, value));
        } else if (key == "asr.language") {
            cfg.asr_language = value;
        } else if (key == "asr.model") {
            cfg.asr_model = value;
        } else if (key == "asr.endpoint") {
            cfg.asr_endpoint = value;
        } else if (key == "asr.timeout_ms") {
            cfg.asr_timeout_ms = parse_int(key, value);
        } else if (key == "asr.max_attempts") {
            cfg.asr_max_attempts = static_cast<int>(parse_int(key, value));
        } else if (key == "tagger.gazetteers") {
            for (const auto& p : split_list(value)) cfg.gazetteers.push_back(resolve(p));
        } else if (key == "tagger.patterns") {
            for (const auto& p : split_list(value)) cfg.patterns.push_back(resolve(p));
        } else if (key == "tagger.case_sensitive") {
            cfg.tagger_case_sensitive = parse_bool(key, value);
        } else if (key == "redact.pad_ms") {
            cfg.pad_ms = parse_int(key, value);
            if (cfg.pad_ms < 0) throw ConfigError("redact.pad_ms must be >= 0");
        } else if (key == "eval.grid") {
            cfg.grid = parse_grid(value);
        } else if (key == "eval.labels") {
            cfg.labels = parse_labels(value);
        } else if (key == "eval.attribution_rho") {
            cfg.attribution_rho = parse_double(key, value);
        } else if (key == "eval.bins") {
            cfg.bins = static_cast<int>(parse_int(key, value));
            if (cfg.bins < 1) throw ConfigError("eval.bins must be >= 1");
        } else {
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key \"" +
                              key + "\"");
        }
    }
    return cfg;
}

HarnessConfig load_config_file(const std::filesystem::path& path,
                               const std::filesystem::path& workdir) {
    try {
        return parse_config(read_file(path), workdir);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string HarnessConfig::canonical() const {
    std::ostringstream out;
    out << "asr.backend = " << asr_backend << '\n';
    out << "asr.k = " << asr_k << '\n';
    out << "asr.fixture = " << asr_fixture.string() << '\n';
    out << "asr.reference = " << asr_reference.string() << '\n';
    out << "asr.noise.sub_rate = " << format_fixed6(asr_noise.sub_rate) << '\n';
    out << "asr.noise.del_rate = " << format_fixed6(asr_noise.del_rate) << '\n';
    out << "asr.noise.ins_rate = " << format_fixed6(asr_noise.ins_rate) << '\n';
    out << "asr.noise.seed = " << asr_noise.seed << '\n';
    out << "asr.language = " << asr_language << '\n';
    out << "asr.model = " << asr_model << '\n';
    out << "asr.endpoint = " << asr_endpoint << '\n';
    out << "asr.timeout_ms = " << asr_timeout_ms << '\n';
    out << "asr.max_attempts = " << asr_max_attempts << '\n';
    out << "tagger.gazetteers =";
    for (const auto& p : gazetteers) out << ' ' << p.string();
    out << '\n';
    out << "tagger.patterns =";
    for (const auto& p : patterns) out << ' ' << p.string();
    out << '\n';
    out << "tagger.case_sensitive = " << (tagger_case_sensitive ? "true" : "false") << '\n';
    out << "redact.pad_ms = " << pad_ms << '\n';
    out << "eval.grid =";
    for (double rho : grid) out << ' ' << format_fixed6(rho);
    out << '\n';
    out << "eval.labels =";
    for (PhiLabel k : labels) out << ' ' << to_string(k);
    out << '\n';
    out << "eval.attribution_rho = " << format_fixed6(attribution_rho) << '\n';
    out << "eval.bins = " << bins << '\n';
    return out.str();
}

} // namespace deid
