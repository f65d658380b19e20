#include "seepage/config.hpp"

#include "seepage/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace seep {

double Scenario::load_at(double t) const {
    double v = 0.0;
    for (const auto& bp : load) {
        if (bp.t > t + 1e-12) break;
        v = bp.value;
    }
    return v;
}

void Scenario::validate() const {
    auto bad = [](const std::string& key, const std::string& why) {
        throw ConfigError(key + ": " + why);
    };
    if (dt <= 0.0) bad("time.dt", "must be positive");
    if (t_end < dt) bad("time.t_end", "must be >= dt");
    if (nx < 2 || ny < 1) bad("mesh.nx", "channel mesh needs nx >= 2, ny >= 1");
    if (length <= 0.0 || height <= 0.0) bad("mesh.length", "dimensions must be positive");
    if (reservoirs.width1 <= 0.0 || reservoirs.width2 <= 0.0)
        bad("mesh.width1", "reservoir widths must be positive");
    if (reservoirs.gap <= 0.0) bad("mesh.gap", "sealed span must be positive");
    if (reservoirs.nx_per_unit < 1 || reservoirs.ny < 1)
        bad("mesh.nx_per_unit", "resolution must be >= 1");
    if (output_every < 0) bad("output.every", "must be >= 0");
    for (size_t i = 1; i < load.size(); ++i)
        if (load[i].t <= load[i - 1].t)
            bad("load.schedule", "breakpoint times must be strictly increasing");
    if (kind == ScenarioKind::verify && verify_suite != "mms" &&
        verify_suite != "poiseuille" && verify_suite != "slip" && verify_suite != "all")
        bad("output.suite", "unknown suite '" + verify_suite + "'");
    try {
        params.check();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

Scenario default_scenario(ScenarioKind kind) {
    Scenario s;
    s.kind = kind;
    switch (kind) {
    case ScenarioKind::two_reservoir:
        s.dt = 0.05;
        s.t_end = 1.0;
        s.load = {{0.0, 1.0}};
        break;
    case ScenarioKind::channel_contact:
        s.length = 4.0;
        s.height = 1.0;
        s.nx = 48;
        s.ny = 12;
        s.dt = 0.05;
        s.t_end = 10.0;
        s.load = {{0.0, 0.8}, {6.0, 0.0}};
        break;
    case ScenarioKind::verify:
        break;
    }
    return s;
}

namespace {

double to_double(const std::string& key, const std::string& text) {
    try {
        size_t used = 0;
        const double v = std::stod(text, &used);
        while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used])))
            ++used;
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": not a number: '" + text + "'");
    }
}

int to_int(const std::string& key, const std::string& text) {
    const double v = to_double(key, text);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw ConfigError(key + ": not an integer: '" + text + "'");
    return i;
}

bool to_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ConfigError(key + ": not a boolean: '" + text + "'");
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// "0:0.8, 6:0" -> breakpoints
std::vector<LoadBreakpoint> parse_schedule(const std::string& key, const std::string& text) {
    std::vector<LoadBreakpoint> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const size_t colon = item.find(':');
        if (colon == std::string::npos)
            throw ConfigError(key + ": expected 't:value', got '" + item + "'");
        out.push_back({to_double(key, trim(item.substr(0, colon))),
                       to_double(key, trim(item.substr(colon + 1)))});
    }
    if (out.empty()) throw ConfigError(key + ": empty schedule");
    return out;
}

struct KeyHandler {
    Scenario& s;
    bool geometry_seen = false;

    // returns false when the key is unknown in its section
    bool apply(const std::string& section, const std::string& key, const std::string& value) {
        const std::string full = section.empty() ? key : section + "." + key;
        auto d = [&] { return to_double(full, value); };
        auto i = [&] { return to_int(full, value); };

        if (section.empty()) {
            if (key == "kind") {
                if (value == "two_reservoir") s.kind = ScenarioKind::two_reservoir;
                else if (value == "channel_contact") s.kind = ScenarioKind::channel_contact;
                else if (value == "verify") s.kind = ScenarioKind::verify;
                else throw ConfigError("kind: unknown scenario '" + value + "'");
                return true;
            }
            return false;
        }
        if (section == "mesh") {
            if (key == "file") { s.mesh_file = value; return true; }
            if (key == "length") { s.length = d(); return true; }
            if (key == "height") { s.height = d(); s.reservoirs.height = s.height; return true; }
            if (key == "nx") { s.nx = i(); return true; }
            if (key == "ny") { s.ny = i(); s.reservoirs.ny = s.ny; return true; }
            if (key == "width1") { s.reservoirs.width1 = d(); return true; }
            if (key == "width2") { s.reservoirs.width2 = d(); return true; }
            if (key == "gap") { s.reservoirs.gap = d(); return true; }
            if (key == "nx_per_unit") { s.reservoirs.nx_per_unit = i(); return true; }
            return false;
        }
        if (section == "fluid") {
            if (key == "mu") { s.params.mu = d(); return true; }
            if (key == "rho_f") { s.params.rho_f = d(); return true; }
            if (key == "delta_stab") { s.params.delta_stab = d(); return true; }
            return false;
        }
        if (section == "layer") {
            if (key == "epsilon") { s.params.epsilon = d(); return true; }
            if (key == "k_tau") { s.params.k_tau = d(); return true; }
            if (key == "k_n") { s.params.k_n = d(); return true; }
            if (key == "sigma_p_velocity_sign") {
                s.params.sigma_p_velocity_sign = d();
                if (s.params.sigma_p_velocity_sign != 1.0 &&
                    s.params.sigma_p_velocity_sign != -1.0)
                    throw ConfigError(full + ": must be 1 or -1");
                return true;
            }
            return false;
        }
        if (section == "solid") {
            if (key == "rho_s") { s.params.rho_s = d(); return true; }
            if (key == "c1") { s.params.c1 = d(); return true; }
            if (key == "c0") { s.params.c0 = d(); return true; }
            return false;
        }
        if (section == "contact") {
            if (key == "gamma_c") { s.params.gamma_c = d(); return true; }
            if (key == "gamma_fsi") { s.params.gamma_fsi = d(); return true; }
            if (key == "g_min") { s.params.g_min = d(); return true; }
            return false;
        }
        if (section == "time") {
            if (key == "dt") { s.dt = d(); return true; }
            if (key == "t_end") { s.t_end = d(); return true; }
            return false;
        }
        if (section == "load") {
            if (key == "schedule") { s.load = parse_schedule(full, value); return true; }
            if (key == "pbar") { s.load = {{0.0, d()}}; return true; }
            return false;
        }
        if (section == "output") {
            if (key == "every") { s.output_every = i(); return true; }
            if (key == "suite") { s.verify_suite = value; return true; }
            if (key == "clamp_tangential") {
                s.params.clamp_tangential_on_neumann = to_bool(full, value);
                return true;
            }
            return false;
        }
        return false; // unknown section
    }
};

constexpr const char* known_sections[] = {"mesh", "fluid",   "layer", "solid",
                                          "contact", "time", "load",  "output"};

} // namespace

Scenario parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("config file not found: " + path);

    // two passes: the scenario kind picks the defaults, then every other
    // key overrides them in file order
    std::vector<std::tuple<int, std::string, std::string, std::string>> entries;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const size_t hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("malformed section header '" + line + "'", lineno);
            section = trim(line.substr(1, line.size() - 2));
            if (std::find(std::begin(known_sections), std::end(known_sections), section) ==
                std::end(known_sections))
                throw ParseError("unknown section [" + section + "]", lineno);
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value', got '" + line + "'", lineno);
        entries.emplace_back(lineno, section, trim(line.substr(0, eq)),
                             trim(line.substr(eq + 1)));
    }

    ScenarioKind kind = ScenarioKind::two_reservoir;
    for (const auto& [ln, sec, key, value] : entries) {
        if (sec.empty() && key == "kind") {
            Scenario probe;
            KeyHandler{probe}.apply("", "kind", value);
            kind = probe.kind;
        }
    }

    Scenario s = default_scenario(kind);
    KeyHandler handler{s};
    for (const auto& [ln, sec, key, value] : entries) {
        if (!handler.apply(sec, key, value)) {
            const std::string full = sec.empty() ? key : sec + "." + key;
            throw ConfigError("unknown key '" + full + "'");
        }
    }
    s.validate();
    return s;
}

} // namespace seep
