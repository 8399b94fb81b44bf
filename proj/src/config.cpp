#include "cursor_sim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

namespace csim {

bool ExperimentConfig::has(const std::string& key) const {
    return std::find(keys_set.begin(), keys_set.end(), key) != keys_set.end();
}

const std::vector<ExperimentInfo>& experiment_catalog() {
    static const std::vector<ExperimentInfo> cat = {
        {"chain", "free cursor chain: spectrum, site amplitudes and the semi-infinite Bessel limit", {"chain.s"},
         {"spectrum.csv: k, eigenvalue", "amplitudes.csv: t, x, re, im, prob, bessel_prob"}},
        {"telomere", "identity tail behind the active chain; probability of completed computation vs the bound",
         {"chain.s", "trap.delta"}, {"telomere.csv: t, p_active, p_telomere, p_telomere2, bound"}},
        {"pipulse", "telomere trap closed by a rectangular pulse on the control qubit",
         {"chain.s", "trap.delta", "trap.t0"}, {"pipulse.csv: t, p_telomere, p_telomere_free"}},
        {"grover-damping", "alternating oracle/estimator line: success probability and register entropy",
         {"grover.mu"},
         {"grover.csv: t, p_target, p_wrong, lambda1, lambda2, entropy", "damping.csv: t, p_success"}},
        {"toy-bloch", "single-qubit toy register: Bloch trajectory, entropy, Bessel-Struve approximation",
         {"grover.mu"},
         {"bloch.csv: t, s1, s2, s3, r, gamma, entropy, p_target, lambda1",
          "bloch_approx.csv: t, r, gamma, r_approx, gamma_approx"}},
        {"launchpad", "speed law of a shaped initial wave packet and the spread of Q", {"chain.s", "launchpad.n"},
         {"speed.csv: v, density, cdf", "empirical.csv: t, mean_q, var_q, var_fit"}},
        {"measurement", "projective register measurement on the toy chain and the energy distributions",
         {"grover.mu"},
         {"measurement.csv: outcome, probability, tau", "energy.csv: energy, p_before, p_plus, p_minus"}},
        {"multihand", "two excitations on the free chain: Slater eigenstates and the joint speed law", {"chain.s"},
         {"slater.csv: k1, k2, energy, residual", "joint.csv: v2, conditional_mean, leading"}},
        {"confinement", "two active links: interference confinement for adjacent vs separated links",
         {"chain.s"}, {"confinement.csv: t, p_past_separated, p_past_adjacent"}},
        {"sampler", "birth-death trajectories shadowing the cursor density; sojourn in a region",
         {"chain.s", "sampling.paths"},
         {"paths.csv: path_id, t, config", "sojourn.csv: path_id, sojourn_time", "occupancy.csv: x, empirical, exact"}},
        {"dj-stationarity", "constant vs balanced function as stationary vs moving cursor state", {"dj.function"},
         {"stationarity.csv: t, overlap", "score.csv: function, score"}},
        {"sync-switch", "synchronised vs unsynchronised switch branches", {},
         {"sync.csv: t, p_h1, p_h2"}},
    };
    return cat;
}

const ExperimentInfo& experiment_info(const std::string& name) {
    for (const auto& e : experiment_catalog())
        if (e.name == name) return e;
    throw ConfigError("unknown experiment '" + name + "'");
}

namespace {

using Value = std::variant<double, std::string, bool, std::vector<double>>;

struct Raw {
    Value value;
    int line;
    bool integral = false;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

[[noreturn]] void fail(int line, const std::string& msg) { throw ConfigError("line " + std::to_string(line) + ": " + msg); }

bool parse_number(const std::string& s, double& out, bool& integral) {
    if (s.empty()) return false;
    std::string t;
    for (char c : s)
        if (c != '_') t += c;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    if (*end != '\0' || !std::isfinite(out)) return false;
    integral = t.find_first_of(".eE") == std::string::npos || (t.find_first_of("eE") != std::string::npos && out == std::floor(out));
    return true;
}

Raw parse_value(const std::string& s, int line, const std::string& key) {
    Raw r;
    r.line = line;
    if (s.empty()) fail(line, "missing value for '" + key + "'");
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"') fail(line, "unterminated string");
        r.value = s.substr(1, s.size() - 2);
        return r;
    }
    if (s == "true" || s == "false") {
        r.value = (s == "true");
        return r;
    }
    if (s.front() == '[') {
        if (s.back() != ']') fail(line, "unterminated array");
        std::vector<double> v;
        std::stringstream ss(s.substr(1, s.size() - 2));
        std::string item;
        bool all_int = true;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            double d;
            bool integral;
            if (!parse_number(item, d, integral)) fail(line, "malformed array element '" + item + "' for '" + key + "'");
            all_int = all_int && integral;
            v.push_back(d);
        }
        r.value = v;
        r.integral = all_int;
        return r;
    }
    double d;
    bool integral;
    if (!parse_number(s, d, integral)) fail(line, "malformed value '" + s + "' for '" + key + "'");
    r.value = d;
    r.integral = integral;
    return r;
}

const std::map<std::string, std::vector<std::string>>& schema() {
    static const std::map<std::string, std::vector<std::string>> m = {
        {"experiment", {"name", "out", "svg"}},
        {"chain", {"s", "lambda", "n3", "t_max", "t_step"}},
        {"grover", {"mu", "s", "target"}},
        {"trap", {"delta", "t0", "width", "double"}},
        {"launchpad", {"kind", "n", "k"}},
        {"sampling", {"paths", "dt", "seed", "T", "region"}},
        {"dj", {"function", "bits"}},
    };
    return m;
}

double num(const Raw& r, const std::string& key) {
    if (const double* d = std::get_if<double>(&r.value)) return *d;
    fail(r.line, "'" + key + "' must be a number");
}

int integer(const Raw& r, const std::string& key) {
    const double d = num(r, key);
    if (!r.integral || d != std::floor(d) || std::abs(d) > 1e9) fail(r.line, "'" + key + "' must be an integer");
    return static_cast<int>(d);
}

int positive_int(const Raw& r, const std::string& key) {
    const int v = integer(r, key);
    if (v <= 0) fail(r.line, "'" + key + "' must be positive");
    return v;
}

double positive(const Raw& r, const std::string& key) {
    const double v = num(r, key);
    if (!(v > 0)) fail(r.line, "'" + key + "' must be positive");
    return v;
}

std::string str(const Raw& r, const std::string& key) {
    if (const auto* s = std::get_if<std::string>(&r.value)) return *s;
    fail(r.line, "'" + key + "' must be a string");
}

bool boolean(const Raw& r, const std::string& key) {
    if (const bool* b = std::get_if<bool>(&r.value)) return *b;
    fail(r.line, "'" + key + "' must be true or false");
}

std::vector<int> int_array(const Raw& r, const std::string& key) {
    const auto* v = std::get_if<std::vector<double>>(&r.value);
    if (!v || !r.integral) fail(r.line, "'" + key + "' must be an array of integers");
    std::vector<int> out;
    for (double d : *v) out.push_back(static_cast<int>(d));
    return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    std::map<std::string, Raw> raw;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string l = trim(strip_comment(line));
        if (l.empty()) continue;
        if (l.front() == '[') {
            if (l.back() != ']') fail(lineno, "malformed section header");
            section = trim(l.substr(1, l.size() - 2));
            if (!schema().count(section)) fail(lineno, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = l.find('=');
        if (eq == std::string::npos) fail(lineno, "expected key = value");
        const std::string key = trim(l.substr(0, eq));
        if (section.empty()) fail(lineno, "key '" + key + "' outside any section");
        const auto& allowed = schema().at(section);
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            fail(lineno, "unknown key '" + key + "' in [" + section + "]");
        const std::string full = section + "." + key;
        if (raw.count(full)) fail(lineno, "duplicate key '" + full + "'");
        raw[full] = parse_value(trim(l.substr(eq + 1)), lineno, key);
        raw[full].line = lineno;
    }

    ExperimentConfig c;
    for (const auto& [k, r] : raw) c.keys_set.push_back(k);
    std::sort(c.keys_set.begin(), c.keys_set.end(), [&](const auto& a, const auto& b) { return raw[a].line < raw[b].line; });

    auto get = [&](const std::string& k) -> const Raw* {
        auto it = raw.find(k);
        return it == raw.end() ? nullptr : &it->second;
    };
    const Raw* name = get("experiment.name");
    if (!name) throw ConfigError("line " + std::to_string(lineno) + ": missing required key 'experiment.name'");
    c.name = str(*name, "name");
    const ExperimentInfo* info = nullptr;
    try {
        info = &experiment_info(c.name);
    } catch (const ConfigError&) {
        fail(name->line, "unknown experiment '" + c.name + "'");
    }
    for (const auto& req : info->required)
        if (!raw.count(req))
            throw ConfigError("line " + std::to_string(lineno) + ": missing required key '" + req + "' for experiment '" +
                              c.name + "'");

    if (auto r = get("experiment.out")) c.out_dir = str(*r, "out");
    if (auto r = get("experiment.svg")) c.emit_svg = boolean(*r, "svg");

    if (auto r = get("chain.s")) {
        c.s = integer(*r, "s");
        if (c.s < 2) fail(r->line, "'s' must be at least 2");
    }
    if (auto r = get("chain.lambda")) c.lambda = positive(*r, "lambda");
    if (auto r = get("chain.n3")) c.n3 = positive_int(*r, "n3");
    if (auto r = get("chain.t_max")) c.t_max = positive(*r, "t_max");
    if (auto r = get("chain.t_step")) c.t_step = positive(*r, "t_step");

    if (auto r = get("grover.mu")) {
        c.mu = positive_int(*r, "mu");
        if (c.mu > 20) fail(r->line, "'mu' too large");
        if (!get("chain.s") && !get("grover.s")) c.s = (1 << c.mu) + 1;
    }
    if (auto r = get("grover.s")) {
        c.s = integer(*r, "s");
        if (c.s < 2) fail(r->line, "'s' must be at least 2");
    }
    if (auto r = get("grover.target")) {
        c.target = int_array(*r, "target");
        for (int z : c.target)
            if (z != 1 && z != -1) fail(r->line, "'target' entries must be +1 or -1");
        if (c.mu && static_cast<int>(c.target.size()) != c.mu) fail(r->line, "'target' length must equal mu");
    }

    if (auto r = get("trap.delta")) c.delta = positive_int(*r, "delta");
    if (auto r = get("trap.t0")) c.pulse_t0 = positive(*r, "t0");
    if (auto r = get("trap.width")) c.pulse_width = positive(*r, "width");
    if (auto r = get("trap.double")) c.double_trap = boolean(*r, "double");

    if (auto r = get("launchpad.kind")) {
        c.launch_kind = str(*r, "kind");
        if (c.launch_kind != "flat" && c.launch_kind != "gamma" && c.launch_kind != "eigen")
            fail(r->line, "'kind' must be one of flat, gamma, eigen");
    }
    if (auto r = get("launchpad.n")) c.launch_n = positive_int(*r, "n");
    if (auto r = get("launchpad.k")) c.launch_k = positive_int(*r, "k");

    if (auto r = get("sampling.paths")) c.paths = positive_int(*r, "paths");
    if (auto r = get("sampling.dt")) c.dt = positive(*r, "dt");
    if (auto r = get("sampling.seed")) {
        const int v = integer(*r, "seed");
        if (v < 0) fail(r->line, "'seed' must be >= 0");
        c.seed = static_cast<std::uint64_t>(v);
    }
    if (auto r = get("sampling.T")) c.T = positive(*r, "T");
    if (auto r = get("sampling.region")) {
        c.region = int_array(*r, "region");
        if (c.region.size() != 2 || c.region[0] >= c.region[1]) fail(r->line, "'region' must be [lo, hi] with lo < hi");
    }

    if (auto r = get("dj.function")) {
        c.dj_function = str(*r, "function");
        if (c.dj_function != "constant" && c.dj_function != "balanced" && c.dj_function != "parity")
            fail(r->line, "'function' must be one of constant, balanced, parity");
    }
    if (auto r = get("dj.bits")) c.dj_bits = positive_int(*r, "bits");

    if (c.n3 > c.s && c.s > 0) throw ConfigError("line " + std::to_string(get("chain.n3")->line) + ": 'n3' exceeds 's'");
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace csim
