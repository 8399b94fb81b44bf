#include <cstdlib>
#include <sstream>

#include "cursor_sim/machine.hpp"

namespace csim {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double to_double(const std::string& s, const std::string& ctx) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') throw ModelError("bad number '" + s + "' in " + ctx);
    return v;
}

int to_int(const std::string& s, const std::string& ctx) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0') throw ModelError("bad integer '" + s + "' in " + ctx);
    return static_cast<int>(v);
}

QubitRef parse_qubit(const std::string& s) {
    if (s == "a") return QubitRef::ancilla();
    if (s.size() < 2) throw ModelError("bad qubit reference '" + s + "'");
    const int i = to_int(s.substr(1), "qubit reference");
    switch (s[0]) {
        case 'd': return QubitRef::data(i);
        case 'k': return QubitRef::counter(i);
        case 'c': return QubitRef::control(i);
        default: throw ModelError("bad qubit reference '" + s + "'");
    }
}

}  // namespace

Primitive parse_primitive(const std::string& token) {
    const auto parts = split(token, ':');
    const std::string& k = parts[0];
    auto need = [&](std::size_t n) {
        if (parts.size() != n) throw ModelError("malformed primitive '" + token + "'");
    };
    if (k == "I") { need(1); return Primitive::identity(); }
    if (k == "estimator") { need(1); return Primitive::estimator(); }
    if (k == "cnot") { need(1); return Primitive::cnot_core(); }
    if (k == "sigma1" || k == "sigma2" || k == "sigma3") {
        need(2);
        return Primitive::pauli(k.back() - '0', parse_qubit(parts[1]));
    }
    if (k == "roty") { need(3); return Primitive::rotation_y(to_double(parts[1], token), parse_qubit(parts[2])); }
    if (k == "raise") { need(2); return Primitive::raise(parse_qubit(parts[1])); }
    if (k == "lower") { need(2); return Primitive::lower(parse_qubit(parts[1])); }
    if (k == "negate") { need(2); return Primitive::negate(parse_qubit(parts[1])); }
    if (k == "proj+") { need(2); return Primitive::project_plus(parse_qubit(parts[1])); }
    if (k == "proj-") { need(2); return Primitive::project_minus(parse_qubit(parts[1])); }
    if (k == "oracle") {
        need(2);
        std::vector<int> word;
        for (const auto& w : split(parts[1], ',')) word.push_back(to_int(w, token));
        return Primitive::oracle(word);
    }
    if (k == "custom") {
        need(3);
        const int n = to_int(parts[1], token);
        const auto vals = split(parts[2], ',');
        if (n <= 0 || static_cast<int>(vals.size()) != 2 * n * n) throw ModelError("malformed primitive '" + token + "'");
        CMat m(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                m(r, c) = cplx(to_double(vals[2 * (r * n + c)], token), to_double(vals[2 * (r * n + c) + 1], token));
        return Primitive::from_matrix(m);
    }
    throw ModelError("unknown primitive '" + token + "'");
}

std::string graph_to_text(const ProgramGraph& graph) {
    std::ostringstream os;
    os.precision(17);
    os << "sites=" << graph.sites << " lambda=" << graph.lambda << " register=" << graph.reg.mu << ","
       << (graph.reg.ancilla ? 1 : 0) << "," << graph.reg.counters << "," << graph.reg.controls << "\n";
    for (const auto& [name, sites] : graph.metadata) {
        os << "meta " << name << " ";
        for (std::size_t i = 0; i < sites.size(); ++i) os << (i ? "," : "") << sites[i];
        os << "\n";
    }
    for (const auto& e : graph.edges) os << e.from << " " << e.to << " " << e.op.label() << "\n";
    return os.str();
}

ProgramGraph graph_from_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    bool header = false;
    ProgramGraph g;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        const std::string where = "graph line " + std::to_string(lineno);
        if (!header) {
            for (const auto& t : tok) {
                const auto eq = t.find('=');
                if (eq == std::string::npos) throw ModelError(where + ": expected key=value header");
                const std::string key = t.substr(0, eq), val = t.substr(eq + 1);
                if (key == "sites") g.sites = to_int(val, where);
                else if (key == "lambda") g.lambda = to_double(val, where);
                else if (key == "register") {
                    const auto f = split(val, ',');
                    if (f.size() != 4) throw ModelError(where + ": register needs mu,ancilla,K,controls");
                    g.reg.mu = to_int(f[0], where);
                    g.reg.ancilla = to_int(f[1], where) != 0;
                    g.reg.counters = to_int(f[2], where);
                    g.reg.controls = to_int(f[3], where);
                } else throw ModelError(where + ": unknown header key '" + key + "'");
            }
            header = true;
            continue;
        }
        if (tok[0] == "meta") {
            if (tok.size() != 3) throw ModelError(where + ": meta needs a name and a site list");
            std::vector<int> sites;
            for (const auto& v : split(tok[2], ',')) sites.push_back(to_int(v, where));
            g.metadata[tok[1]] = sites;
            continue;
        }
        if (tok.size() != 3) throw ModelError(where + ": expected 'from to primitive'");
        try {
            g.add_edge(to_int(tok[0], where), to_int(tok[1], where), parse_primitive(tok[2]));
        } catch (const ModelError& e) {
            throw ModelError(where + ": " + e.what());
        }
    }
    if (!header) throw ModelError("graph text has no header line");
    g.validate();
    return g;
}

}  // namespace csim
