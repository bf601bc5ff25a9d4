#include "fraclap/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw ParameterError("key '" + key + "': not a number: '" + text + "'");
    return v;
}

std::size_t to_size(const std::string& key, const std::string& text) {
    const double v = to_double(key, text);
    if (v < 0.0 || v != std::floor(v)) throw ParameterError("key '" + key + "': not a non-negative integer");
    return static_cast<std::size_t>(v);
}

const std::string& require(const KeyValues& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParameterError("missing config key '" + key + "'");
    return it->second;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
    std::filesystem::path p = csv;
    p.replace_extension(".json");
    return p;
}

void write_ndarray_csv(const std::filesystem::path& csv, const NdArray& U) {
    std::ofstream out(csv, std::ios::binary);
    if (!out) throw ParameterError("cannot open '" + csv.string() + "' for writing");
    for (std::size_t j = 0; j < U.rank(); ++j) out << 'i' << (j + 1) << ',';
    out << "value\n";
    for (TupleWalker w(U.shape()); !w.done(); w.advance()) {
        for (std::size_t i : w.tuple()) out << i << ',';
        out << format_double(U[w.flat() - 1]) << '\n';
    }
    std::ofstream side(sidecar_path(csv), std::ios::binary);
    if (!side) throw ParameterError("cannot open sidecar for '" + csv.string() + "'");
    side << nlohmann::json{{"shape", U.shape()}}.dump() << '\n';
}

NdArray read_ndarray_csv(const std::filesystem::path& csv) {
    std::ifstream side(sidecar_path(csv));
    if (!side) throw ParameterError("missing shape sidecar for '" + csv.string() + "'");
    Shape shape;
    try {
        shape = nlohmann::json::parse(side).at("shape").get<Shape>();
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError("malformed sidecar: " + std::string(e.what()));
    }
    NdArray U(shape);
    std::vector<bool> seen(U.size(), false);
    std::ifstream in(csv);
    if (!in) throw ParameterError("cannot open '" + csv.string() + "'");
    std::string line;
    std::getline(in, line);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        IndexTuple t;
        for (std::size_t j = 0; j < shape.size(); ++j) {
            if (!std::getline(ss, cell, ',')) throw ParameterError("short CSV row: " + line);
            t.push_back(to_size("index", trim(cell)));
        }
        if (!std::getline(ss, cell)) throw ParameterError("missing value in CSV row: " + line);
        const std::size_t flat = flat_index(shape, t);
        if (seen[flat - 1]) throw ParameterError("duplicate tuple in CSV row: " + line);
        seen[flat - 1] = true;
        U[flat - 1] = to_double("value", trim(cell));
        ++rows;
    }
    if (rows != U.size()) throw ParameterError("CSV has " + std::to_string(rows) + " rows, shape needs " +
                                               std::to_string(U.size()));
    return U;
}

KeyValues parse_key_values(const std::string& text) {
    KeyValues kv;
    std::stringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParameterError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ParameterError("line " + std::to_string(lineno) + ": empty key");
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open config '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_key_values(buf.str());
}

EvolutionConfig evolution_config_from(const KeyValues& kv) {
    static const char* known[] = {"n", "s", "p", "N", "L", "dt", "t_end", "snapshots", "byte_budget",
                                  "label", "long_running", "field"};
    for (const auto& [key, value] : kv) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ParameterError("unknown config key '" + key + "'");
    }
    EvolutionConfig c;
    c.n = static_cast<int>(to_size("n", require(kv, "n")));
    c.s = to_double("s", require(kv, "s"));
    c.p = to_double("p", require(kv, "p"));
    c.N = to_size("N", require(kv, "N"));
    c.L = to_double("L", require(kv, "L"));
    c.dt = to_double("dt", require(kv, "dt"));
    c.t_end = to_double("t_end", require(kv, "t_end"));
    std::stringstream ss(require(kv, "snapshots"));
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) c.snapshot_times.push_back(to_double("snapshots", item));
    }
    if (auto it = kv.find("byte_budget"); it != kv.end()) c.byte_budget = to_size("byte_budget", it->second);
    c.validate();
    return c;
}

}  // namespace fraclap
