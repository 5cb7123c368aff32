#include "pdbuck/configio.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "pdbuck/csv.hpp"
#include "pdbuck/errors.hpp"

namespace pdbuck {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw InvalidConfig("key '" + key + "': invalid number '" + text + "'");
    return v;
}

int parse_int(const std::string& key, const std::string& text) {
    int v = 0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw InvalidConfig("key '" + key + "': invalid integer '" + text +
                            "'");
    return v;
}

std::vector<double> parse_coeffs(const std::string& key,
                                 const std::string& text) {
    std::vector<double> out;
    std::istringstream iss(text);
    std::string tok;
    while (iss >> tok) out.push_back(parse_double(key, tok));
    if (out.empty())
        throw InvalidConfig("key '" + key + "': expected coefficients");
    return out;
}

class KeyMap {
  public:
    explicit KeyMap(const std::string& text) {
        std::istringstream iss(text);
        std::string line;
        int lineno = 0;
        while (std::getline(iss, line)) {
            ++lineno;
            if (size_t hash = line.find('#'); hash != std::string::npos)
                line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw InvalidConfig("line " + std::to_string(lineno) +
                                    ": expected 'key = value'");
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (key.empty() || value.empty())
                throw InvalidConfig("line " + std::to_string(lineno) +
                                    ": empty key or value");
            if (!pairs_.emplace(key, value).second)
                throw InvalidConfig("duplicate key '" + key + "'");
        }
    }

    // Removes and returns the value; required keys throw when absent.
    std::optional<std::string> take(const std::string& key) {
        auto it = pairs_.find(key);
        if (it == pairs_.end()) return std::nullopt;
        std::string v = it->second;
        pairs_.erase(it);
        return v;
    }

    std::string require(const std::string& key) {
        auto v = take(key);
        if (!v) throw InvalidConfig("missing required key '" + key + "'");
        return *v;
    }

    void finish() const {
        if (!pairs_.empty())
            throw InvalidConfig("unknown key '" + pairs_.begin()->first + "'");
    }

  private:
    std::map<std::string, std::string> pairs_;
};

} // namespace

ConfigFile parse_config(const std::string& text) {
    KeyMap keys(text);
    ConfigFile out;
    ConverterConfig& c = out.converter;

    std::string mode = keys.require("mode");
    if (mode == "voltage")
        c.mode = Mode::VoltageMode;
    else if (mode == "current")
        c.mode = Mode::CurrentMode;
    else
        throw InvalidConfig("mode must be 'voltage' or 'current', got '" +
                            mode + "'");

    c.L = parse_double("L_H", keys.require("L_H"));
    c.C = parse_double("C_F", keys.require("C_F"));
    c.R = parse_double("R_ohm", keys.require("R_ohm"));
    c.Rc = parse_double("Rc_ohm", keys.require("Rc_ohm"));
    if (c.mode == Mode::CurrentMode) {
        c.Rs = parse_double("Rs_ohm", keys.require("Rs_ohm"));
    } else if (auto rs = keys.take("Rs_ohm")) {
        throw InvalidConfig("key 'Rs_ohm' applies to current mode only");
    }
    c.T = parse_double("T_s", keys.require("T_s"));
    c.Vr = parse_double("Vr_V", keys.require("Vr_V"));
    c.g = parse_double("g", keys.require("g"));
    c.G2 = RationalFunction(parse_coeffs("g2_num", keys.require("g2_num")),
                            parse_coeffs("g2_den", keys.require("g2_den")));

    std::string ramp = keys.require("ramp");
    if (ramp == "fixed") {
        double vl = parse_double("Vl_V", keys.require("Vl_V"));
        double vh = parse_double("Vh_V", keys.require("Vh_V"));
        c.ramp = RampSpec::fixed(vl, vh);
        if (keys.take("kl") || keys.take("kh"))
            throw InvalidConfig("keys 'kl'/'kh' apply to feedforward ramps only");
    } else if (ramp == "feedforward") {
        double kl = parse_double("kl", keys.require("kl"));
        double kh = parse_double("kh", keys.require("kh"));
        c.ramp = RampSpec::feedforward(kl, kh);
        if (keys.take("Vl_V") || keys.take("Vh_V"))
            throw InvalidConfig("keys 'Vl_V'/'Vh_V' apply to fixed ramps only");
    } else {
        throw InvalidConfig("ramp must be 'fixed' or 'feedforward', got '" +
                            ramp + "'");
    }

    if (auto v = keys.take("series_n_terms")) {
        int n = parse_int("series_n_terms", *v);
        if (n < 8) throw InvalidConfig("series_n_terms must be >= 8");
        out.series_n_terms = n;
    }
    if (auto v = keys.take("target_vo_V"))
        out.target_vo = parse_double("target_vo_V", *v);

    keys.finish();
    c.validate();
    return out;
}

ConfigFile load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidConfig("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ConfigFile& cfg) {
    const ConverterConfig& c = cfg.converter;
    std::ostringstream out;
    out << "mode = "
        << (c.mode == Mode::VoltageMode ? "voltage" : "current") << '\n';
    out << "L_H = " << format_roundtrip(c.L) << '\n';
    out << "C_F = " << format_roundtrip(c.C) << '\n';
    out << "R_ohm = " << format_roundtrip(c.R) << '\n';
    out << "Rc_ohm = " << format_roundtrip(c.Rc) << '\n';
    if (c.mode == Mode::CurrentMode)
        out << "Rs_ohm = " << format_roundtrip(c.Rs) << '\n';
    out << "T_s = " << format_roundtrip(c.T) << '\n';
    out << "Vr_V = " << format_roundtrip(c.Vr) << '\n';
    out << "g = " << format_roundtrip(c.g) << '\n';
    out << "g2_num =";
    for (double v : c.G2.num_coeffs) out << ' ' << format_roundtrip(v);
    out << '\n';
    out << "g2_den =";
    for (double v : c.G2.den_coeffs) out << ' ' << format_roundtrip(v);
    out << '\n';
    if (c.ramp.kind == RampSpec::Kind::Fixed) {
        out << "ramp = fixed\n";
        out << "Vl_V = " << format_roundtrip(c.ramp.Vl) << '\n';
        out << "Vh_V = " << format_roundtrip(c.ramp.Vh) << '\n';
    } else {
        out << "ramp = feedforward\n";
        out << "kl = " << format_roundtrip(c.ramp.kl) << '\n';
        out << "kh = " << format_roundtrip(c.ramp.kh) << '\n';
    }
    if (cfg.series_n_terms)
        out << "series_n_terms = " << *cfg.series_n_terms << '\n';
    if (cfg.target_vo)
        out << "target_vo_V = " << format_roundtrip(*cfg.target_vo) << '\n';
    return out.str();
}

} // namespace pdbuck
