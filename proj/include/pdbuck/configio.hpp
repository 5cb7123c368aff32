#pragma once

#include <optional>
#include <string>

#include "pdbuck/config.hpp"

namespace pdbuck {

// A parsed config file: the converter parameters plus the optional
// tool-level keys that ride along in the same document.
struct ConfigFile {
    ConverterConfig converter;
    std::optional<int> series_n_terms;
    std::optional<double> target_vo;
};

// Parses the flat `key = value` format (one pair per line, '#' comments).
// Keys: mode (voltage|current), L_H, C_F, R_ohm, Rc_ohm, Rs_ohm (current
// mode), T_s, Vr_V, g, g2_num, g2_den (space-separated ascending
// coefficients), ramp (fixed|feedforward), Vl_V, Vh_V (fixed), kl, kh
// (feedforward), series_n_terms (optional), target_vo_V (optional).
// Unknown keys, missing required keys, or invariant violations throw
// InvalidConfig with a diagnostic message.
[[nodiscard]] ConfigFile parse_config(const std::string& text);

// Reads and parses a config file from disk; throws InvalidConfig on
// unreadable paths.
[[nodiscard]] ConfigFile load_config(const std::string& path);

// Serializes back to the flat format; parse_config(serialize_config(c))
// reproduces c exactly (round-trip property).
[[nodiscard]] std::string serialize_config(const ConfigFile& cfg);

} // namespace pdbuck
