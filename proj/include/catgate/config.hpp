// config.hpp — Operator-facing configuration: JSON parameter files in bench
// units (GHz, MHz, us), validated and converted to angular frequencies on load.

#pragma once

#include <string>

#include "catgate/device.hpp"

namespace catgate {

struct RunConfig {
    DeviceParams params;          // angular units
    double kappa_inv = 45e-6;     // s; default cavity-decay setting
    double gtilde_ratio = 0.0;    // dependent-coupling rules as loaded
    double gprime_ratio = 0.0;
    double gcross_ratio = 0.0;
    std::string source;           // file path or "builtin"
};

/// Built-in default configuration (identical to the bundled table1 preset).
RunConfig default_config();

/// Load and validate a JSON parameter file. Unknown keys are rejected with a
/// key-path message; units are validated and converted at this boundary.
RunConfig load_config(const std::string& path);

/// Parse from a JSON string (used by load_config and the tests).
RunConfig parse_config(const std::string& json_text, const std::string& source_name);

/// Canonical JSON in bench units; reloading the dump reproduces the params.
std::string dump_config(const RunConfig& cfg);

}  // namespace catgate
