#pragma once

#include <cstdint>
#include <string>

#include "cachenet/cceo.hpp"
#include "cachenet/mc.hpp"
#include "cachenet/model.hpp"
#include "cachenet/twostair.hpp"

namespace cachenet {

// Full simulation configuration. The JSON file uses field units people
// actually quote (dBm, per km^2, MHz, GHz); everything is converted to SI
// here at the boundary. Every field has a default, so {} is a valid config.
struct SimConfig {
    static constexpr int kSchemaVersion = 1;

    // library
    int num_contents = 100;
    double cache_capacity = 10.0;
    double zipf_exponent = 1.5;
    std::vector<double> sizes;  // empty = unit sizes

    // delivery
    double rate_bps = 4e5;

    MuTierConfig mu;
    MmTierConfig mm;
    McParams mc;
    CceoParams cceo;
    NewtonParams newton;

    // Remembered for the config hash / reporting.
    std::uint64_t seed = 1;

    ContentLibrary library() const;
    double phi_mu() const;
    double phi_mm() const;

    // FNV-1a over the canonical serialised form.
    std::uint64_t hash() const;
    std::string to_json_string() const;

    // Parses and validates. Unknown keys and malformed values raise
    // std::invalid_argument with the offending field path.
    static SimConfig from_json_string(const std::string& text);
    static SimConfig from_file(const std::string& path);
};

std::string format_g12(double v);

}  // namespace cachenet
