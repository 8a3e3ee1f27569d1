#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace rmedge::cli {

inline constexpr const char* kVersion = "0.1.0";

struct ExperimentConfig {
    std::string subcommand;
    std::string dist = "ginibre";
    int n = 0;  // 0: subcommand default where one exists
    std::size_t samples = 0;
    std::uint64_t seed = 1;
    std::uint64_t index = 0;
    std::string method = "auto";
    double theta = 0;

    double z_re = 1, z_im = 0;
    double eta = 0;  // <= 0: subcommand default
    double delta = 0.3;

    std::vector<double> box;  // x_lo x_hi y_lo y_hi
    bool omega = false;       // count in the Omega boxes built from gamma_n
    double Cn = 3, tau = 0.05;

    int grid_level = 0;
    double T = 1e6, eta0 = 0;  // eta0 <= 0: n^{-7/8 - tau}
    double L = 1.05, l = 0.1, h = 0.3;
    bool gamma_geometry = false;

    std::vector<double> y_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::vector<double> t_grid{0.0, 1.0};
    std::size_t pairs = 100;
    double g = 1;

    std::string out = "rmedge_out";
    int workers = 0;
    bool serial = false;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
// Unknown keys are violations, reported by the caller.
void from_json(const nlohmann::json& j, ExperimentConfig& c, std::vector<std::string>& unknown);

// Fills subcommand defaults (n, eta, eta0) in place.
void resolve_defaults(ExperimentConfig& c);
std::vector<std::string> validate(const ExperimentConfig& c);

// Hash of the config with execution-only fields (out, workers, serial) removed.
std::string run_id(const ExperimentConfig& c);

std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);

}  // namespace rmedge::cli
