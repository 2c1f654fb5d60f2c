// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#ifndef SIMSWIPT_CONFIG_HPP
#define SIMSWIPT_CONFIG_HPP

#include "simswipt/channel.hpp"
#include "simswipt/energy.hpp"
#include "simswipt/estimation.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace simswipt
{
    enum class PhasePolicy
    {
        random,
        equal,
        heuristic,
    };

    enum class PowerPolicy
    {
        epa,
        ppa,
    };

    enum class PpaTarget
    {
        maxmin, // largest common SE target found by bisection; infeasible below se_target
        fixed,  // se_target as given
    };

    enum class ServingSets
    {
        all,   // every AP serves both receiver types
        split, // even-indexed APs serve IRs, odd-indexed APs serve ERs
    };

    struct Policy
    {
        PhasePolicy phase = PhasePolicy::heuristic;
        PowerPolicy power = PowerPolicy::ppa;
        bool operator==(const Policy &) const = default;
    };

    std::string to_string(PhasePolicy p);
    std::string to_string(PowerPolicy p);
    std::string to_string(const Policy &p); // "heuristic-ppa"
    Policy parse_policy(const std::string &text);

    // Every scalar of one experiment. Sections of the text format are given
    // in brackets.
    struct SystemConfig
    {
        // [system]
        int aps = 3;
        int antennas = 4;
        int irs = 2;
        int ers = 2;
        int tau = 0; // 0 selects K_i + K_e (orthogonal pilots)
        int coherence = 200;
        double dl_power_w = 1.0;
        double ul_power_w = 0.2;
        double noise_dbm = -92.0;
        double kappa = 2.0;
        PilotPolicy pilots = PilotPolicy::round_robin;
        ServingSets serving = ServingSets::all;

        // [sim]
        int layers = 2;
        int elements = 9;
        double carrier_mhz = 1900.0;
        double element_spacing_wl = 0.5;
        double thickness_wl = 5.0;   // layer spacing = thickness / L wavelengths
        double layer_spacing_m = 0.0; // overrides thickness_wl when > 0

        // [layout]
        double side_m = 100.0;
        double ap_height_m = 15.0;
        double rx_height_m = 1.65;
        double d0_m = 10.0;
        double d1_m = 50.0;
        double shadow_std_db = 8.0;

        // [energy]
        double eh_slope = 150.0;
        double eh_threshold_w = 0.024;
        double eh_max_power_w = 0.024;
        double energy_target_w = 1e-12; // per-ER harvested floor

        // [rate]
        double se_target = 0.2; // S per IR
        PpaTarget ppa_target = PpaTarget::maxmin;

        // [optimize]
        int candidates = 200;
        int heuristic_sweeps = 1;
        int polish_iterations = 20;
        int sca_max_iterations = 30;
        double sca_tolerance = 1e-6;

        // [run]
        std::uint64_t seed = 1;
        int seeds = 20;
        int trials = 10000;
        int workers = 1;
        Policy policy;
        std::vector<int> layer_values{1, 2, 3, 4};
        std::vector<int> ap_values{1, 2, 3, 4, 6};
        int fixed_mn = 12;

        bool operator==(const SystemConfig &) const = default;

        int receivers() const { return irs + ers; }
        int pilot_length() const { return tau > 0 ? tau : receivers(); }
        double wavelength() const;
        double layer_spacing() const;
        SimGeometry<double> geometry() const;
        PathLossModel path_loss() const;
        EHParams eh() const;

        // Throws ConfigError naming the offending key.
        void validate() const;
    };

    // Parses the sectioned key = value format. Unknown sections or keys and
    // invalid values raise ConfigError. Keys left at their default are listed
    // on `summary` when it is non-null.
    SystemConfig parse_config(std::istream &is, std::ostream *summary = nullptr);
    SystemConfig load_config(const std::string &path, std::ostream *summary = nullptr);

    void write_config(std::ostream &os, const SystemConfig &cfg);
    std::string config_text(const SystemConfig &cfg);
    void save_config(const std::string &path, const SystemConfig &cfg);

    // FNV-1a of config_text() with run.seed and run.workers reset, 16 hex digits.
    std::string config_hash(const SystemConfig &cfg);

    // Small pilot-contaminated scenario used by the validation command.
    SystemConfig contaminated_preset();
}

#endif // SIMSWIPT_CONFIG_HPP
