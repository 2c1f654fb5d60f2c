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


#ifndef SIMSWIPT_HARNESS_HPP
#define SIMSWIPT_HARNESS_HPP

#include "simswipt/config.hpp"
#include "simswipt/optimize.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace simswipt
{
    // Geometry-level realization of one seed: positions, stacks, fading and
    // pilots. Independent of the phase and power policies.
    struct Scenario
    {
        SystemConfig config;
        std::uint64_t seed = 0;
        SystemParams params;
        SimGeometry<double> geometry;
        NetworkLayout layout;
        std::vector<PropagationStack<double>> stacks; // per AP
        std::vector<std::vector<LinkStatistics>> links; // [m][k]
        PilotAssignment pilots;
    };

    SystemParams system_params(const SystemConfig &cfg);

    // Uniform positions in the square, APs and receivers at their heights.
    NetworkLayout draw_layout(const SystemConfig &cfg, Rng &rng);

    Scenario build_scenario(const SystemConfig &cfg, std::uint64_t seed);

    PhaseConfig choose_phases(const Scenario &sc, PhasePolicy policy);

    NetworkModel build_model(const Scenario &sc, const PhaseConfig &phases);

    Thresholds thresholds(const SystemConfig &cfg);

    struct RunResult
    {
        Policy policy;
        PerformanceReport report;
        PowerAllocation power;
        PhaseConfig phases;
        bool feasible = true;   // false when PPA found no feasible point
        double se_target = 0.0; // target handed to the SCA
        std::optional<ScaResult> sca;
    };

    // Full pipeline for one seed. An infeasible PPA run keeps the EPA
    // allocation and reports feasible = false.
    RunResult run_policy(const Scenario &sc, const Policy &policy);
    RunResult run_scenario(const SystemConfig &cfg, const Policy &policy, std::uint64_t seed);

    // Seed of replicate r of a sweep with master seed `seed`.
    std::uint64_t replicate_seed(std::uint64_t seed, int r);

    struct SweepRow
    {
        std::string sweep_var;
        double value = 0.0;
        std::string policy;
        std::string metric;
        double mean = 0.0;
        double std_error = 0.0;
        int seed_count = 0;
    };

    struct SweepResult
    {
        std::string config_hash;
        std::uint64_t seed = 0;
        std::vector<SweepRow> rows;

        const SweepRow *find(const std::string &var, double value, const std::string &policy,
                             const std::string &metric) const;
    };

    // Header sweep_var,value,policy,metric,mean,stderr,seed_count,config_hash,seed.
    void write_csv(std::ostream &os, const SweepResult &result);

    std::vector<Policy> all_policies();

    // One run per (L, policy, replicate); metrics sum_he, min_se and feasible.
    SweepResult sweep_layers(const SystemConfig &cfg, const std::vector<int> &layers,
                             const std::vector<Policy> &policies);

    // N = fixed_mn / M per point.
    SweepResult sweep_aps(const SystemConfig &cfg, const std::vector<int> &aps, int fixed_mn,
                          const std::vector<Policy> &policies);

    // One run at cfg.seed under one policy; rows use sweep_var "none" and add
    // per-receiver metrics.
    SweepResult simulate(const SystemConfig &cfg, const Policy &policy);

    struct ValidationReport
    {
        std::vector<TermCheck> terms;
        double max_abs_z = 0.0;
        bool passed = true;
    };

    // Closed forms against the Monte Carlo decomposition under EPA and the
    // configured phase policy; fails when any |z| > z_limit.
    ValidationReport validate(const SystemConfig &cfg, double z_limit = 4.0);
    void write_validation(std::ostream &os, const ValidationReport &report);
}

#endif // SIMSWIPT_HARNESS_HPP
