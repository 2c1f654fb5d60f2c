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


#ifndef SIMSWIPT_NETWORK_HPP
#define SIMSWIPT_NETWORK_HPP

#include "simswipt/estimation.hpp"
#include "simswipt/energy.hpp"

#include <vector>

namespace simswipt
{
    // Scalar system parameters consumed by the closed forms and optimizers.
    struct SystemParams
    {
        int aps = 1;
        int antennas = 1;
        int irs = 1;
        int ers = 1;
        int tau = 2;
        int coherence = 200;     // tau_c
        double dl_power = 1.0;   // rho_d tilde [W]
        double ul_power = 0.2;   // rho_u [W]
        double noise_power = dbm_to_watt(-92.0);
        double kappa = 2.0;
        EHParams eh;
        std::vector<bool> serves_ir; // M_I membership, empty means all
        std::vector<bool> serves_er; // M_E membership, empty means all

        int receivers() const { return irs + ers; }
        int er_index(int ke) const { return irs + ke; }
        double rho_d() const { return dl_power / noise_power; }
        double prelog() const { return 1.0 - static_cast<double>(tau) / coherence; }
        bool ap_serves_ir(int m) const { return serves_ir.empty() || serves_ir.at(static_cast<std::size_t>(m)); }
        bool ap_serves_er(int m) const { return serves_er.empty() || serves_er.at(static_cast<std::size_t>(m)); }
        UplinkParams uplink() const { return {tau, ul_power, noise_power}; }

        void validate() const;
    };

    // Power-control coefficients: ir(m, ki), er(m, ke).
    struct PowerAllocation
    {
        MatrixXd ir;
        MatrixXd er;

        // Non-negativity and per-AP simplex budgets within tol.
        bool feasible(const SystemParams &p, double tol = 1e-9) const;
    };

    // Everything downstream of geometry for one scenario realization.
    struct NetworkModel
    {
        SystemParams params;
        PilotAssignment pilots;
        std::vector<CMatrix> aggregate;                   // F_m
        std::vector<double> trace;                        // tr(F_m F_m^H)
        std::vector<std::vector<LinkStatistics>> links;   // [m][k]
        std::vector<std::vector<LinkEstimate>> estimates; // [m][k]

        const LinkEstimate &est(int m, int k) const { return estimates[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)]; }
        const LinkStatistics &link(int m, int k) const { return links[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)]; }
    };

    NetworkModel make_network_model(const SystemParams &params, PilotAssignment pilots, std::vector<CMatrix> aggregate,
                                    std::vector<std::vector<LinkStatistics>> links);
}

#endif // SIMSWIPT_NETWORK_HPP
