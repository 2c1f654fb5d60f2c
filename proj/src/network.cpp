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


#include "simswipt/network.hpp"

namespace simswipt
{
    void SystemParams::validate() const
    {
        if (aps < 1 || antennas < 1)
            throw std::invalid_argument("SystemParams: need at least one AP and one antenna");
        if (irs < 0 || ers < 0)
            throw std::invalid_argument("SystemParams: receiver counts must be non-negative");
        if (tau < 1 || tau >= coherence)
            throw std::invalid_argument("SystemParams: need 0 < tau < tau_c");
        if (!(dl_power > 0) || !(ul_power > 0) || !(noise_power > 0))
            throw std::invalid_argument("SystemParams: powers must be positive");
        if (!(kappa >= 0))
            throw std::invalid_argument("SystemParams: Ricean factor must be non-negative");
        if (!serves_ir.empty() && static_cast<int>(serves_ir.size()) != aps)
            throw std::invalid_argument("SystemParams: serves_ir must have one entry per AP");
        if (!serves_er.empty() && static_cast<int>(serves_er.size()) != aps)
            throw std::invalid_argument("SystemParams: serves_er must have one entry per AP");
        eh.validate();
    }

    bool PowerAllocation::feasible(const SystemParams &p, double tol) const
    {
        if (ir.rows() != p.aps || ir.cols() != p.irs || er.rows() != p.aps || er.cols() != p.ers)
            return false;
        if ((ir.size() > 0 && ir.minCoeff() < -tol) || (er.size() > 0 && er.minCoeff() < -tol))
            return false;
        for (int m = 0; m < p.aps; ++m)
        {
            if (p.irs > 0 && (p.ap_serves_ir(m) ? ir.row(m).sum() > 1.0 + tol : ir.row(m).cwiseAbs().maxCoeff() > tol))
                return false;
            if (p.ers > 0 && (p.ap_serves_er(m) ? er.row(m).sum() > 1.0 + tol : er.row(m).cwiseAbs().maxCoeff() > tol))
                return false;
        }
        return true;
    }

    NetworkModel make_network_model(const SystemParams &params, PilotAssignment pilots, std::vector<CMatrix> aggregate,
                                    std::vector<std::vector<LinkStatistics>> links)
    {
        params.validate();
        const int M = params.aps;
        const int K = params.receivers();
        if (static_cast<int>(aggregate.size()) != M || static_cast<int>(links.size()) != M)
            throw DimensionError("make_network_model: need one aggregate and one link row per AP");
        if (pilots.receivers() != K || pilots.length != params.tau)
            throw DimensionError("make_network_model: pilot assignment does not match the receiver set");

        NetworkModel model;
        model.params = params;
        model.pilots = std::move(pilots);
        model.aggregate = std::move(aggregate);
        model.links = std::move(links);
        model.trace.resize(static_cast<std::size_t>(M));
        model.estimates.resize(static_cast<std::size_t>(M));

        const UplinkParams ul = params.uplink();
        for (int m = 0; m < M; ++m)
        {
            const auto mi = static_cast<std::size_t>(m);
            const CMatrix &F = model.aggregate[mi];
            if (F.cols() != params.antennas)
                throw DimensionError("make_network_model: aggregate has the wrong antenna count");
            if (static_cast<int>(model.links[mi].size()) != K)
                throw DimensionError("make_network_model: link row has the wrong receiver count");
            model.trace[mi] = F.squaredNorm();
            model.estimates[mi].reserve(static_cast<std::size_t>(K));
            for (int k = 0; k < K; ++k)
            {
                double pooled = 0.0;
                for (int j : model.pilots.copilots(k))
                    pooled += model.link(m, j).beta_bar();
                model.estimates[mi].push_back(estimate_statistics(F, model.link(m, k), pooled, ul));
            }
        }
        return model;
    }
}
