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


#ifndef SIMSWIPT_ESTIMATION_HPP
#define SIMSWIPT_ESTIMATION_HPP

#include "simswipt/channel.hpp"

#include <span>
#include <vector>

namespace simswipt
{
    enum class PilotPolicy
    {
        round_robin, // receiver k gets pilot k mod tau
        random,      // uniform i.i.d. pilot indices
    };

    // Pilot index per receiver (0-based) over the unified receiver index.
    struct PilotAssignment
    {
        int length = 1; // tau
        std::vector<int> pilot;

        int receivers() const { return static_cast<int>(pilot.size()); }
        bool shares(int k, int kp) const { return pilot.at(static_cast<std::size_t>(k)) == pilot.at(static_cast<std::size_t>(kp)); }
        // P_k, always contains k.
        std::vector<int> copilots(int k) const;
    };

    PilotAssignment assign_pilots(int K, int tau, PilotPolicy policy, Rng *rng = nullptr);

    struct UplinkParams
    {
        int tau = 1;
        double power = 0.2;          // rho_u [W]
        double noise_power = 1e-12;  // sigma_n^2 [W]
    };

    // Second-order description of the linear MMSE estimate of g = F^H z.
    struct LinkEstimate
    {
        CVector mean;         // gbar = sqrt(beta_bar kappa) F^H zbar
        CMatrix filter;       // A
        CMatrix estimate_cov; // Sigma_hat
        CMatrix error_cov;    // beta_bar F^H F - Sigma_hat
        double gamma = 0.0;   // tr(Sigma_hat)
        double alpha = 0.0;   // E||g_hat||^2 = ||gbar||^2 + gamma
        double beta_bar = 0.0;
        double nlos_power = 0.0; // beta_bar tr(F F^H)
    };

    // Estimation statistics of one link. `copilot_beta_bar` is the sum of
    // beta_bar over P_k (k included).
    LinkEstimate estimate_statistics(const CMatrix &F, const LinkStatistics &link, double copilot_beta_bar,
                                     const UplinkParams &ul);

    // Scalar gamma that treats F^H F as a scaled identity:
    //   tau rho_u bb^2 tr(FF^H)^2 / (tau rho_u sum_{P_k} bb tr(FF^H) + N sigma^2)
    // Equals LinkEstimate::gamma whenever F^H F = c I.
    double gamma_isotropic(double beta_bar, double copilot_beta_bar, double trace, int N, const UplinkParams &ul);

    // E||g - g_hat||^2 = beta_bar tr(F F^H) - gamma.
    inline double error_power(const LinkEstimate &e) { return e.nlos_power - e.gamma; }
    inline double alpha_mrt(const LinkEstimate &e) { return e.alpha; }

    // One co-pilot contribution to the received pilot: sqrt(beta_bar_k') F^H ztilde_k'.
    struct PilotContribution
    {
        double beta_bar;
        const CVector *nlos; // ztilde_k' (length S)
    };

    // g_hat = gbar + A (sqrt(tau rho_u) sum_{k' in P_k} sqrt(bb_k') F^H ztilde_k' + n).
    CVector estimate_instant(const LinkEstimate &e, const CMatrix &F, std::span<const PilotContribution> copilots,
                             const CVector &noise, const UplinkParams &ul);
}

#endif // SIMSWIPT_ESTIMATION_HPP
