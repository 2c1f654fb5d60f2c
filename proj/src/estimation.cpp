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


#include "simswipt/estimation.hpp"

namespace simswipt
{
    std::vector<int> PilotAssignment::copilots(int k) const
    {
        std::vector<int> out;
        for (int j = 0; j < receivers(); ++j)
            if (shares(k, j))
                out.push_back(j);
        return out;
    }

    PilotAssignment assign_pilots(int K, int tau, PilotPolicy policy, Rng *rng)
    {
        if (K < 0)
            throw std::invalid_argument("assign_pilots: receiver count must be non-negative");
        if (tau < 1)
            throw std::invalid_argument("assign_pilots: pilot length must be >= 1");
        PilotAssignment out;
        out.length = tau;
        out.pilot.resize(static_cast<std::size_t>(K));
        if (policy == PilotPolicy::round_robin)
        {
            for (int k = 0; k < K; ++k)
                out.pilot[static_cast<std::size_t>(k)] = k % tau;
            return out;
        }
        if (!rng)
            throw std::invalid_argument("assign_pilots: random policy needs a generator");
        std::uniform_int_distribution<int> pick(0, tau - 1);
        for (auto &p : out.pilot)
            p = pick(*rng);
        return out;
    }

    LinkEstimate estimate_statistics(const CMatrix &F, const LinkStatistics &link, double copilot_beta_bar,
                                     const UplinkParams &ul)
    {
        if (link.los.size() != F.rows())
            throw DimensionError("estimate_statistics: steering vector does not match F");
        if (!(ul.noise_power > 0) || !(ul.power > 0) || ul.tau < 1)
            throw std::invalid_argument("estimate_statistics: uplink parameters must be positive");

        const Index N = F.cols();
        const double bb = link.beta_bar();
        const double tr = ul.tau * ul.power;
        const CMatrix R = F.adjoint() * F;
        const CMatrix C = tr * copilot_beta_bar * R + ul.noise_power * CMatrix::Identity(N, N);
        const CMatrix CinvR = C.llt().solve(R);

        LinkEstimate e;
        e.beta_bar = bb;
        e.mean = channel_mean(link, F);
        e.filter = std::sqrt(tr) * bb * CinvR.adjoint();
        const CMatrix S = tr * bb * bb * (R * CinvR);
        e.estimate_cov = (S + S.adjoint()) / 2.0;
        e.error_cov = bb * R - e.estimate_cov;
        e.error_cov = (e.error_cov + e.error_cov.adjoint()).eval() / 2.0;
        e.gamma = e.estimate_cov.trace().real();
        e.alpha = e.mean.squaredNorm() + e.gamma;
        e.nlos_power = bb * R.trace().real();
        return e;
    }

    double gamma_isotropic(double beta_bar, double copilot_beta_bar, double trace, int N, const UplinkParams &ul)
    {
        const double tr = ul.tau * ul.power;
        return tr * beta_bar * beta_bar * trace * trace / (tr * copilot_beta_bar * trace + N * ul.noise_power);
    }

    CVector estimate_instant(const LinkEstimate &e, const CMatrix &F, std::span<const PilotContribution> copilots,
                             const CVector &noise, const UplinkParams &ul)
    {
        if (noise.size() != F.cols())
            throw DimensionError("estimate_instant: noise length must equal the antenna count");
        CVector z = CVector::Zero(F.rows());
        for (const auto &c : copilots)
            z += std::sqrt(c.beta_bar) * *c.nlos;
        const CVector y = std::sqrt(ul.tau * ul.power) * (F.adjoint() * z) + noise;
        return e.mean + e.filter * y;
    }
}
