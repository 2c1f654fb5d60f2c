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


#ifndef SIMSWIPT_CHANNEL_HPP
#define SIMSWIPT_CHANNEL_HPP

#include "simswipt/geometry.hpp"
#include "simswipt/rng.hpp"

namespace simswipt
{
    // Three-slope path loss (Hata-COST231 fixed loss, 35/20/0 dB per decade
    // beyond d1, between d0 and d1, below d0). Shadowing applies beyond d1 only.
    struct PathLossModel
    {
        double carrier_mhz = 1900.0;
        double ap_height = 15.0;   // [m]
        double rx_height = 1.65;   // [m]
        double d0 = 10.0;          // [m]
        double d1 = 50.0;          // [m]
        double shadow_std_db = 8.0;

        double fixed_loss_db() const;
        // Path gain in dB (negative) at 3-D distance d [m], no shadowing.
        double path_gain_db(double distance) const;
    };

    // Linear large-scale fading; `shadow_db` is the realized shadowing draw in dB.
    double large_scale_fading(const PathLossModel &model, double distance, double shadow_db);

    // LoS steering vector of the last layer towards one receiver:
    //   [zbar]_s = exp(zeta (s_z sin chi_s + s_y sin eps_s cos chi_s)), zeta = j 2 pi d_PS / lambda
    CVector los_steering(const ReceiverGeometry &rg, const SimGeometry<double> &geom);

    struct LinkStatistics
    {
        double beta = 0.0;   // large-scale fading
        double kappa = 0.0;  // Ricean factor
        CVector los;         // zbar, unit-modulus entries

        double beta_bar() const { return beta / (1.0 + kappa); }
    };

    struct ChannelRealization
    {
        CVector z; // last layer -> receiver
        CVector g; // F^H z
    };

    // z = sqrt(beta_bar) (sqrt(kappa) zbar + ztilde), ztilde ~ CN(0, I).
    ChannelRealization draw_channel(const LinkStatistics &link, const CMatrix &F, Rng &rng);

    // kappa beta_bar zbar^H F F^H zbar, the LoS part of E||g||^2.
    double los_power(const LinkStatistics &link, const CMatrix &F);

    // E||g||^2 = kappa beta_bar tr(F F^H zbar zbar^H) + beta_bar tr(F F^H).
    double channel_second_moment(const LinkStatistics &link, const CMatrix &F);

    // Mean of g: sqrt(beta_bar kappa) F^H zbar.
    CVector channel_mean(const LinkStatistics &link, const CMatrix &F);
}

#endif // SIMSWIPT_CHANNEL_HPP
