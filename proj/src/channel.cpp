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


#include "simswipt/channel.hpp"

namespace simswipt
{
    double PathLossModel::fixed_loss_db() const
    {
        const double lf = std::log10(carrier_mhz);
        return 46.3 + 33.9 * lf - 13.82 * std::log10(ap_height) - (1.1 * lf - 0.7) * rx_height + (1.56 * lf - 0.8);
    }

    double PathLossModel::path_gain_db(double distance) const
    {
        if (!(distance > 0))
            throw std::invalid_argument("path_gain_db: distance must be positive");
        const double L = fixed_loss_db();
        const double km = distance / 1000.0;
        const double d0_km = d0 / 1000.0;
        const double d1_km = d1 / 1000.0;
        if (distance > d1)
            return -L - 35.0 * std::log10(km);
        if (distance > d0)
            return -L - 15.0 * std::log10(d1_km) - 20.0 * std::log10(km);
        return -L - 15.0 * std::log10(d1_km) - 20.0 * std::log10(d0_km);
    }

    double large_scale_fading(const PathLossModel &model, double distance, double shadow_db)
    {
        const double shadow = distance > model.d1 ? shadow_db : 0.0;
        return db_to_linear(model.path_gain_db(distance) + shadow);
    }

    CVector los_steering(const ReceiverGeometry &rg, const SimGeometry<double> &geom)
    {
        const int S = geom.elements;
        if (rg.distance.size() != S)
            throw DimensionError("los_steering: receiver geometry does not match the element count");
        const double k = 2.0 * pi_v<double> * geom.element_spacing / geom.wavelength;
        CVector z(S);
        for (int s = 1; s <= S; ++s)
        {
            const GridIndex g = element_grid_index(s, S);
            const double phase = k * (g.z * rg.sin_elevation(s - 1) + g.y * rg.sin_azimuth_cos_elevation(s - 1));
            z(s - 1) = std::polar(1.0, phase);
        }
        return z;
    }

    ChannelRealization draw_channel(const LinkStatistics &link, const CMatrix &F, Rng &rng)
    {
        if (link.los.size() != F.rows())
            throw DimensionError("draw_channel: steering vector does not match F");
        const double bb = link.beta_bar();
        ChannelRealization out;
        out.z = std::sqrt(bb) * (std::sqrt(link.kappa) * link.los + complex_gaussian(F.rows(), rng));
        out.g = F.adjoint() * out.z;
        return out;
    }

    double los_power(const LinkStatistics &link, const CMatrix &F)
    {
        return link.kappa * link.beta_bar() * (F.adjoint() * link.los).squaredNorm();
    }

    double channel_second_moment(const LinkStatistics &link, const CMatrix &F)
    {
        return los_power(link, F) + link.beta_bar() * F.squaredNorm();
    }

    CVector channel_mean(const LinkStatistics &link, const CMatrix &F)
    {
        return std::sqrt(link.beta_bar() * link.kappa) * (F.adjoint() * link.los);
    }
}
