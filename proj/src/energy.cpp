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


#include "simswipt/energy.hpp"

namespace simswipt
{
    void EHParams::validate() const
    {
        if (!(slope > 0))
            throw std::invalid_argument("EHParams: slope must be positive");
        if (!(max_power > 0))
            throw std::invalid_argument("EHParams: max_power must be positive");
        if (!std::isfinite(threshold))
            throw std::invalid_argument("EHParams: threshold must be finite");
        const double om = omega();
        if (!(om > 0 && om < 1))
            throw std::invalid_argument("EHParams: Omega must lie in (0, 1)");
    }

    double logistic(double q, const EHParams &eh)
    {
        return eh.max_power / (1.0 + std::exp(-eh.slope * (q - eh.threshold)));
    }

    double nl_eh(double q, const EHParams &eh)
    {
        if (!(q >= 0))
            throw std::domain_error("nl_eh: RF energy must be non-negative");
        const double u = std::exp(eh.slope * eh.threshold);
        const double x = std::exp(-eh.slope * q);
        return eh.max_power * -std::expm1(-eh.slope * q) / (1.0 + u * x);
    }

    double xi_inverse(double target, const EHParams &eh)
    {
        if (!(target > 0 && target < eh.max_power))
            throw std::domain_error("xi_inverse: target must lie in (0, phi)");
        return eh.threshold - std::log((eh.max_power - target) / target) / eh.slope;
    }

    double required_rf_energy(double e, const EHParams &eh)
    {
        if (!(e >= 0 && e < eh.max_power))
            throw std::domain_error("required_rf_energy: harvested energy must lie in [0, phi)");
        const double u = std::exp(eh.slope * eh.threshold);
        const double r = e / eh.max_power;
        return (std::log1p(u * r) - std::log1p(-r)) / eh.slope;
    }
}
