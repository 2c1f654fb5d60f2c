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


#ifndef SIMSWIPT_ENERGY_HPP
#define SIMSWIPT_ENERGY_HPP

#include "simswipt/types.hpp"

namespace simswipt
{
    // Logistic non-linear energy-harvesting circuit.
    struct EHParams
    {
        double slope = 150.0;      // xi
        double threshold = 0.024;  // chi
        double max_power = 0.024;  // phi [W]

        // Omega = 1 / (1 + exp(xi chi)), the zero-input output of the raw logistic.
        double omega() const { return 1.0 / (1.0 + std::exp(slope * threshold)); }
        void validate() const;
    };

    // Lambda(Q) = phi / (1 + exp(-xi (Q - chi))).
    double logistic(double q, const EHParams &eh);

    // E_NL = (Lambda(Q) - phi Omega) / (1 - Omega). Evaluated without the
    // cancellation in the numerator, so it stays accurate for tiny Q.
    double nl_eh(double q, const EHParams &eh);

    // Xi(x) = chi - ln((phi - x) / x) / xi, the inverse of Lambda on (0, phi).
    double xi_inverse(double target, const EHParams &eh);

    // RF energy Q needed for an output E_NL = e, i.e. Xi((1 - Omega) e + phi Omega),
    // evaluated in cancellation-free form. Domain 0 <= e < phi.
    double required_rf_energy(double e, const EHParams &eh);

    // (1 - Omega) e + phi Omega.
    inline double shifted_output(double e, const EHParams &eh)
    {
        const double om = eh.omega();
        return (1.0 - om) * e + eh.max_power * om;
    }
}

#endif // SIMSWIPT_ENERGY_HPP
