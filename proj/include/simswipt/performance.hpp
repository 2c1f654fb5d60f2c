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


#ifndef SIMSWIPT_PERFORMANCE_HPP
#define SIMSWIPT_PERFORMANCE_HPP

#include "simswipt/network.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace simswipt
{
    namespace detail
    {
        template <typename Real>
        void require_psd(const CMatrixT<Real> &cov, const char *who)
        {
            if (cov.rows() != cov.cols())
                throw DimensionError(std::string(who) + ": covariance must be square");
            if (cov.rows() == 0)
                return;
            const CMatrixT<Real> herm = (cov + cov.adjoint()) / Real(2);
            const Real scale = std::max(herm.cwiseAbs().maxCoeff(), std::numeric_limits<Real>::min());
            if ((cov - herm).cwiseAbs().maxCoeff() > Real(1e-8) * scale)
                throw std::invalid_argument(std::string(who) + ": covariance is not Hermitian");
            Eigen::SelfAdjointEigenSolver<CMatrixT<Real>> es(herm, Eigen::EigenvaluesOnly);
            if (es.eigenvalues().minCoeff() < -Real(1e-8) * scale)
                throw std::invalid_argument(std::string(who) + ": covariance is not positive semi-definite");
        }
    }

    // E||h||^4 for h ~ CN(mean, cov):
    //   |tr S|^2 + tr(S S) + |m^H m|^2 + 2 m^H m tr S + 2 m^H S m
    template <typename Real>
    Real moment4_self(const CVectorT<Real> &mean, const CMatrixT<Real> &cov)
    {
        if (mean.size() != cov.rows())
            throw DimensionError("moment4_self: mean/covariance size mismatch");
        detail::require_psd(cov, "moment4_self");
        const Real tr = cov.trace().real();
        const Real tr2 = (cov * cov).trace().real();
        const Real mm = mean.squaredNorm();
        const Real msm = (mean.adjoint() * cov * mean)(0, 0).real();
        return tr * tr + tr2 + mm * mm + 2 * mm * tr + 2 * msm;
    }

    // E|h_k^H h_k'|^2 for co-pilot estimates h_k = m_k + e, h_k' = m_k' + sqrt(upsilon) e,
    // e ~ CN(0, cov_k), upsilon = (bb_k' / bb_k)^2:
    //   |a|^2 + 2 sqrt(u) Re(a) tr S + u (|tr S|^2 + tr(S S)) + u m_k^H S m_k + m_k'^H S m_k'
    // with a = m_k^H m_k'. Reduces to moment4_self for k' = k, u = 1.
    template <typename Real>
    Real moment4_cross(const CVectorT<Real> &mean_k, const CVectorT<Real> &mean_kp, const CMatrixT<Real> &cov_k,
                       Real upsilon)
    {
        if (mean_k.size() != cov_k.rows() || mean_kp.size() != cov_k.rows())
            throw DimensionError("moment4_cross: mean/covariance size mismatch");
        if (!(upsilon >= 0))
            throw std::invalid_argument("moment4_cross: upsilon must be non-negative");
        detail::require_psd(cov_k, "moment4_cross");
        const Real nu = std::sqrt(upsilon);
        const std::complex<Real> a = mean_k.dot(mean_kp);
        const Real tr = cov_k.trace().real();
        const Real tr2 = (cov_k * cov_k).trace().real();
        const Real q_k = (mean_k.adjoint() * cov_k * mean_k)(0, 0).real();
        const Real q_kp = (mean_kp.adjoint() * cov_k * mean_kp)(0, 0).real();
        return std::norm(a) + 2 * nu * a.real() * tr + upsilon * (tr * tr + tr2) + upsilon * q_k + q_kp;
    }

    // Per-AP expectation tables over the unified receiver index. For AP m:
    //   gain[m](k, k') = E|g_mk^H w_mk'|^2 with w_mk' = g_hat_mk' / sqrt(alpha_mk'),
    // split by pilot sharing into mu (k' = k), eps (co-pilot) and c (orthogonal).
    struct MomentTable
    {
        MatrixXd self4;               // a_bar(m, k)
        MatrixXd own;                 // mu_bar(m, k)
        MatrixXd bu;                  // rho_bar(m, k) = mu_bar - alpha
        std::vector<MatrixXd> cross4; // b_bar[m](k, k'), NaN unless co-pilot
        std::vector<MatrixXd> copilot; // eps_bar[m](k, k'), NaN unless co-pilot and k' != k
        std::vector<MatrixXd> orth;   // c_bar[m](k, k'), NaN unless orthogonal pilots
        std::vector<MatrixXd> gain;   // merged E|g_mk^H w_mk'|^2
        std::vector<CMatrix> mean_gain; // E{g_mk^H w_mk'}

        double at(int m, int k, int kp) const { return gain[static_cast<std::size_t>(m)](k, kp); }
    };

    MomentTable build_moment_table(const NetworkModel &model);

    // Denominator terms of the IR SINR with rho_d factored out:
    //   SINR = desired / (bu + iui_pc + eui_pc + iui_o + eui_o + noise), noise = 1 / rho_d.
    struct SinrTerms
    {
        double desired = 0.0;
        double bu = 0.0;
        double iui_pc = 0.0;
        double eui_pc = 0.0;
        double iui_o = 0.0;
        double eui_o = 0.0;
        double noise = 0.0;

        double denominator() const { return bu + iui_pc + eui_pc + iui_o + eui_o + noise; }
        double sinr() const { return desired / denominator(); }
    };

    SinrTerms sinr_terms(int ki, const PowerAllocation &power, const MomentTable &table, const NetworkModel &model);
    double sinr_closed(int ki, const PowerAllocation &power, const MomentTable &table, const NetworkModel &model);

    // (1 - tau / tau_c) log2(1 + SINR).
    double se(double sinr, int tau, int coherence);

    // 2^{target / (1 - tau/tau_c)} - 1, the SINR equivalent of an SE target.
    double sinr_threshold(double se_target, int tau, int coherence);

    // Average RF energy at ER ke:
    //   (tau_c - tau) sigma^2 rho_d [1/rho_d + sum_m sum_k' eta_mk' E|g_mke^H w_mk'|^2]
    double q_closed(int ke, const PowerAllocation &power, const MomentTable &table, const NetworkModel &model);

    struct PerformanceReport
    {
        VectorXd sinr;  // per IR
        VectorXd se;    // per IR [bit/s/Hz]
        VectorXd q;     // per ER [J]
        VectorXd e_nl;  // per ER [W]
        double sum_he = 0.0;
        double min_se = 0.0; // 0 when there are no IRs
    };

    PerformanceReport evaluate(const NetworkModel &model, const MomentTable &table, const PowerAllocation &power);

    // ---- Monte Carlo decomposition ---------------------------------------

    struct Estimate
    {
        double mean = 0.0;
        double std_error = 0.0;
    };

    struct SinrEstimate
    {
        Estimate desired, bu, iui_pc, eui_pc, iui_o, eui_o, sinr;
    };

    struct McOptions
    {
        int trials = 10000;
        std::uint64_t seed = 1;
        int workers = 1;
    };

    struct McReport
    {
        int trials = 0;
        std::vector<SinrEstimate> ir;
        std::vector<Estimate> q;
        std::vector<CMatrix> mean_gain;      // empirical E{g_mk^H w_mk'}
        std::vector<MatrixXd> gain;          // empirical E|g_mk^H w_mk'|^2
        std::vector<MatrixXd> gain_std_error;
        MatrixXd estimate_power;             // empirical E||g_hat_mk||^2
        MatrixXd error_power;                // empirical E||g_mk - g_hat_mk||^2
    };

    // Draws channels, pilot noise and MMSE estimates, then forms sample means
    // of every expectation in the SINR and RF-energy decompositions. Requires
    // at least 10 trials.
    McReport mc_terms(const NetworkModel &model, const PowerAllocation &power, const McOptions &opts);

    // One line of a closed-form vs Monte Carlo comparison.
    struct TermCheck
    {
        std::string name;
        double closed = 0.0;
        double empirical = 0.0;
        double std_error = 0.0;

        double z() const;
        double relative_error() const;
    };

    std::vector<TermCheck> compare_terms(const NetworkModel &model, const MomentTable &table,
                                         const PowerAllocation &power, const McReport &mc);
}

#endif // SIMSWIPT_PERFORMANCE_HPP
