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


#include "simswipt/performance.hpp"

#include <algorithm>
#include <limits>

namespace simswipt
{
    namespace
    {
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();

        double trace_product(const CMatrix &A, const CMatrix &B)
        {
            return A.cwiseProduct(B.transpose()).sum().real();
        }

        std::size_t idx(int i) { return static_cast<std::size_t>(i); }

        Estimate summarize(const std::vector<double> &samples)
        {
            const auto n = static_cast<double>(samples.size());
            double mean = 0.0;
            for (double v : samples)
                mean += v;
            mean /= n;
            double ss = 0.0;
            for (double v : samples)
                ss += (v - mean) * (v - mean);
            return {mean, std::sqrt(ss / (n - 1.0) / n)};
        }
    }

    MomentTable build_moment_table(const NetworkModel &model)
    {
        const int M = model.params.aps;
        const int K = model.params.receivers();
        MomentTable t;
        t.self4 = MatrixXd::Zero(M, K);
        t.own = MatrixXd::Zero(M, K);
        t.bu = MatrixXd::Zero(M, K);
        t.cross4.assign(idx(M), MatrixXd::Constant(K, K, nan));
        t.copilot.assign(idx(M), MatrixXd::Constant(K, K, nan));
        t.orth.assign(idx(M), MatrixXd::Constant(K, K, nan));
        t.gain.assign(idx(M), MatrixXd::Zero(K, K));
        t.mean_gain.assign(idx(M), CMatrix::Zero(K, K));

        for (int m = 0; m < M; ++m)
        {
            const CMatrix &F = model.aggregate[idx(m)];
            const CMatrix R = F.adjoint() * F;
            std::vector<CMatrix> second(idx(K)); // E{g_hat g_hat^H}
            std::vector<CMatrix> channel(idx(K)); // E{g g^H}
            for (int k = 0; k < K; ++k)
            {
                const LinkEstimate &e = model.est(m, k);
                second[idx(k)] = e.estimate_cov + e.mean * e.mean.adjoint();
                channel[idx(k)] = e.beta_bar * R + e.mean * e.mean.adjoint();
                t.self4(m, k) = moment4_self(e.mean, e.estimate_cov);
            }
            for (int k = 0; k < K; ++k)
            {
                const LinkEstimate &ek = model.est(m, k);
                for (int kp = 0; kp < K; ++kp)
                {
                    const LinkEstimate &ekp = model.est(m, kp);
                    if (!(ekp.alpha > 0))
                        continue;
                    const std::complex<double> cross_mean = ek.mean.dot(ekp.mean);
                    double g = 0.0;
                    std::complex<double> mg = cross_mean;
                    if (model.pilots.shares(k, kp))
                    {
                        const double ratio = ekp.beta_bar / ek.beta_bar;
                        const double b = kp == k ? t.self4(m, k)
                                                 : moment4_cross(ek.mean, ekp.mean, ek.estimate_cov, ratio * ratio);
                        t.cross4[idx(m)](k, kp) = b;
                        g = (b + trace_product(ek.error_cov, second[idx(kp)])) / ekp.alpha;
                        if (kp != k)
                            t.copilot[idx(m)](k, kp) = g;
                        mg += ratio * ek.gamma;
                    }
                    else
                    {
                        g = trace_product(channel[idx(k)], second[idx(kp)]) / ekp.alpha;
                        t.orth[idx(m)](k, kp) = g;
                    }
                    t.gain[idx(m)](k, kp) = g;
                    t.mean_gain[idx(m)](k, kp) = mg / std::sqrt(ekp.alpha);
                }
                t.own(m, k) = t.gain[idx(m)](k, k);
                t.bu(m, k) = t.own(m, k) - ek.alpha;
            }
        }
        return t;
    }

    SinrTerms sinr_terms(int ki, const PowerAllocation &power, const MomentTable &table, const NetworkModel &model)
    {
        const SystemParams &p = model.params;
        if (ki < 0 || ki >= p.irs)
            throw std::invalid_argument("sinr_terms: IR index out of range");
        SinrTerms out;
        double coherent = 0.0;
        for (int m = 0; m < p.aps; ++m)
        {
            if (p.ap_serves_ir(m))
            {
                const double eta = power.ir(m, ki);
                coherent += std::sqrt(eta * model.est(m, ki).alpha);
                out.bu += eta * table.bu(m, ki);
                for (int j = 0; j < p.irs; ++j)
                {
                    if (j == ki)
                        continue;
                    const double v = power.ir(m, j) * table.at(m, ki, j);
                    (model.pilots.shares(ki, j) ? out.iui_pc : out.iui_o) += v;
                }
            }
            if (p.ap_serves_er(m))
                for (int e = 0; e < p.ers; ++e)
                {
                    const int k = p.er_index(e);
                    const double v = power.er(m, e) * table.at(m, ki, k);
                    (model.pilots.shares(ki, k) ? out.eui_pc : out.eui_o) += v;
                }
        }
        out.desired = coherent * coherent;
        out.noise = 1.0 / p.rho_d();
        return out;
    }

    double sinr_closed(int ki, const PowerAllocation &power, const MomentTable &table, const NetworkModel &model)
    {
        return sinr_terms(ki, power, table, model).sinr();
    }

    double se(double sinr, int tau, int coherence)
    {
        if (!(sinr >= 0))
            throw std::domain_error("se: SINR must be non-negative");
        if (coherence < 1 || tau < 0 || tau > coherence)
            throw std::invalid_argument("se: need 0 <= tau <= tau_c");
        return (1.0 - static_cast<double>(tau) / coherence) * std::log2(1.0 + sinr);
    }

    double sinr_threshold(double se_target, int tau, int coherence)
    {
        const double prelog = 1.0 - static_cast<double>(tau) / coherence;
        if (!(prelog > 0))
            throw std::invalid_argument("sinr_threshold: pre-log factor is zero");
        return std::exp2(se_target / prelog) - 1.0;
    }

    double q_closed(int ke, const PowerAllocation &power, const MomentTable &table, const NetworkModel &model)
    {
        const SystemParams &p = model.params;
        if (ke < 0 || ke >= p.ers)
            throw std::invalid_argument("q_closed: ER index out of range");
        const int k = p.er_index(ke);
        double sum = 0.0;
        for (int m = 0; m < p.aps; ++m)
        {
            if (p.ap_serves_ir(m))
                for (int j = 0; j < p.irs; ++j)
                    sum += power.ir(m, j) * table.at(m, k, j);
            if (p.ap_serves_er(m))
                for (int e = 0; e < p.ers; ++e)
                    sum += power.er(m, e) * table.at(m, k, p.er_index(e));
        }
        return (p.coherence - p.tau) * p.noise_power * (1.0 + p.rho_d() * sum);
    }

    PerformanceReport evaluate(const NetworkModel &model, const MomentTable &table, const PowerAllocation &power)
    {
        const SystemParams &p = model.params;
        PerformanceReport r;
        r.sinr.resize(p.irs);
        r.se.resize(p.irs);
        r.q.resize(p.ers);
        r.e_nl.resize(p.ers);
        for (int ki = 0; ki < p.irs; ++ki)
        {
            r.sinr(ki) = sinr_closed(ki, power, table, model);
            r.se(ki) = se(r.sinr(ki), p.tau, p.coherence);
        }
        for (int ke = 0; ke < p.ers; ++ke)
        {
            r.q(ke) = q_closed(ke, power, table, model);
            r.e_nl(ke) = nl_eh(r.q(ke), p.eh);
        }
        r.sum_he = r.e_nl.sum();
        r.min_se = p.irs > 0 ? r.se.minCoeff() : 0.0;
        return r;
    }

    McReport mc_terms(const NetworkModel &model, const PowerAllocation &power, const McOptions &opts)
    {
        if (opts.trials < 10)
            throw std::invalid_argument("mc_terms: " + std::to_string(opts.trials) +
                                        " trials requested, at least 10 are needed for standard errors");
        const SystemParams &p = model.params;
        const int M = p.aps;
        const int K = p.receivers();
        const int T = opts.trials;
        const UplinkParams ul = p.uplink();
        const auto slab = idx(M) * idx(K) * idx(K);

        // X[t][m][k][k'] = g_mk^H g_hat_mk' / sqrt(alpha_mk')
        std::vector<std::complex<double>> X(idx(T) * slab);
        std::vector<double> est_pow(idx(T) * idx(M) * idx(K));
        std::vector<double> err_pow(est_pow.size());
        auto xat = [&](int t, int m, int k, int kp) -> std::complex<double> &
        { return X[idx(t) * slab + (idx(m) * idx(K) + idx(k)) * idx(K) + idx(kp)]; };

        parallel_for(T, opts.workers, [&](Index ti)
        {
            const int t = static_cast<int>(ti);
            Rng rng = make_stream(opts.seed, Stream::monte_carlo, {static_cast<std::uint64_t>(t)});
            std::vector<CVector> nlos(idx(K));
            std::vector<CVector> g(idx(K)), ghat(idx(K));
            for (int m = 0; m < M; ++m)
            {
                const CMatrix &F = model.aggregate[idx(m)];
                for (int k = 0; k < K; ++k)
                    nlos[idx(k)] = complex_gaussian(F.rows(), rng);
                std::vector<CVector> noise(idx(p.tau));
                for (auto &n : noise)
                    n = complex_gaussian(F.cols(), rng, p.noise_power);
                for (int k = 0; k < K; ++k)
                {
                    const LinkStatistics &link = model.link(m, k);
                    const double bb = link.beta_bar();
                    g[idx(k)] = F.adjoint() * (std::sqrt(bb) * (std::sqrt(link.kappa) * link.los + nlos[idx(k)]));
                    std::vector<PilotContribution> contrib;
                    for (int j : model.pilots.copilots(k))
                        contrib.push_back({model.link(m, j).beta_bar(), &nlos[idx(j)]});
                    ghat[idx(k)] = estimate_instant(model.est(m, k), F, contrib,
                                                    noise[idx(model.pilots.pilot[idx(k)])], ul);
                    const auto o = (idx(t) * idx(M) + idx(m)) * idx(K) + idx(k);
                    est_pow[o] = ghat[idx(k)].squaredNorm();
                    err_pow[o] = (g[idx(k)] - ghat[idx(k)]).squaredNorm();
                }
                for (int k = 0; k < K; ++k)
                    for (int kp = 0; kp < K; ++kp)
                    {
                        const double a = model.est(m, kp).alpha;
                        xat(t, m, k, kp) = a > 0 ? g[idx(k)].dot(ghat[idx(kp)]) / std::sqrt(a) : 0.0;
                    }
            }
        });

        McReport r;
        r.trials = T;
        r.mean_gain.assign(idx(M), CMatrix::Zero(K, K));
        r.gain.assign(idx(M), MatrixXd::Zero(K, K));
        r.gain_std_error.assign(idx(M), MatrixXd::Zero(K, K));
        r.estimate_power = MatrixXd::Zero(M, K);
        r.error_power = MatrixXd::Zero(M, K);

        std::vector<double> buf(idx(T));
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
            {
                for (int kp = 0; kp < K; ++kp)
                {
                    std::complex<double> s = 0.0;
                    for (int t = 0; t < T; ++t)
                    {
                        s += xat(t, m, k, kp);
                        buf[idx(t)] = std::norm(xat(t, m, k, kp));
                    }
                    r.mean_gain[idx(m)](k, kp) = s / static_cast<double>(T);
                    const Estimate e = summarize(buf);
                    r.gain[idx(m)](k, kp) = e.mean;
                    r.gain_std_error[idx(m)](k, kp) = e.std_error;
                }
                double sp = 0.0, se_ = 0.0;
                for (int t = 0; t < T; ++t)
                {
                    const auto o = (idx(t) * idx(M) + idx(m)) * idx(K) + idx(k);
                    sp += est_pow[o];
                    se_ += err_pow[o];
                }
                r.estimate_power(m, k) = sp / T;
                r.error_power(m, k) = se_ / T;
            }

        const double noise = 1.0 / p.rho_d();
        const double bessel = static_cast<double>(T) / (T - 1);
        r.ir.resize(idx(p.irs));
        for (int ki = 0; ki < p.irs; ++ki)
        {
            std::complex<double> u_mean = 0.0;
            for (int m = 0; m < M; ++m)
                if (p.ap_serves_ir(m))
                    u_mean += std::sqrt(power.ir(m, ki)) * r.mean_gain[idx(m)](ki, ki);
            const double u_abs = std::abs(u_mean);
            const std::complex<double> dir = u_abs > 0 ? std::conj(u_mean) / u_abs : 1.0;

            std::vector<double> ds(idx(T)), bu(idx(T)), ipc(idx(T)), epc(idx(T)), io(idx(T)), eo(idx(T)), den(idx(T));
            for (int t = 0; t < T; ++t)
            {
                std::complex<double> u = 0.0;
                double b = 0, a1 = 0, a2 = 0, a3 = 0, a4 = 0;
                for (int m = 0; m < M; ++m)
                {
                    if (p.ap_serves_ir(m))
                    {
                        const double eta = power.ir(m, ki);
                        const std::complex<double> x = xat(t, m, ki, ki);
                        u += std::sqrt(eta) * x;
                        b += eta * std::norm(x - r.mean_gain[idx(m)](ki, ki)) * bessel;
                        for (int j = 0; j < p.irs; ++j)
                        {
                            if (j == ki)
                                continue;
                            const double v = power.ir(m, j) * std::norm(xat(t, m, ki, j));
                            (model.pilots.shares(ki, j) ? a1 : a3) += v;
                        }
                    }
                    if (p.ap_serves_er(m))
                        for (int e = 0; e < p.ers; ++e)
                        {
                            const int k = p.er_index(e);
                            const double v = power.er(m, e) * std::norm(xat(t, m, ki, k));
                            (model.pilots.shares(ki, k) ? a2 : a4) += v;
                        }
                }
                ds[idx(t)] = (dir * u).real();
                bu[idx(t)] = b;
                ipc[idx(t)] = a1;
                epc[idx(t)] = a2;
                io[idx(t)] = a3;
                eo[idx(t)] = a4;
                den[idx(t)] = b + a1 + a2 + a3 + a4 + noise;
            }
            SinrEstimate &s = r.ir[idx(ki)];
            const Estimate d = summarize(ds);
            s.desired = {u_abs * u_abs, 2.0 * u_abs * d.std_error};
            s.bu = summarize(bu);
            s.iui_pc = summarize(ipc);
            s.eui_pc = summarize(epc);
            s.iui_o = summarize(io);
            s.eui_o = summarize(eo);
            const Estimate dn = summarize(den);
            const double sinr = s.desired.mean / dn.mean;
            const double rel_d = s.desired.mean > 0 ? s.desired.std_error / s.desired.mean : 0.0;
            const double rel_n = dn.std_error / dn.mean;
            s.sinr = {sinr, sinr * std::sqrt(rel_d * rel_d + rel_n * rel_n)};
        }

        const double scale = (p.coherence - p.tau) * p.noise_power;
        r.q.resize(idx(p.ers));
        for (int ke = 0; ke < p.ers; ++ke)
        {
            const int k = p.er_index(ke);
            for (int t = 0; t < T; ++t)
            {
                double sum = 0.0;
                for (int m = 0; m < M; ++m)
                {
                    if (p.ap_serves_ir(m))
                        for (int j = 0; j < p.irs; ++j)
                            sum += power.ir(m, j) * std::norm(xat(t, m, k, j));
                    if (p.ap_serves_er(m))
                        for (int e = 0; e < p.ers; ++e)
                            sum += power.er(m, e) * std::norm(xat(t, m, k, p.er_index(e)));
                }
                buf[idx(t)] = scale * (1.0 + p.rho_d() * sum);
            }
            r.q[idx(ke)] = summarize(buf);
        }
        return r;
    }

    double TermCheck::z() const
    {
        const double diff = empirical - closed;
        if (std_error > 0)
            return diff / std_error;
        return diff == 0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    }

    double TermCheck::relative_error() const
    {
        const double diff = std::abs(empirical - closed);
        if (closed != 0)
            return diff / std::abs(closed);
        return diff == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    }

    std::vector<TermCheck> compare_terms(const NetworkModel &model, const MomentTable &table,
                                         const PowerAllocation &power, const McReport &mc)
    {
        const SystemParams &p = model.params;
        std::vector<TermCheck> out;
        for (int ki = 0; ki < p.irs; ++ki)
        {
            const SinrTerms c = sinr_terms(ki, power, table, model);
            const SinrEstimate &e = mc.ir[idx(ki)];
            const std::string base = "ir" + std::to_string(ki) + ".";
            out.push_back({base + "desired", c.desired, e.desired.mean, e.desired.std_error});
            out.push_back({base + "bu", c.bu, e.bu.mean, e.bu.std_error});
            out.push_back({base + "iui_pc", c.iui_pc, e.iui_pc.mean, e.iui_pc.std_error});
            out.push_back({base + "eui_pc", c.eui_pc, e.eui_pc.mean, e.eui_pc.std_error});
            out.push_back({base + "iui_o", c.iui_o, e.iui_o.mean, e.iui_o.std_error});
            out.push_back({base + "eui_o", c.eui_o, e.eui_o.mean, e.eui_o.std_error});
            out.push_back({base + "sinr", c.sinr(), e.sinr.mean, e.sinr.std_error});
        }
        for (int ke = 0; ke < p.ers; ++ke)
        {
            const Estimate &e = mc.q[idx(ke)];
            out.push_back({"er" + std::to_string(ke) + ".q", q_closed(ke, power, table, model), e.mean, e.std_error});
        }
        for (int m = 0; m < p.aps; ++m)
            for (int k = 0; k < p.receivers(); ++k)
            {
                const std::string base = "ap" + std::to_string(m) + ".rx" + std::to_string(k) + ".";
                const double se_gain = mc.gain_std_error[idx(m)](k, k);
                out.push_back({base + "gain", table.own(m, k), mc.gain[idx(m)](k, k), se_gain});
            }
        return out;
    }
}
