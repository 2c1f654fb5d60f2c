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


#include "simswipt/optimize.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace simswipt
{
    namespace
    {
        constexpr double inf = std::numeric_limits<double>::infinity();

        std::size_t idx(int i) { return static_cast<std::size_t>(i); }

        double uniform_phase(Rng &rng)
        {
            std::uniform_real_distribution<double> u(0.0, 2.0 * pi_v<double>);
            return wrap_phase(u(rng));
        }

        // Propagated signal after layer l (l = 0 gives nothing applied yet):
        // Phi^l H^l ... Phi^1 H^1, S x N.
        CMatrix prefix(const PropagationStack<double> &stack, const MatrixXd &theta, int l)
        {
            CMatrix P = stack.antenna;
            for (int j = 1; j <= l; ++j)
            {
                if (j > 1)
                    P = stack.matrix(j) * P;
                for (Index s = 0; s < P.rows(); ++s)
                    P.row(s) *= std::polar(1.0, theta(j - 1, s));
            }
            return P;
        }

        // Phi^L H^L ... Phi^{l+1} H^{l+1}, identity when l = L.
        CMatrix suffix(const PropagationStack<double> &stack, const MatrixXd &theta, int l)
        {
            const Index S = stack.elements();
            CMatrix G = CMatrix::Identity(S, S);
            for (int j = l + 1; j <= stack.layer_count(); ++j)
            {
                G = stack.matrix(j) * G;
                for (Index s = 0; s < S; ++s)
                    G.row(s) *= std::polar(1.0, theta(j - 1, s));
            }
            return G;
        }

        // Sum over all IR-serving APs of the interference-plus-noise power
        // seen by IR ki, without the factor T.
        double interference(int ki, const PowerAllocation &power, const MomentTable &table, const NetworkModel &model)
        {
            const SinrTerms t = sinr_terms(ki, power, table, model);
            return t.denominator();
        }

        double coherent_sum(int ki, const PowerAllocation &power, const NetworkModel &model)
        {
            double q = 0.0;
            for (int m = 0; m < model.params.aps; ++m)
                if (model.params.ap_serves_ir(m))
                    q += std::sqrt(std::max(0.0, power.ir(m, ki)) * model.est(m, ki).alpha);
            return q;
        }

        bool strictly_inside(const ConvexProgram &prog, const VectorXd &x)
        {
            for (const auto &c : prog.constraints)
                if (!(c.value(x) > 0))
                    return false;
            return true;
        }

        // Warm start for the subproblem at `state`: t slightly below sqrt(eta)
        // so the cones are strict while the SINR rows keep their true slack.
        VectorXd warm_start(const Subproblem &sub, const ScaState &state, const NetworkModel &model,
                            const MomentTable *table)
        {
            const SystemParams &p = model.params;
            VectorXd t_scale = VectorXd::Constant(p.irs, 1.0 - 1e-7);
            if (table)
                for (int ki = 0; ki < p.irs; ++ki)
                {
                    const double q = state.q(ki);
                    const double T = state.threshold(ki);
                    if (!(q > 0) || !(T > 0))
                        continue;
                    const double slack = q * q - T * interference(ki, state.power, *table, model);
                    if (slack > 0)
                        t_scale(ki) = 1.0 - std::min(1e-7, 0.25 * slack / (q * q));
                }
            MatrixXd roots = state.power.ir.cwiseMax(0.0).cwiseSqrt();
            for (int ki = 0; ki < p.irs; ++ki)
                roots.col(ki) *= t_scale(ki);
            VectorXd flat(roots.size());
            Eigen::Map<MatrixXd>(flat.data(), roots.rows(), roots.cols()) = roots;
            return sub.pack(state.power, state.eps, &flat);
        }

        // Pulls an infeasible phase-I iterate back into the region where the
        // linearization is defined (non-negative powers, eps below saturation).
        void clamp_to_domain(PowerAllocation &power, VectorXd &eps, const EHParams &eh)
        {
            power.ir = power.ir.cwiseMax(0.0);
            power.er = power.er.cwiseMax(0.0);
            eps = eps.cwiseMax(0.0).cwiseMin(eh.max_power * (1.0 - 1e-9));
        }

        VectorXd initial_eps(const NetworkModel &model, const MomentTable &table, const PowerAllocation &power,
                             const Thresholds &th)
        {
            const SystemParams &p = model.params;
            VectorXd eps(p.ers);
            for (int ke = 0; ke < p.ers; ++ke)
            {
                const double floor = th.energy(ke);
                const double e = nl_eh(q_closed(ke, power, table, model), p.eh);
                eps(ke) = e > floor ? floor + (1.0 - 1e-3) * (e - floor) : floor;
            }
            return eps;
        }
    }

    // ---- phase shifts -------------------------------------------------------

    PhaseConfig random_ps(const SimGeometry<double> &geom, int aps, Rng &rng)
    {
        geom.validate();
        PhaseConfig out(aps, geom.layers, geom.elements);
        for (auto &t : out.theta)
            for (Index l = 0; l < t.rows(); ++l)
                for (Index s = 0; s < t.cols(); ++s)
                    t(l, s) = uniform_phase(rng);
        return out;
    }

    PhaseConfig equal_ps(const SimGeometry<double> &geom, int aps, double value)
    {
        return equal_ps(geom, aps, VectorXd::Constant(geom.layers, value));
    }

    PhaseConfig equal_ps(const SimGeometry<double> &geom, int aps, const VectorXd &per_layer)
    {
        geom.validate();
        if (per_layer.size() != geom.layers)
            throw DimensionError("equal_ps: need one phase per layer");
        PhaseConfig out(aps, geom.layers, geom.elements);
        for (auto &t : out.theta)
            for (Index l = 0; l < t.rows(); ++l)
                t.row(l).setConstant(wrap_phase(per_layer(l)));
        return out;
    }

    HeuristicResult heuristic_ps(const std::vector<PropagationStack<double>> &stacks, const PhaseConfig &initial,
                                 const HeuristicOptions &opts, std::uint64_t seed)
    {
        if (opts.candidates < 1)
            throw std::invalid_argument("heuristic_ps: need at least one candidate per layer");
        if (opts.sweeps < 1)
            throw std::invalid_argument("heuristic_ps: need at least one sweep");
        if (static_cast<int>(stacks.size()) != initial.aps())
            throw DimensionError("heuristic_ps: one stack per AP required");

        HeuristicResult res{initial, {}};
        res.objective.resize(stacks.size());
        for (int m = 0; m < initial.aps(); ++m)
        {
            const auto &stack = stacks[idx(m)];
            MatrixXd &theta = res.phases.theta[idx(m)];
            if (theta.rows() != stack.layer_count() || theta.cols() != stack.elements())
                throw DimensionError("heuristic_ps: phase block does not match the stack");
            const int L = stack.layer_count();
            const Index S = stack.elements();
            auto &history = res.objective[idx(m)];
            history.push_back(aggregate_trace(build_aggregate(stack, theta)));

            for (int sweep = 0; sweep < opts.sweeps; ++sweep)
                for (int l = 1; l <= L; ++l)
                {
                    const CMatrix X = l == 1 ? stack.antenna : CMatrix(stack.matrix(l) * prefix(stack, theta, l - 1));
                    const CMatrix G = suffix(stack, theta, l);
                    const CMatrix A = G.adjoint() * G;
                    const CMatrix P = X * X.adjoint();
                    const CMatrix B = A.cwiseProduct(P.transpose());

                    std::vector<VectorXd> cand(idx(opts.candidates));
                    cand[0] = theta.row(l - 1).transpose();
                    Rng rng = make_stream(seed, Stream::heuristic,
                                          {static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(sweep),
                                           static_cast<std::uint64_t>(l)});
                    for (std::size_t c = 1; c < cand.size(); ++c)
                    {
                        cand[c].resize(S);
                        for (Index s = 0; s < S; ++s)
                            cand[c](s) = uniform_phase(rng);
                    }

                    std::vector<double> value(cand.size());
                    parallel_for(static_cast<Index>(cand.size()), opts.workers, [&](Index c)
                    {
                        CVector phi(S);
                        for (Index s = 0; s < S; ++s)
                            phi(s) = std::polar(1.0, cand[idx(static_cast<int>(c))](s));
                        value[idx(static_cast<int>(c))] = phi.dot(B * phi).real();
                    });

                    // moves must beat roundoff, otherwise the recomputed trace can dip
                    const auto improves = [](double f, double ref) { return f > ref + 1e-12 * std::abs(ref); };
                    std::size_t best = 0;
                    for (std::size_t c = 1; c < value.size(); ++c)
                        if (improves(value[c], value[best]))
                            best = c;
                    if (best != 0)
                        theta.row(l - 1) = cand[best].transpose();

                    // B is PSD (Schur product of two PSD matrices), so
                    // phi <- exp(j arg(B phi)) never lowers phi^H B phi.
                    CVector phi(S);
                    for (Index s = 0; s < S; ++s)
                        phi(s) = std::polar(1.0, theta(l - 1, s));
                    double current = value[best];
                    bool moved = false;
                    for (int it = 0; it < opts.polish_iterations; ++it)
                    {
                        const CVector v = B * phi;
                        CVector next = phi;
                        for (Index s = 0; s < S; ++s)
                            if (std::abs(v(s)) > 0)
                                next(s) = v(s) / std::abs(v(s));
                        const double f = next.dot(B * next).real();
                        if (!improves(f, current))
                            break;
                        current = f;
                        phi = next;
                        moved = true;
                    }
                    if (moved)
                        for (Index s = 0; s < S; ++s)
                            theta(l - 1, s) = wrap_phase(std::arg(phi(s)));
                    history.push_back(aggregate_trace(build_aggregate(stack, theta)));
                }
        }
        return res;
    }

    // ---- power allocation ---------------------------------------------------

    PowerAllocation epa(const SystemParams &p)
    {
        PowerAllocation out{MatrixXd::Zero(p.aps, p.irs), MatrixXd::Zero(p.aps, p.ers)};
        for (int m = 0; m < p.aps; ++m)
        {
            if (p.irs > 0 && p.ap_serves_ir(m))
                out.ir.row(m).setConstant(1.0 / p.irs);
            if (p.ers > 0 && p.ap_serves_er(m))
                out.er.row(m).setConstant(1.0 / p.ers);
        }
        return out;
    }

    double xi_tilde(double e_tilde, double e_tilde_n, const EHParams &eh)
    {
        const double phi = eh.max_power;
        if (!(e_tilde > 0 && e_tilde < phi) || !(e_tilde_n > 0 && e_tilde_n < phi))
            throw std::domain_error("xi_tilde: arguments must lie in (0, phi)");
        return eh.threshold - (std::log((phi - e_tilde) / e_tilde_n) - (e_tilde - e_tilde_n) / e_tilde_n) / eh.slope;
    }

    double xi_tilde_energy(double eps, double eps_n, const EHParams &eh)
    {
        const double phi = eh.max_power;
        if (!(eps >= 0 && eps < phi) || !(eps_n >= 0 && eps_n < phi))
            throw std::domain_error("xi_tilde_energy: arguments must lie in [0, phi)");
        const double om = eh.omega();
        const double en = shifted_output(eps_n, eh);
        return (-std::log1p(-eps / phi) + std::log1p((1.0 - om) * eps_n / (phi * om)) +
                (1.0 - om) * (eps - eps_n) / en) /
               eh.slope;
    }

    bool ConstraintCheck::satisfied(double tol) const { return worst() >= -tol; }

    double ConstraintCheck::worst() const
    {
        double w = std::min(-budget_excess, min_power);
        if (sinr_margin.size() > 0)
            w = std::min(w, sinr_margin.minCoeff());
        if (energy_margin.size() > 0)
            w = std::min(w, energy_margin.minCoeff());
        if (floor_margin.size() > 0)
            w = std::min(w, floor_margin.minCoeff());
        return w;
    }

    std::string ConstraintCheck::describe() const
    {
        std::ostringstream os;
        os.precision(6);
        for (Index k = 0; k < sinr_margin.size(); ++k)
            if (sinr_margin(k) < 0)
                os << "sinr[" << k << "] short by " << -sinr_margin(k) << " (relative); ";
        for (Index k = 0; k < energy_margin.size(); ++k)
            if (energy_margin(k) < 0)
                os << "energy[" << k << "] short by " << -energy_margin(k) << " (relative); ";
        for (Index k = 0; k < floor_margin.size(); ++k)
            if (floor_margin(k) < 0)
                os << "floor[" << k << "] short by " << -floor_margin(k) << " (relative); ";
        if (budget_excess > 0)
            os << "budget exceeded by " << budget_excess << "; ";
        if (min_power < 0)
            os << "negative power " << min_power << "; ";
        std::string s = os.str();
        return s.empty() ? "all constraints satisfied" : s.substr(0, s.size() - 2);
    }

    ConstraintCheck check_constraints(const NetworkModel &model, const MomentTable &table, const PowerAllocation &power,
                                      const VectorXd &eps, const Thresholds &th)
    {
        const SystemParams &p = model.params;
        if (th.se.size() != p.irs || th.energy.size() != p.ers || eps.size() != p.ers)
            throw DimensionError("check_constraints: threshold or eps size mismatch");
        ConstraintCheck c;
        c.sinr_margin.resize(p.irs);
        for (int ki = 0; ki < p.irs; ++ki)
        {
            const double T = sinr_threshold(th.se(ki), p.tau, p.coherence);
            const double s = sinr_closed(ki, power, table, model);
            c.sinr_margin(ki) = T > 0 ? s / T - 1.0 : inf;
        }
        c.energy_margin.resize(p.ers);
        c.floor_margin.resize(p.ers);
        for (int ke = 0; ke < p.ers; ++ke)
        {
            const double e = eps(ke);
            if (!(e >= 0 && e < p.eh.max_power))
                c.energy_margin(ke) = -inf;
            else
            {
                const double need = required_rf_energy(e, p.eh);
                c.energy_margin(ke) = need > 0 ? q_closed(ke, power, table, model) / need - 1.0 : inf;
            }
            const double floor = th.energy(ke);
            c.floor_margin(ke) = floor > 0 ? e / floor - 1.0 : e;
        }
        c.budget_excess = -inf;
        c.min_power = inf;
        for (int m = 0; m < p.aps; ++m)
        {
            if (p.irs > 0)
                c.budget_excess = std::max(c.budget_excess, power.ir.row(m).sum() - 1.0);
            if (p.ers > 0)
                c.budget_excess = std::max(c.budget_excess, power.er.row(m).sum() - 1.0);
        }
        if (power.ir.size() > 0)
            c.min_power = std::min(c.min_power, power.ir.minCoeff());
        if (power.er.size() > 0)
            c.min_power = std::min(c.min_power, power.er.minCoeff());
        return c;
    }

    ScaState make_sca_state(const NetworkModel &model, const MomentTable &table, const PowerAllocation &power,
                            const VectorXd &eps, const Thresholds &th)
    {
        (void)table;
        const SystemParams &p = model.params;
        ScaState st;
        st.power = power;
        st.eps = eps;
        st.q.resize(p.irs);
        st.threshold.resize(p.irs);
        for (int ki = 0; ki < p.irs; ++ki)
        {
            st.q(ki) = coherent_sum(ki, power, model);
            st.threshold(ki) = sinr_threshold(th.se(ki), p.tau, p.coherence);
        }
        return st;
    }

    VectorXd Subproblem::pack(const PowerAllocation &power, const VectorXd &eps, const VectorXd *sqrt_eta) const
    {
        VectorXd x = VectorXd::Zero(program.variables);
        const Index rows = power.ir.rows();
        for (std::size_t m = 0; m < ir_var.size(); ++m)
            for (std::size_t k = 0; k < ir_var[m].size(); ++k)
            {
                if (ir_var[m][k] < 0)
                    continue;
                const double eta = power.ir(static_cast<Index>(m), static_cast<Index>(k));
                x(ir_var[m][k]) = eta;
                x(sqrt_var[m][k]) = sqrt_eta ? (*sqrt_eta)(static_cast<Index>(k) * rows + static_cast<Index>(m))
                                             : std::sqrt(std::max(0.0, eta));
            }
        for (std::size_t m = 0; m < er_var.size(); ++m)
            for (std::size_t k = 0; k < er_var[m].size(); ++k)
                if (er_var[m][k] >= 0)
                    x(er_var[m][k]) = power.er(static_cast<Index>(m), static_cast<Index>(k));
        for (std::size_t k = 0; k < eps_var.size(); ++k)
            x(eps_var[k]) = eps(static_cast<Index>(k)) / eps_scale;
        return x;
    }

    PowerAllocation Subproblem::unpack_power(const VectorXd &x, const SystemParams &p) const
    {
        PowerAllocation out{MatrixXd::Zero(p.aps, p.irs), MatrixXd::Zero(p.aps, p.ers)};
        for (std::size_t m = 0; m < ir_var.size(); ++m)
            for (std::size_t k = 0; k < ir_var[m].size(); ++k)
                if (ir_var[m][k] >= 0)
                    out.ir(static_cast<Index>(m), static_cast<Index>(k)) = x(ir_var[m][k]);
        for (std::size_t m = 0; m < er_var.size(); ++m)
            for (std::size_t k = 0; k < er_var[m].size(); ++k)
                if (er_var[m][k] >= 0)
                    out.er(static_cast<Index>(m), static_cast<Index>(k)) = x(er_var[m][k]);
        return out;
    }

    VectorXd Subproblem::unpack_eps(const VectorXd &x) const
    {
        VectorXd e(static_cast<Index>(eps_var.size()));
        for (std::size_t k = 0; k < eps_var.size(); ++k)
            e(static_cast<Index>(k)) = eps_scale * x(eps_var[k]);
        return e;
    }

    Subproblem build_subproblem(const ScaState &state, const NetworkModel &model, const MomentTable &table,
                                const Thresholds &th)
    {
        const SystemParams &p = model.params;
        const int M = p.aps;
        if (state.power.ir.rows() != M || state.power.ir.cols() != p.irs || state.power.er.rows() != M ||
            state.power.er.cols() != p.ers || state.eps.size() != p.ers || state.q.size() != p.irs ||
            state.threshold.size() != p.irs || th.energy.size() != p.ers)
            throw DimensionError("build_subproblem: state does not match the network");

        Subproblem sub;
        Index n = 0;
        sub.ir_var.assign(idx(M), std::vector<Index>(idx(p.irs), -1));
        sub.sqrt_var = sub.ir_var;
        sub.er_var.assign(idx(M), std::vector<Index>(idx(p.ers), -1));
        for (int m = 0; m < M; ++m)
            if (p.ap_serves_ir(m))
                for (int k = 0; k < p.irs; ++k)
                {
                    sub.ir_var[idx(m)][idx(k)] = n++;
                    sub.sqrt_var[idx(m)][idx(k)] = n++;
                }
        for (int m = 0; m < M; ++m)
            if (p.ap_serves_er(m))
                for (int k = 0; k < p.ers; ++k)
                    sub.er_var[idx(m)][idx(k)] = n++;
        for (int k = 0; k < p.ers; ++k)
            sub.eps_var.push_back(n++);

        double scale = 0.0;
        for (int k = 0; k < p.ers; ++k)
            scale = std::max({scale, state.eps(k), th.energy(k)});
        sub.eps_scale = scale > 0 ? scale : 1.0;

        ConvexProgram &prog = sub.program;
        prog.variables = n;
        prog.objective = VectorXd::Zero(n);
        for (Index v : sub.eps_var)
            prog.objective(v) = -1.0;

        const double rho = p.rho_d();

        // SINR surrogate: q_n (2 sum sqrt(alpha) t - q_n) >= T (interference + 1/rho)
        for (int ki = 0; ki < p.irs; ++ki)
        {
            const double T = state.threshold(ki);
            if (!(T > 0))
                continue;
            const double qn = state.q(ki);
            const double norm = T * interference(ki, state.power, table, model);
            Constraint &c = prog.add("sinr[" + std::to_string(ki) + "]");
            for (int m = 0; m < M; ++m)
            {
                if (!p.ap_serves_ir(m))
                    continue;
                c.linear(sub.sqrt_var[idx(m)][idx(ki)]) = 2.0 * qn * std::sqrt(model.est(m, ki).alpha) / norm;
                for (int j = 0; j < p.irs; ++j)
                {
                    const double w = j == ki ? table.bu(m, ki) : table.at(m, ki, j);
                    c.linear(sub.ir_var[idx(m)][idx(j)]) -= T * w / norm;
                }
            }
            for (int m = 0; m < M; ++m)
                if (p.ap_serves_er(m))
                    for (int e = 0; e < p.ers; ++e)
                        c.linear(sub.er_var[idx(m)][idx(e)]) -= T * table.at(m, ki, p.er_index(e)) / norm;
            c.offset = (-qn * qn - T / rho) / norm;
        }

        // Harvested energy: Q(eta) >= Xi_tilde(eps; eps_n)
        const double c0 = (p.coherence - p.tau) * p.noise_power;
        const double om = p.eh.omega();
        const double phi = p.eh.max_power;
        const double xi = p.eh.slope;
        for (int ke = 0; ke < p.ers; ++ke)
        {
            const int k = p.er_index(ke);
            const double qn = q_closed(ke, state.power, table, model);
            const double en = state.eps(ke);
            const double etn = shifted_output(en, p.eh);
            Constraint &c = prog.add("energy[" + std::to_string(ke) + "]");
            for (int m = 0; m < M; ++m)
            {
                if (p.ap_serves_ir(m))
                    for (int j = 0; j < p.irs; ++j)
                        c.linear(sub.ir_var[idx(m)][idx(j)]) = c0 * rho * table.at(m, k, j) / qn;
                if (p.ap_serves_er(m))
                    for (int e = 0; e < p.ers; ++e)
                        c.linear(sub.er_var[idx(m)][idx(e)]) = c0 * rho * table.at(m, k, p.er_index(e)) / qn;
            }
            const Index v = sub.eps_var[idx(ke)];
            c.linear(v) = -(1.0 - om) * sub.eps_scale / (xi * etn * qn);
            c.offset = c0 / qn - (std::log1p((1.0 - om) * en / (phi * om)) - (1.0 - om) * en / etn) / (xi * qn);
            c.terms.push_back({v, 1.0 / (xi * qn), ConvexTerm::Kind::neg_log1m, sub.eps_scale / phi});
        }

        for (int ke = 0; ke < p.ers; ++ke)
        {
            Constraint &c = prog.add("floor[" + std::to_string(ke) + "]");
            c.linear(sub.eps_var[idx(ke)]) = 1.0;
            c.offset = -th.energy(ke) / sub.eps_scale;
        }

        for (int m = 0; m < M; ++m)
        {
            if (p.irs > 0 && p.ap_serves_ir(m))
            {
                Constraint &b = prog.add("budget_ir[" + std::to_string(m) + "]");
                b.offset = 1.0;
                for (int k = 0; k < p.irs; ++k)
                {
                    const Index e = sub.ir_var[idx(m)][idx(k)];
                    const Index t = sub.sqrt_var[idx(m)][idx(k)];
                    b.linear(e) = -1.0;
                    Constraint &cone = prog.add("cone[" + std::to_string(m) + "," + std::to_string(k) + "]");
                    cone.linear(e) = 1.0;
                    cone.terms.push_back({t, 1.0, ConvexTerm::Kind::square, 1.0});
                    prog.add("sqrt_nonneg[" + std::to_string(m) + "," + std::to_string(k) + "]").linear(t) = 1.0;
                }
            }
            if (p.ers > 0 && p.ap_serves_er(m))
            {
                Constraint &b = prog.add("budget_er[" + std::to_string(m) + "]");
                b.offset = 1.0;
                for (int k = 0; k < p.ers; ++k)
                {
                    const Index e = sub.er_var[idx(m)][idx(k)];
                    b.linear(e) = -1.0;
                    prog.add("er_nonneg[" + std::to_string(m) + "," + std::to_string(k) + "]").linear(e) = 1.0;
                }
            }
        }
        prog.validate();
        return sub;
    }

    SubproblemSolution solve_subproblem(const Subproblem &sub, const ScaState &state, const NetworkModel &model,
                                        const SolverOptions &opts)
    {
        const VectorXd x0 = warm_start(sub, state, model, nullptr);
        SubproblemSolution out;
        out.solver = solve(sub.program, x0, opts);
        out.power = sub.unpack_power(out.solver.x, model.params);
        out.eps = sub.unpack_eps(out.solver.x);
        return out;
    }

    const char *to_string(ScaStatus s)
    {
        switch (s)
        {
        case ScaStatus::converged:
            return "converged";
        case ScaStatus::max_iterations:
            return "max_iterations";
        case ScaStatus::infeasible:
            return "infeasible";
        }
        return "unknown";
    }

    std::optional<FeasiblePoint> find_feasible_point(const NetworkModel &model, const MomentTable &table,
                                                     const Thresholds &th, const PowerAllocation &start,
                                                     const ScaOptions &opts, std::string *diagnostic)
    {
        PowerAllocation power = start;
        VectorXd eps = initial_eps(model, table, power, th);
        double last = -inf;
        for (int round = 0; round < opts.start_iterations; ++round)
        {
            const ScaState st = make_sca_state(model, table, power, eps, th);
            const Subproblem sub = build_subproblem(st, model, table, th);
            const VectorXd x0 = warm_start(sub, st, model, &table);
            if (strictly_inside(sub.program, x0) && check_constraints(model, table, power, eps, th).satisfied(0.0))
                return FeasiblePoint{power, eps};

            const SolverResult r = maximize_min_slack(sub.program, x0, opts.solver, true);
            power = sub.unpack_power(r.x, model.params);
            eps = sub.unpack_eps(r.x);
            if (r.status != SolveStatus::optimal)
                clamp_to_domain(power, eps, model.params.eh);
            if (r.status == SolveStatus::optimal)
            {
                if (check_constraints(model, table, power, eps, th).satisfied(0.0))
                    return FeasiblePoint{power, eps};
                continue;
            }
            if (r.objective <= last + 1e-9 * std::max(1.0, std::abs(last)))
            {
                if (diagnostic)
                    *diagnostic = "no feasible point: smallest slack " + std::to_string(r.objective) + " at " +
                                  r.violated;
                return std::nullopt;
            }
            last = r.objective;
        }
        if (diagnostic)
            *diagnostic = "no feasible point within " + std::to_string(opts.start_iterations) + " rounds";
        return std::nullopt;
    }

    ScaResult sca_power_allocation(const NetworkModel &model, const MomentTable &table, const Thresholds &th,
                                   const FeasiblePoint &start, const ScaOptions &opts)
    {
        ScaResult res;
        const ConstraintCheck c0 = check_constraints(model, table, start.power, start.eps, th);
        if (!c0.satisfied(0.0))
        {
            res.status = ScaStatus::infeasible;
            res.diagnostic = "starting point violates: " + c0.describe();
            return res;
        }
        ScaState state = make_sca_state(model, table, start.power, start.eps, th);
        res.power = state.power;
        res.eps = state.eps;
        res.history.push_back(state.objective());
        res.status = ScaStatus::max_iterations;

        for (int n = 1; n <= opts.max_iterations; ++n)
        {
            const Subproblem sub = build_subproblem(state, model, table, th);
            const VectorXd x0 = warm_start(sub, state, model, &table);
            const SolverResult sr = solve(sub.program, x0, opts.solver);
            ScaIteration it;
            it.iteration = n;
            it.solver = sr.status;
            it.kkt_residual = sr.kkt_residual;

            const PowerAllocation power = sub.unpack_power(sr.x, model.params);
            const VectorXd eps = sub.unpack_eps(sr.x);
            const ConstraintCheck check = check_constraints(model, table, power, eps, th);
            const double obj = eps.sum();
            const double prev = res.history.back();
            it.objective = obj;
            it.worst_margin = check.worst();
            it.accepted = sr.status == SolveStatus::optimal && check.satisfied(0.0) && obj >= prev;
            it.power = power;
            it.eps = eps;
            res.log.push_back(it);

            if (!it.accepted)
            {
                res.status = ScaStatus::converged;
                res.diagnostic = sr.status != SolveStatus::optimal
                                     ? std::string("subproblem ") + to_string(sr.status) + " at iteration " +
                                           std::to_string(n)
                                     : "iteration " + std::to_string(n) + " step rejected: " + check.describe();
                if (sr.status != SolveStatus::optimal)
                    res.status = ScaStatus::max_iterations;
                break;
            }

            state = make_sca_state(model, table, power, eps, th);
            state.iteration = n;
            res.power = power;
            res.eps = eps;
            res.history.push_back(obj);
            const double change = (obj - prev) / std::max(std::abs(prev), std::numeric_limits<double>::min());
            if (change < opts.tolerance)
            {
                res.status = ScaStatus::converged;
                break;
            }
        }
        return res;
    }

    ScaResult sca_power_allocation(const NetworkModel &model, const MomentTable &table, const Thresholds &th,
                                   const ScaOptions &opts)
    {
        std::string why;
        const auto start = find_feasible_point(model, table, th, epa(model.params), opts, &why);
        if (!start)
        {
            ScaResult res;
            res.status = ScaStatus::infeasible;
            res.diagnostic = why;
            return res;
        }
        return sca_power_allocation(model, table, th, *start, opts);
    }

    std::optional<MaxMinResult> max_min_se_target(const NetworkModel &model, const MomentTable &table,
                                                  const VectorXd &energy_floor, const ScaOptions &opts,
                                                  double resolution)
    {
        const SystemParams &p = model.params;
        Thresholds th{VectorXd::Zero(p.irs), energy_floor};
        const PowerAllocation base = epa(p);

        MaxMinResult best;
        double lo = 0.0;
        if (p.irs > 0)
        {
            const PerformanceReport r = evaluate(model, table, base);
            lo = r.min_se * (1.0 - 1e-9);
        }
        th.se.setConstant(lo);
        auto found = find_feasible_point(model, table, th, base, opts);
        if (!found && lo > 0)
        {
            lo = 0.0;
            th.se.setZero();
            found = find_feasible_point(model, table, th, base, opts);
        }
        if (!found)
            return std::nullopt;
        best = {lo, *found};
        if (p.irs == 0)
            return best;

        // No IR can beat its single-user, interference-free SE.
        double hi = inf;
        for (int ki = 0; ki < p.irs; ++ki)
        {
            double q = 0.0, bu = 0.0;
            for (int m = 0; m < p.aps; ++m)
                if (p.ap_serves_ir(m))
                {
                    q += std::sqrt(model.est(m, ki).alpha);
                    bu += table.bu(m, ki);
                }
            hi = std::min(hi, se(q * q / (bu + 1.0 / p.rho_d()), p.tau, p.coherence));
        }

        while (hi - lo > resolution)
        {
            const double mid = 0.5 * (lo + hi);
            th.se.setConstant(mid);
            auto pt = find_feasible_point(model, table, th, best.point.power, opts);
            if (pt)
            {
                lo = mid;
                best = {mid, *pt};
            }
            else
                hi = mid;
        }
        return best;
    }
}
