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


#include "simswipt/solver.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace simswipt
{
    namespace
    {
        constexpr double inf = std::numeric_limits<double>::infinity();

        struct BarrierState
        {
            VectorXd x;
            int newton = 0;
        };

        // Smallest constraint value and its index.
        std::pair<double, std::size_t> min_slack(const ConvexProgram &prog, const VectorXd &x)
        {
            double lo = inf;
            std::size_t at = 0;
            for (std::size_t i = 0; i < prog.constraints.size(); ++i)
            {
                const double v = prog.constraints[i].value(x);
                if (v < lo || (std::isnan(v) && !std::isnan(lo)))
                {
                    lo = v;
                    at = i;
                }
            }
            return {lo, at};
        }

        // -sum log g_i(x) + t c^T x, +inf outside the strict interior.
        double barrier_value(const ConvexProgram &prog, const VectorXd &x, double t)
        {
            double f = t * prog.objective.dot(x);
            for (const auto &c : prog.constraints)
            {
                const double g = c.value(x);
                if (!(g > 0))
                    return inf;
                f -= std::log(g);
            }
            return f;
        }

        // Newton centering for a fixed t. Returns false when the iteration
        // budget ran out or the step stalled before convergence.
        bool centre(const ConvexProgram &prog, BarrierState &st, double t, const SolverOptions &opts,
                    const std::function<bool(const VectorXd &)> &stop, bool &stopped)
        {
            const Index n = prog.variables;
            double last = inf;
            int small = 0;
            while (st.newton < opts.max_newton)
            {
                VectorXd grad = t * prog.objective;
                MatrixXd H = MatrixXd::Zero(n, n);
                for (const auto &c : prog.constraints)
                {
                    const double g = c.value(st.x);
                    const VectorXd dg = c.gradient(st.x);
                    grad -= dg / g;
                    H.noalias() += dg * dg.transpose() / (g * g);
                    for (const auto &term : c.terms)
                        H(term.var, term.var) += term.second(st.x(term.var)) / g;
                }

                Eigen::LDLT<MatrixXd> ldlt(H);
                VectorXd step = ldlt.solve(-grad);
                if (ldlt.info() != Eigen::Success || !step.allFinite() || grad.dot(step) > 0)
                {
                    const double reg = 1e-12 * std::max(1.0, H.diagonal().cwiseAbs().maxCoeff());
                    step = (H + reg * MatrixXd::Identity(n, n)).ldlt().solve(-grad);
                }
                ++st.newton;

                const double decrement = -grad.dot(step);
                if (!(decrement >= 0) || !std::isfinite(decrement))
                    return false;
                if (decrement / 2 <= 1e-10)
                    return true;
                // roundoff in the gradient keeps the decrement from shrinking
                if (decrement < 1e-6 && decrement >= 0.5 * last)
                    return true;
                // Newton is quadratic below 1e-3; ten more steps without
                // finishing means the gradient is noise at this t
                if (decrement < 1e-3 && ++small > 10)
                    return true;
                last = decrement;

                // Close to the centre a full step is taken whenever it stays
                // strictly inside; the barrier value is too large to resolve
                // the decrease there once t has grown.
                VectorXd trial = st.x + step;
                double f1 = barrier_value(prog, trial, t);
                if (!(decrement < 0.25 && f1 < inf))
                {
                    const double f0 = barrier_value(prog, st.x, t);
                    double s = 1.0;
                    while (!(f1 <= f0 - 0.25 * s * decrement))
                    {
                        s *= 0.5;
                        if (s < 1e-16)
                            return decrement / 2 <= 1e-6;
                        trial = st.x + s * step;
                        f1 = barrier_value(prog, trial, t);
                    }
                }
                st.x = std::move(trial);
                if (stop && stop(st.x))
                {
                    stopped = true;
                    return true;
                }
            }
            return false;
        }

        SolverResult barrier(const ConvexProgram &prog, VectorXd x0, const SolverOptions &opts,
                             const std::function<bool(const VectorXd &)> &stop)
        {
            SolverResult res;
            BarrierState st{std::move(x0), 0};
            const double m = static_cast<double>(prog.constraints.size());
            double t = 1.0;
            bool stopped = false;
            bool ok = true;
            for (;;)
            {
                ok = centre(prog, st, t, opts, stop, stopped);
                if (stopped || !ok)
                    break;
                const double obj = prog.objective.dot(st.x);
                if (m / t <= opts.tolerance * std::max(1.0, std::abs(obj)))
                    break;
                t *= opts.barrier_growth;
            }

            res.x = st.x;
            res.newton_iterations = st.newton;
            res.objective = prog.objective.dot(st.x);
            res.duality_gap = m / t;
            res.duals.resize(static_cast<Index>(prog.constraints.size()));
            VectorXd r = prog.objective;
            for (std::size_t i = 0; i < prog.constraints.size(); ++i)
            {
                const double g = prog.constraints[i].value(st.x);
                const double lambda = 1.0 / (t * g);
                res.duals(static_cast<Index>(i)) = lambda;
                r -= lambda * prog.constraints[i].gradient(st.x);
            }
            res.kkt_residual = r.cwiseAbs().maxCoeff();
            res.status = (ok || stopped) ? SolveStatus::optimal : SolveStatus::max_iterations;
            const auto [lo, at] = min_slack(prog, st.x);
            res.max_violation = std::max(0.0, -lo);
            if (lo <= 0)
                res.violated = prog.constraints[at].name;
            return res;
        }

        // Phase-I program: maximise s subject to g_i(x) >= s, s <= cap, and
        // |x - centre|^2 <= radius^2 so the barrier stays bounded when the
        // feasible set is not.
        ConvexProgram phase_one(const ConvexProgram &prog, double cap, const VectorXd &centre, double radius)
        {
            ConvexProgram p1;
            p1.variables = prog.variables + 1;
            p1.objective = VectorXd::Zero(p1.variables);
            p1.objective(prog.variables) = -1.0;
            for (const auto &c : prog.constraints)
            {
                Constraint e = c;
                e.linear.conservativeResize(p1.variables);
                e.linear(prog.variables) = -1.0;
                p1.constraints.push_back(std::move(e));
            }
            Constraint &top = p1.add("slack_cap");
            top.linear(prog.variables) = -1.0;
            top.offset = cap;
            Constraint &ball = p1.add("search_radius");
            ball.linear.head(prog.variables) = 2.0 * centre;
            ball.offset = radius * radius - centre.squaredNorm();
            for (Index i = 0; i < prog.variables; ++i)
                ball.terms.push_back({i, 1.0, ConvexTerm::Kind::square, 1.0});
            return p1;
        }
    }

    double ConvexTerm::value(double x) const
    {
        const double u = scale * x;
        return kind == Kind::square ? weight * u * u : -weight * std::log1p(-u);
    }

    double ConvexTerm::first(double x) const
    {
        const double u = scale * x;
        return kind == Kind::square ? 2.0 * weight * scale * u : weight * scale / (1.0 - u);
    }

    double ConvexTerm::second(double x) const
    {
        if (kind == Kind::square)
            return 2.0 * weight * scale * scale;
        const double d = 1.0 - scale * x;
        return weight * scale * scale / (d * d);
    }

    double Constraint::value(const VectorXd &x) const
    {
        double v = linear.dot(x) + offset;
        for (const auto &t : terms)
        {
            if (!t.in_domain(x(t.var)))
                return -inf;
            v -= t.value(x(t.var));
        }
        return v;
    }

    VectorXd Constraint::gradient(const VectorXd &x) const
    {
        VectorXd g = linear;
        for (const auto &t : terms)
            g(t.var) -= t.first(x(t.var));
        return g;
    }

    Constraint &ConvexProgram::add(std::string name)
    {
        Constraint c;
        c.name = std::move(name);
        c.linear = VectorXd::Zero(variables);
        constraints.push_back(std::move(c));
        return constraints.back();
    }

    void ConvexProgram::validate() const
    {
        if (objective.size() != variables)
            throw DimensionError("ConvexProgram: objective length differs from the variable count");
        for (const auto &c : constraints)
        {
            if (c.linear.size() != variables)
                throw DimensionError("ConvexProgram: constraint '" + c.name + "' has the wrong length");
            for (const auto &t : c.terms)
                if (t.var < 0 || t.var >= variables || !(t.weight >= 0))
                    throw DimensionError("ConvexProgram: constraint '" + c.name + "' has an invalid term");
        }
    }

    const char *to_string(SolveStatus s)
    {
        switch (s)
        {
        case SolveStatus::optimal:
            return "optimal";
        case SolveStatus::infeasible:
            return "infeasible";
        case SolveStatus::max_iterations:
            return "max_iterations";
        }
        return "unknown";
    }

    SolverResult maximize_min_slack(const ConvexProgram &prog, const VectorXd &start, const SolverOptions &opts,
                                    bool stop_when_feasible)
    {
        prog.validate();
        if (start.size() != prog.variables)
            throw DimensionError("maximize_min_slack: start has the wrong length");
        const auto [lo, at] = min_slack(prog, start);
        SolverResult res;
        if (!std::isfinite(lo))
        {
            res.status = SolveStatus::infeasible;
            res.x = start;
            res.violated = prog.constraints[at].name + " (start outside its domain)";
            res.max_violation = inf;
            return res;
        }
        if (stop_when_feasible && lo > 0)
        {
            res.status = SolveStatus::optimal;
            res.x = start;
            res.objective = lo;
            return res;
        }

        const double s0 = lo - 1.0;
        const double radius = 1e4 * std::max(1.0, start.cwiseAbs().maxCoeff());
        const ConvexProgram p1 = phase_one(prog, std::max(1.0, lo + 1.0), start, radius);
        VectorXd x1(p1.variables);
        x1 << start, s0;
        std::function<bool(const VectorXd &)> stop;
        if (stop_when_feasible)
            stop = [n = prog.variables](const VectorXd &x) { return x(n) > 0; };
        SolverResult r1 = barrier(p1, x1, opts, stop);

        res.newton_iterations = r1.newton_iterations;
        res.x = r1.x.head(prog.variables);
        const auto [lo1, at1] = min_slack(prog, res.x);
        res.objective = lo1;
        res.duality_gap = r1.duality_gap;
        res.kkt_residual = r1.kkt_residual;
        if (lo1 > 0)
            res.status = SolveStatus::optimal;
        else
        {
            res.status = r1.status == SolveStatus::optimal ? SolveStatus::infeasible : SolveStatus::max_iterations;
            res.violated = prog.constraints[at1].name;
            res.max_violation = -lo1;
        }
        return res;
    }

    SolverResult solve(const ConvexProgram &prog, const VectorXd &start, const SolverOptions &opts)
    {
        SolverResult p1 = maximize_min_slack(prog, start, opts, true);
        if (p1.status != SolveStatus::optimal)
            return p1;
        SolverResult res = barrier(prog, p1.x, opts, {});
        res.newton_iterations += p1.newton_iterations;
        return res;
    }
}
