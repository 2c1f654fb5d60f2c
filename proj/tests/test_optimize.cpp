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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "simswipt/harness.hpp"
#include "simswipt/optimize.hpp"

using namespace simswipt;

namespace
{
    SimGeometry<double> geometry(int layers, int elements)
    {
        SystemConfig cfg;
        cfg.layers = layers;
        cfg.elements = elements;
        return cfg.geometry();
    }

    struct Instance
    {
        Scenario scenario;
        NetworkModel model;
        MomentTable table;
        Thresholds th;
    };

    Instance instance(const SystemConfig &cfg, std::uint64_t seed, PhasePolicy phases = PhasePolicy::heuristic)
    {
        Scenario sc = build_scenario(cfg, seed);
        NetworkModel model = build_model(sc, choose_phases(sc, phases));
        MomentTable table = build_moment_table(model);
        return {std::move(sc), std::move(model), std::move(table), thresholds(cfg)};
    }

    // Logistic inverse written out directly.
    double logistic_inverse(double x, const EHParams &eh)
    {
        return eh.threshold - std::log(eh.max_power / x - 1.0) / eh.slope;
    }
}

TEST_CASE("baseline phase configurations")
{
    const auto g = geometry(3, 9);
    Rng rng = make_stream(4, Stream::test);
    const PhaseConfig r = random_ps(g, 2, rng);
    REQUIRE(r.aps() == 2);
    CHECK(r.layers() == 3);
    CHECK(r.elements() == 9);
    for (const auto &t : r.theta)
    {
        CHECK(t.minCoeff() >= 0.0);
        CHECK(t.maxCoeff() < 2 * pi_v<double>);
    }

    VectorXd per_layer(3);
    per_layer << 0.5, -1.0, 7.0;
    const PhaseConfig e = equal_ps(g, 2, per_layer);
    for (const auto &t : e.theta)
        for (Index l = 0; l < 3; ++l)
        {
            CHECK(t.row(l).maxCoeff() == t.row(l).minCoeff());
            CHECK(t(l, 0) == doctest::Approx(wrap_phase(per_layer(l))));
        }
    CHECK_THROWS_AS(equal_ps(g, 1, VectorXd::Zero(2)), DimensionError);
}

TEST_CASE("equal phases leave the trace of the zero-phase stack unchanged")
{
    const auto g = geometry(3, 9);
    const auto stack = build_stack(g, 4);
    const double base = aggregate_trace(build_aggregate(stack, MatrixXd::Zero(3, 9)));
    const PhaseConfig e = equal_ps(g, 1, 1.3);
    CHECK(aggregate_trace(build_aggregate(stack, e, 0)) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("single-layer trace does not depend on the phases")
{
    const auto g = geometry(1, 9);
    const std::vector<PropagationStack<double>> stacks(2, build_stack(g, 4));
    Rng rng = make_stream(9, Stream::test);
    const PhaseConfig start = random_ps(g, 2, rng);
    const HeuristicResult h = heuristic_ps(stacks, start, {50, 2, 1, 20}, 3);
    for (const auto &hist : h.objective)
    {
        REQUIRE(hist.size() == 3);
        for (double v : hist)
            CHECK(v == doctest::Approx(hist.front()).epsilon(1e-12));
    }
}

TEST_CASE("heuristic sweep never lowers the per-AP objective")
{
    const auto g = geometry(4, 9);
    const std::vector<PropagationStack<double>> stacks(3, build_stack(g, 4));
    for (std::uint64_t seed : {1u, 2u, 3u})
    {
        Rng rng = make_stream(seed, Stream::test);
        const PhaseConfig start = random_ps(g, 3, rng);
        const HeuristicResult h = heuristic_ps(stacks, start, {100, 2, 1, 20}, seed);
        for (std::size_t m = 0; m < h.objective.size(); ++m)
        {
            const auto &hist = h.objective[m];
            REQUIRE(hist.size() == 9);
            for (std::size_t i = 1; i < hist.size(); ++i)
                CHECK(hist[i] >= hist[i - 1] * (1 - 1e-12));
            CHECK(hist.back() > hist.front());
            CHECK(aggregate_trace(build_aggregate(stacks[m], h.phases, static_cast<int>(m))) ==
                  doctest::Approx(hist.back()).epsilon(1e-12));
        }
    }
}

TEST_CASE("a lone incumbent without refinement is kept")
{
    const auto g = geometry(2, 4);
    const std::vector<PropagationStack<double>> stacks(1, build_stack(g, 2));
    Rng rng = make_stream(5, Stream::test);
    const PhaseConfig start = random_ps(g, 1, rng);
    const HeuristicResult h = heuristic_ps(stacks, start, {1, 1, 1, 0}, 5);
    CHECK(h.phases.theta[0] == start.theta[0]);
    CHECK_THROWS(heuristic_ps(stacks, start, {0, 1, 1, 0}, 5));
    CHECK_THROWS_AS(heuristic_ps({}, start, {}, 5), DimensionError);
}

TEST_CASE("heuristic search is independent of the worker count")
{
    const auto g = geometry(3, 9);
    const std::vector<PropagationStack<double>> stacks(2, build_stack(g, 4));
    Rng rng = make_stream(6, Stream::test);
    const PhaseConfig start = random_ps(g, 2, rng);
    const HeuristicResult a = heuristic_ps(stacks, start, {64, 1, 1, 20}, 8);
    const HeuristicResult b = heuristic_ps(stacks, start, {64, 1, 4, 20}, 8);
    CHECK(a.phases.theta == b.phases.theta);
}

TEST_CASE("no single element of the last layer can be improved by much")
{
    const auto g = geometry(2, 4);
    const std::vector<PropagationStack<double>> stacks(1, build_stack(g, 2));
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
    {
        Rng rng = make_stream(seed, Stream::test);
        const PhaseConfig start = random_ps(g, 1, rng);
        const HeuristicResult h = heuristic_ps(stacks, start, {200, 1, 1, 20}, seed);
        const double reached = h.objective[0].back();
        for (Index s = 0; s < 4; ++s)
        {
            MatrixXd theta = h.phases.theta[0];
            double best = 0.0;
            for (int i = 0; i < 6284; ++i)
            {
                theta(1, s) = i * 1e-3;
                best = std::max(best, aggregate_trace(build_aggregate(stacks[0], theta)));
            }
            CHECK(reached >= best / 1.01);
        }
    }
}

TEST_CASE("equal power allocation")
{
    SystemParams p;
    p.aps = 4;
    p.irs = 3;
    p.ers = 2;
    const PowerAllocation a = epa(p);
    for (int m = 0; m < 4; ++m)
    {
        CHECK(a.ir.row(m).sum() == doctest::Approx(1.0));
        CHECK(a.er.row(m).sum() == doctest::Approx(1.0));
    }
    CHECK(a.feasible(p));

    p.serves_ir = {true, false, true, false};
    p.serves_er = {false, true, false, true};
    const PowerAllocation s = epa(p);
    CHECK(s.ir.row(1).sum() == 0.0);
    CHECK(s.er.row(0).sum() == 0.0);
    CHECK(s.ir.row(2).sum() == doctest::Approx(1.0));
    CHECK(s.er.row(3).sum() == doctest::Approx(1.0));
}

TEST_CASE("upper bound of the logistic inverse")
{
    const EHParams eh;
    const double phi = eh.max_power;
    for (double en : {1e-4, 0.003, 0.012, 0.02, 0.0235})
    {
        CHECK(xi_tilde(en, en, eh) == doctest::Approx(logistic_inverse(en, eh)).epsilon(1e-13));
        double prev2 = 0, prev1 = 0;
        for (int i = 1; i < 1000; ++i)
        {
            const double x = phi * i / 1000.0;
            const double bound = xi_tilde(x, en, eh);
            CHECK(bound >= logistic_inverse(x, eh) - 1e-15);
            // discrete convexity
            if (i > 2)
                CHECK(bound - 2 * prev1 + prev2 >= -1e-12);
            prev2 = prev1;
            prev1 = bound;
        }
    }
    CHECK_THROWS_AS(xi_tilde(0.0, 0.01, eh), std::domain_error);
    CHECK_THROWS_AS(xi_tilde(0.01, phi, eh), std::domain_error);
}

TEST_CASE("bound in the energy variable matches the shifted form")
{
    const EHParams eh;
    for (double en : {1e-9, 1e-5, 0.004, 0.02})
        for (double e : {1e-12, 1e-6, 0.001, 0.01, 0.023})
        {
            const double direct = xi_tilde(shifted_output(e, eh), shifted_output(en, eh), eh);
            CHECK(xi_tilde_energy(e, en, eh) == doctest::Approx(direct).epsilon(1e-9));
        }
    // zero harvest needs zero RF energy
    CHECK(xi_tilde_energy(0.0, 0.0, eh) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(xi_tilde_energy(eh.max_power, 0.0, eh), std::domain_error);
}

TEST_CASE("quadratic lower bound")
{
    for (int i = 0; i < 1000; ++i)
    {
        const double xn = 0.01 * i;
        const double x = 10.0 - 0.013 * i;
        CHECK(xn * (2 * x - xn) <= x * x);
    }
}

TEST_CASE("constraint residuals")
{
    SystemConfig cfg;
    cfg.se_target = 0.1;
    const Instance in = instance(cfg, 3);
    const PowerAllocation p = epa(in.model.params);
    const PerformanceReport r = evaluate(in.model, in.table, p);
    const VectorXd eps = 0.5 * r.e_nl;
    ConstraintCheck c = check_constraints(in.model, in.table, p, eps, in.th);
    const double T = sinr_threshold(0.1, in.model.params.tau, in.model.params.coherence);
    for (int k = 0; k < cfg.irs; ++k)
        CHECK(c.sinr_margin(k) == doctest::Approx(r.sinr(k) / T - 1));
    for (int k = 0; k < cfg.ers; ++k)
        CHECK(c.energy_margin(k) == doctest::Approx(r.q(k) / required_rf_energy(eps(k), in.model.params.eh) - 1));
    CHECK(c.budget_excess == doctest::Approx(0.0).scale(1.0));
    CHECK(c.satisfied() == (r.min_se >= 0.1));

    PowerAllocation bad = p;
    bad.er(0, 0) = -0.1;
    c = check_constraints(in.model, in.table, bad, eps, in.th);
    CHECK_FALSE(c.satisfied());
    CHECK(c.describe().find("negative power") != std::string::npos);

    bad = p;
    bad.ir(1, 0) += 0.5;
    c = check_constraints(in.model, in.table, bad, eps, in.th);
    CHECK(c.budget_excess == doctest::Approx(0.5));
    CHECK_THROWS_AS(check_constraints(in.model, in.table, p, VectorXd::Zero(5), in.th), DimensionError);
}

TEST_CASE("subproblem rows are tight at the expansion point")
{
    SystemConfig cfg;
    cfg.se_target = 0.05;
    const Instance in = instance(cfg, 4);
    const PowerAllocation p = epa(in.model.params);
    const PerformanceReport r = evaluate(in.model, in.table, p);
    const VectorXd eps = 0.5 * r.e_nl;
    const ScaState st = make_sca_state(in.model, in.table, p, eps, in.th);
    const Subproblem sub = build_subproblem(st, in.model, in.table, in.th);
    const VectorXd x = sub.pack(p, eps);

    CHECK((sub.unpack_power(x, in.model.params).ir - p.ir).norm() == 0.0);
    CHECK((sub.unpack_power(x, in.model.params).er - p.er).norm() == 0.0);
    CHECK((sub.unpack_eps(x) - eps).norm() <= 1e-15 * eps.norm());

    const ConstraintCheck c = check_constraints(in.model, in.table, p, eps, in.th);
    int sinr = 0, energy = 0;
    for (const auto &row : sub.program.constraints)
    {
        const double v = row.value(x);
        if (row.name.rfind("sinr[", 0) == 0)
            CHECK(v == doctest::Approx(c.sinr_margin(sinr++)).epsilon(1e-10));
        else if (row.name.rfind("energy[", 0) == 0)
        {
            const double m = c.energy_margin(energy++);
            CHECK(v == doctest::Approx(m / (1 + m)).epsilon(1e-9));
        }
        else if (row.name.rfind("cone[", 0) == 0)
            CHECK(std::abs(v) <= 1e-15);
    }
    CHECK(sinr == cfg.irs);
    CHECK(energy == cfg.ers);
}

TEST_CASE("subproblem without energy receivers")
{
    SystemConfig cfg;
    cfg.ers = 0;
    cfg.se_target = 0.05;
    const Instance in = instance(cfg, 5);
    const PowerAllocation p = epa(in.model.params);
    const ScaState st = make_sca_state(in.model, in.table, p, VectorXd(), in.th);
    const Subproblem sub = build_subproblem(st, in.model, in.table, in.th);
    CHECK(sub.eps_var.empty());
    for (const auto &row : sub.program.constraints)
        CHECK(row.name.rfind("energy", 0) != 0);
    CHECK(sub.program.objective.isZero());
}

TEST_CASE("solved subproblem keeps t on the cone boundary")
{
    SystemConfig cfg;
    cfg.se_target = 0.2;
    const Instance in = instance(cfg, 6);
    ScaOptions opts;
    const auto start = find_feasible_point(in.model, in.table, in.th, epa(in.model.params), opts);
    REQUIRE(start);
    const ScaState st = make_sca_state(in.model, in.table, start->power, start->eps, in.th);
    const Subproblem sub = build_subproblem(st, in.model, in.table, in.th);
    const SubproblemSolution sol = solve_subproblem(sub, st, in.model);
    REQUIRE(sol.solver.status == SolveStatus::optimal);
    CHECK(sol.eps.sum() >= start->eps.sum());
    for (std::size_t m = 0; m < sub.ir_var.size(); ++m)
        for (std::size_t k = 0; k < sub.ir_var[m].size(); ++k)
        {
            const double t = sol.solver.x(sub.sqrt_var[m][k]);
            const double eta = sol.solver.x(sub.ir_var[m][k]);
            CHECK(t * t <= eta + 1e-12);
        }
    // the surrogate is conservative, so its solution is feasible for the true problem
    CHECK(check_constraints(in.model, in.table, sol.power, sol.eps, in.th).satisfied(1e-9));
}

TEST_CASE("successive convex approximation")
{
    SystemConfig cfg;
    cfg.se_target = 0.2;
    for (std::uint64_t seed : {7u, 8u, 9u})
    {
        const Instance in = instance(cfg, seed);
        const ScaResult r = sca_power_allocation(in.model, in.table, in.th);
        INFO("seed " << seed << ": " << r.diagnostic);
        REQUIRE(r.status != ScaStatus::infeasible);
        CHECK(r.status == ScaStatus::converged);
        REQUIRE(r.history.size() >= 2);
        for (std::size_t i = 1; i < r.history.size(); ++i)
            CHECK(r.history[i] >= r.history[i - 1]);
        CHECK(check_constraints(in.model, in.table, r.power, r.eps, in.th).satisfied(0.0));
        // the accepted eps is achievable
        const PerformanceReport rep = evaluate(in.model, in.table, r.power);
        for (int k = 0; k < cfg.ers; ++k)
            CHECK(rep.e_nl(k) >= r.eps(k) * (1 - 1e-9));
        // improves on the equal split
        CHECK(rep.sum_he >= evaluate(in.model, in.table, epa(in.model.params)).sum_he * (1 - 1e-9));
    }
}

TEST_CASE("single AP spends its whole energy budget")
{
    SystemConfig cfg;
    cfg.aps = 1;
    cfg.irs = 1;
    cfg.ers = 1;
    cfg.se_target = 0.1;
    const Instance in = instance(cfg, 10);
    const ScaResult r = sca_power_allocation(in.model, in.table, in.th);
    INFO(r.diagnostic);
    REQUIRE(r.status != ScaStatus::infeasible);
    CHECK(r.power.er(0, 0) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("an unreachable rate target is reported infeasible")
{
    SystemConfig cfg;
    cfg.se_target = 40.0;
    const Instance in = instance(cfg, 11);
    std::string why;
    CHECK_FALSE(find_feasible_point(in.model, in.table, in.th, epa(in.model.params), {}, &why));
    CHECK_FALSE(why.empty());
    const ScaResult r = sca_power_allocation(in.model, in.table, in.th);
    CHECK(r.status == ScaStatus::infeasible);
    CHECK(r.history.empty());
}

TEST_CASE("max-min target is feasible and at least the equal split")
{
    SystemConfig cfg;
    const Instance in = instance(cfg, 12);
    const auto mm = max_min_se_target(in.model, in.table, in.th.energy);
    REQUIRE(mm);
    const double base = evaluate(in.model, in.table, epa(in.model.params)).min_se;
    CHECK(mm->target >= base * (1 - 1e-6));
    Thresholds th = in.th;
    th.se.setConstant(mm->target);
    CHECK(check_constraints(in.model, in.table, mm->point.power, mm->point.eps, th).satisfied(0.0));
    CHECK(evaluate(in.model, in.table, mm->point.power).min_se >= mm->target);
}
