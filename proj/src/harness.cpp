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


#include "simswipt/harness.hpp"

#include <cstdio>
#include <ostream>

namespace simswipt
{
    namespace
    {
        std::size_t idx(int i) { return static_cast<std::size_t>(i); }

        ScaOptions sca_options(const SystemConfig &cfg)
        {
            ScaOptions o;
            o.max_iterations = cfg.sca_max_iterations;
            o.tolerance = cfg.sca_tolerance;
            return o;
        }

        std::string fmt(double v)
        {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }

        struct Sample
        {
            double sum_he = 0.0;
            double min_se = 0.0;
            double feasible = 0.0;
        };

        // tasks[point * replicates + r][policy]
        using SampleGrid = std::vector<std::vector<Sample>>;

        SampleGrid run_grid(const std::vector<SystemConfig> &points, const std::vector<Policy> &policies,
                            const SystemConfig &base)
        {
            const int R = base.seeds;
            SampleGrid grid(points.size() * idx(R));
            parallel_for(static_cast<Index>(grid.size()), base.workers, [&](Index task)
            {
                const auto point = static_cast<std::size_t>(task) / idx(R);
                const int r = static_cast<int>(static_cast<std::size_t>(task) % idx(R));
                const Scenario sc = build_scenario(points[point], replicate_seed(base.seed, r));
                auto &row = grid[static_cast<std::size_t>(task)];
                for (const Policy &p : policies)
                {
                    const RunResult res = run_policy(sc, p);
                    row.push_back({res.report.sum_he, res.report.min_se, res.feasible ? 1.0 : 0.0});
                }
            });
            return grid;
        }

        void collect(SweepResult &out, const SampleGrid &grid, std::size_t point, int R, const std::string &var,
                     double value, const std::vector<Policy> &policies)
        {
            for (std::size_t pi = 0; pi < policies.size(); ++pi)
            {
                const std::pair<const char *, double Sample::*> metrics[] = {
                    {"sum_he", &Sample::sum_he}, {"min_se", &Sample::min_se}, {"feasible", &Sample::feasible}};
                for (const auto &[name, member] : metrics)
                {
                    double mean = 0.0;
                    for (int r = 0; r < R; ++r)
                        mean += grid[point * idx(R) + idx(r)][pi].*member;
                    mean /= R;
                    double ss = 0.0;
                    for (int r = 0; r < R; ++r)
                    {
                        const double d = grid[point * idx(R) + idx(r)][pi].*member - mean;
                        ss += d * d;
                    }
                    const double se = R > 1 ? std::sqrt(ss / (R - 1) / R) : 0.0;
                    out.rows.push_back({var, value, to_string(policies[pi]), name, mean, se, R});
                }
            }
        }
    }

    SystemParams system_params(const SystemConfig &cfg)
    {
        SystemParams p;
        p.aps = cfg.aps;
        p.antennas = cfg.antennas;
        p.irs = cfg.irs;
        p.ers = cfg.ers;
        p.tau = cfg.pilot_length();
        p.coherence = cfg.coherence;
        p.dl_power = cfg.dl_power_w;
        p.ul_power = cfg.ul_power_w;
        p.noise_power = dbm_to_watt(cfg.noise_dbm);
        p.kappa = cfg.kappa;
        p.eh = cfg.eh();
        if (cfg.serving == ServingSets::split)
        {
            p.serves_ir.resize(idx(cfg.aps));
            p.serves_er.resize(idx(cfg.aps));
            for (int m = 0; m < cfg.aps; ++m)
            {
                p.serves_ir[idx(m)] = m % 2 == 0;
                p.serves_er[idx(m)] = m % 2 == 1;
            }
        }
        return p;
    }

    NetworkLayout draw_layout(const SystemConfig &cfg, Rng &rng)
    {
        std::uniform_real_distribution<double> u(0.0, cfg.side_m);
        NetworkLayout layout;
        layout.side = cfg.side_m;
        auto draw = [&](std::vector<Point3> &dst, int n, double h)
        {
            for (int i = 0; i < n; ++i)
            {
                const double x = u(rng);
                const double y = u(rng);
                dst.emplace_back(x, y, h);
            }
        };
        draw(layout.aps, cfg.aps, cfg.ap_height_m);
        draw(layout.irs, cfg.irs, cfg.rx_height_m);
        draw(layout.ers, cfg.ers, cfg.rx_height_m);
        return layout;
    }

    Scenario build_scenario(const SystemConfig &cfg, std::uint64_t seed)
    {
        cfg.validate();
        Scenario sc;
        sc.config = cfg;
        sc.seed = seed;
        sc.params = system_params(cfg);
        sc.geometry = cfg.geometry();

        // APs and receivers come from separate streams, so the receivers of
        // a seed stay put when the AP count changes.
        Rng ap_rng = make_stream(seed, Stream::layout, {0});
        Rng rx_rng = make_stream(seed, Stream::layout, {1});
        SystemConfig only_aps = cfg;
        only_aps.irs = only_aps.ers = 0;
        SystemConfig only_rx = cfg;
        only_rx.aps = 0;
        sc.layout = draw_layout(only_aps, ap_rng);
        const NetworkLayout rx = draw_layout(only_rx, rx_rng);
        sc.layout.irs = rx.irs;
        sc.layout.ers = rx.ers;
        sc.layout.validate();

        const PropagationStack<double> stack = build_stack(sc.geometry, cfg.antennas);
        sc.stacks.assign(idx(cfg.aps), stack);

        const PathLossModel pl = cfg.path_loss();
        const int K = cfg.receivers();
        sc.links.resize(idx(cfg.aps));
        for (int m = 0; m < cfg.aps; ++m)
            for (int k = 0; k < K; ++k)
            {
                const ReceiverGeometry rg = receiver_geometry(sc.layout, sc.geometry, m, k);
                Rng sh = make_stream(seed, Stream::shadowing, {static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(k)});
                const double shadow = std::normal_distribution<double>(0.0, cfg.shadow_std_db)(sh);
                LinkStatistics link;
                link.beta = large_scale_fading(pl, rg.centre_distance, shadow);
                link.kappa = cfg.kappa;
                link.los = los_steering(rg, sc.geometry);
                sc.links[idx(m)].push_back(std::move(link));
            }

        Rng pilot_rng = make_stream(seed, Stream::pilots);
        sc.pilots = assign_pilots(K, cfg.pilot_length(), cfg.pilots, &pilot_rng);
        return sc;
    }

    PhaseConfig choose_phases(const Scenario &sc, PhasePolicy policy)
    {
        const int M = sc.config.aps;
        switch (policy)
        {
        case PhasePolicy::equal:
            return equal_ps(sc.geometry, M, 0.0);
        case PhasePolicy::random:
        case PhasePolicy::heuristic:
        {
            Rng rng = make_stream(sc.seed, Stream::phases);
            PhaseConfig start = random_ps(sc.geometry, M, rng);
            if (policy == PhasePolicy::random)
                return start;
            HeuristicOptions opts;
            opts.candidates = sc.config.candidates;
            opts.sweeps = sc.config.heuristic_sweeps;
            opts.polish_iterations = sc.config.polish_iterations;
            return heuristic_ps(sc.stacks, start, opts, sc.seed).phases;
        }
        }
        throw std::invalid_argument("choose_phases: unknown policy");
    }

    NetworkModel build_model(const Scenario &sc, const PhaseConfig &phases)
    {
        std::vector<CMatrix> aggregate;
        aggregate.reserve(sc.stacks.size());
        for (int m = 0; m < sc.config.aps; ++m)
            aggregate.push_back(build_aggregate(sc.stacks[idx(m)], phases, m));
        return make_network_model(sc.params, sc.pilots, std::move(aggregate), sc.links);
    }

    Thresholds thresholds(const SystemConfig &cfg)
    {
        return {VectorXd::Constant(cfg.irs, cfg.se_target), VectorXd::Constant(cfg.ers, cfg.energy_target_w)};
    }

    RunResult run_policy(const Scenario &sc, const Policy &policy)
    {
        const SystemConfig &cfg = sc.config;
        RunResult res;
        res.policy = policy;
        res.phases = choose_phases(sc, policy.phase);
        const NetworkModel model = build_model(sc, res.phases);
        const MomentTable table = build_moment_table(model);
        Thresholds th = thresholds(cfg);

        res.power = epa(model.params);
        res.se_target = cfg.se_target;
        if (policy.power == PowerPolicy::ppa)
        {
            const ScaOptions opts = sca_options(cfg);
            std::optional<FeasiblePoint> start;
            if (cfg.ppa_target == PpaTarget::maxmin)
            {
                if (auto mm = max_min_se_target(model, table, th.energy, opts))
                {
                    res.se_target = mm->target;
                    th.se.setConstant(mm->target);
                    start = mm->point;
                }
            }
            else
                start = find_feasible_point(model, table, th, res.power, opts);

            if (start)
            {
                res.sca = sca_power_allocation(model, table, th, *start, opts);
                res.power = res.sca->power;
            }
            res.feasible = start.has_value() && res.se_target >= cfg.se_target;
        }

        res.report = evaluate(model, table, res.power);
        if (policy.power == PowerPolicy::epa)
        {
            bool ok = cfg.irs == 0 || res.report.min_se >= cfg.se_target;
            for (int ke = 0; ke < cfg.ers; ++ke)
                ok = ok && res.report.e_nl(ke) >= cfg.energy_target_w;
            res.feasible = ok;
        }
        return res;
    }

    RunResult run_scenario(const SystemConfig &cfg, const Policy &policy, std::uint64_t seed)
    {
        return run_policy(build_scenario(cfg, seed), policy);
    }

    std::uint64_t replicate_seed(std::uint64_t seed, int r)
    {
        return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(r) + 1));
    }

    const SweepRow *SweepResult::find(const std::string &var, double value, const std::string &policy,
                                      const std::string &metric) const
    {
        for (const auto &r : rows)
            if (r.sweep_var == var && r.value == value && r.policy == policy && r.metric == metric)
                return &r;
        return nullptr;
    }

    void write_csv(std::ostream &os, const SweepResult &result)
    {
        os << "sweep_var,value,policy,metric,mean,stderr,seed_count,config_hash,seed\n";
        for (const auto &r : result.rows)
            os << r.sweep_var << ',' << fmt(r.value) << ',' << r.policy << ',' << r.metric << ',' << fmt(r.mean)
               << ',' << fmt(r.std_error) << ',' << r.seed_count << ',' << result.config_hash << ',' << result.seed
               << '\n';
    }

    std::vector<Policy> all_policies()
    {
        std::vector<Policy> out;
        for (PhasePolicy ph : {PhasePolicy::random, PhasePolicy::equal, PhasePolicy::heuristic})
            for (PowerPolicy pw : {PowerPolicy::epa, PowerPolicy::ppa})
                out.push_back({ph, pw});
        return out;
    }

    SweepResult sweep_layers(const SystemConfig &cfg, const std::vector<int> &layers,
                             const std::vector<Policy> &policies)
    {
        std::vector<SystemConfig> points;
        for (int L : layers)
        {
            SystemConfig c = cfg;
            c.layers = L;
            c.validate();
            points.push_back(c);
        }
        const SampleGrid grid = run_grid(points, policies, cfg);
        SweepResult out{config_hash(cfg), cfg.seed, {}};
        for (std::size_t i = 0; i < layers.size(); ++i)
            collect(out, grid, i, cfg.seeds, "layers", layers[i], policies);
        return out;
    }

    SweepResult sweep_aps(const SystemConfig &cfg, const std::vector<int> &aps, int fixed_mn,
                          const std::vector<Policy> &policies)
    {
        std::vector<SystemConfig> points;
        for (int M : aps)
        {
            if (M < 1 || fixed_mn % M != 0)
                throw ConfigError("run.ap_values", std::to_string(M) + " does not divide fixed_mn");
            SystemConfig c = cfg;
            c.aps = M;
            c.antennas = fixed_mn / M;
            if (c.serving == ServingSets::split && M < 2)
                c.serving = ServingSets::all;
            c.validate();
            points.push_back(c);
        }
        const SampleGrid grid = run_grid(points, policies, cfg);
        SweepResult out{config_hash(cfg), cfg.seed, {}};
        for (std::size_t i = 0; i < aps.size(); ++i)
            collect(out, grid, i, cfg.seeds, "aps", aps[i], policies);
        return out;
    }

    SweepResult simulate(const SystemConfig &cfg, const Policy &policy)
    {
        const RunResult res = run_scenario(cfg, policy, cfg.seed);
        SweepResult out{config_hash(cfg), cfg.seed, {}};
        const std::string name = to_string(policy);
        auto add = [&](const std::string &metric, double v) { out.rows.push_back({"none", 0.0, name, metric, v, 0.0, 1}); };
        add("sum_he", res.report.sum_he);
        add("min_se", res.report.min_se);
        add("feasible", res.feasible ? 1.0 : 0.0);
        add("se_target", res.se_target);
        for (Index k = 0; k < res.report.se.size(); ++k)
            add("se_ir" + std::to_string(k), res.report.se(k));
        for (Index k = 0; k < res.report.q.size(); ++k)
        {
            add("q_er" + std::to_string(k), res.report.q(k));
            add("e_nl_er" + std::to_string(k), res.report.e_nl(k));
        }
        return out;
    }

    ValidationReport validate(const SystemConfig &cfg, double z_limit)
    {
        const Scenario sc = build_scenario(cfg, cfg.seed);
        const NetworkModel model = build_model(sc, choose_phases(sc, cfg.policy.phase));
        const MomentTable table = build_moment_table(model);
        const PowerAllocation power = epa(model.params);
        const McReport mc = mc_terms(model, power, {cfg.trials, cfg.seed, cfg.workers});
        ValidationReport rep;
        rep.terms = compare_terms(model, table, power, mc);
        for (const auto &t : rep.terms)
            rep.max_abs_z = std::max(rep.max_abs_z, std::abs(t.z()));
        rep.passed = rep.max_abs_z <= z_limit;
        return rep;
    }

    void write_validation(std::ostream &os, const ValidationReport &report)
    {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-18s %15s %15s %12s %9s %10s\n", "term", "closed", "empirical", "stderr", "z",
                      "rel_err");
        os << buf;
        for (const auto &t : report.terms)
        {
            std::snprintf(buf, sizeof buf, "%-18s %15.8e %15.8e %12.4e %9.3f %10.3e\n", t.name.c_str(), t.closed,
                          t.empirical, t.std_error, t.z(), t.relative_error());
            os << buf;
        }
        std::snprintf(buf, sizeof buf, "max |z| = %.3f -> %s\n", report.max_abs_z, report.passed ? "PASS" : "FAIL");
        os << buf;
    }
}
