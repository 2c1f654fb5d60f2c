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

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

using namespace simswipt;

namespace
{
    enum Exit
    {
        ok = 0,
        infeasible = 1,
        validation_failed = 2,
        config_error = 3,
        internal_error = 4,
    };

    struct Common
    {
        std::string config;
        std::optional<std::uint64_t> seed;
        std::optional<int> trials;
        std::optional<int> workers;
        std::optional<std::string> policy;
        std::string out;
    };

    void add_common(CLI::App &cmd, Common &c)
    {
        cmd.add_option("--config", c.config, "configuration file (INI)")->check(CLI::ExistingFile);
        cmd.add_option("--seed", c.seed, "master seed");
        cmd.add_option("--trials", c.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
        cmd.add_option("--out", c.out, "output path, stdout when omitted");
        cmd.add_option("--policy", c.policy, "{random|equal|heuristic}-{epa|ppa}");
        cmd.add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
    }

    SystemConfig resolve(const Common &c, const SystemConfig &base)
    {
        SystemConfig cfg = c.config.empty() ? base : load_config(c.config, &std::cerr);
        if (c.seed)
            cfg.seed = *c.seed;
        if (c.trials)
            cfg.trials = *c.trials;
        if (c.workers)
            cfg.workers = *c.workers;
        if (c.policy)
        {
            try
            {
                cfg.policy = parse_policy(*c.policy);
            }
            catch (const std::invalid_argument &e)
            {
                throw ConfigError("--policy", e.what());
            }
        }
        cfg.validate();
        return cfg;
    }

    // Writes to --out when given, stdout otherwise.
    class Output
    {
    public:
        explicit Output(const std::string &path)
        {
            if (path.empty())
                return;
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_)
                throw ConfigError("--out", "cannot write '" + path + "'");
        }
        std::ostream &stream() { return file_ ? *file_ : std::cout; }

    private:
        std::unique_ptr<std::ofstream> file_;
    };

    std::vector<Policy> sweep_policies(const Common &c, const SystemConfig &cfg)
    {
        return c.policy ? std::vector<Policy>{cfg.policy} : all_policies();
    }

    int run_simulate(const Common &c)
    {
        const SystemConfig cfg = resolve(c, {});
        const SweepResult r = simulate(cfg, cfg.policy);
        Output out(c.out);
        write_csv(out.stream(), r);
        const SweepRow *feasible = r.find("none", 0.0, to_string(cfg.policy), "feasible");
        return feasible && feasible->mean > 0 ? ok : infeasible;
    }

    int run_sweep_layers(const Common &c)
    {
        const SystemConfig cfg = resolve(c, {});
        const SweepResult r = sweep_layers(cfg, cfg.layer_values, sweep_policies(c, cfg));
        Output out(c.out);
        write_csv(out.stream(), r);
        return ok;
    }

    int run_sweep_aps(const Common &c)
    {
        const SystemConfig cfg = resolve(c, {});
        const SweepResult r = sweep_aps(cfg, cfg.ap_values, cfg.fixed_mn, sweep_policies(c, cfg));
        Output out(c.out);
        write_csv(out.stream(), r);
        return ok;
    }

    int run_validate(const Common &c)
    {
        const SystemConfig cfg = resolve(c, contaminated_preset());
        const ValidationReport rep = validate(cfg);
        Output out(c.out);
        write_validation(out.stream(), rep);
        return rep.passed ? ok : validation_failed;
    }

    int run_optimize(const Common &c)
    {
        SystemConfig cfg = resolve(c, {});
        cfg.policy.power = PowerPolicy::ppa;
        const Scenario sc = build_scenario(cfg, cfg.seed);
        const RunResult res = run_policy(sc, cfg.policy);

        Output out(c.out);
        std::ostream &os = out.stream();
        char buf[160];
        os << "# policy " << to_string(res.policy) << "\n# config_hash " << config_hash(cfg) << "\n# seed " << cfg.seed
           << '\n';
        std::snprintf(buf, sizeof buf, "# se_target %.17g\n# feasible %d\n", res.se_target, res.feasible ? 1 : 0);
        os << buf;
        if (res.sca)
        {
            os << "# sca_status " << to_string(res.sca->status) << '\n';
            if (!res.sca->diagnostic.empty())
                os << "# sca_note " << res.sca->diagnostic << '\n';
            os << "# iteration objective worst_margin solver kkt_residual accepted\n";
            for (const auto &it : res.sca->log)
            {
                std::snprintf(buf, sizeof buf, "# %d %.17g %.6e %s %.3e %d\n", it.iteration, it.objective,
                              it.worst_margin, to_string(it.solver), it.kkt_residual, it.accepted ? 1 : 0);
                os << buf;
            }
        }
        write_matrix(os, "eta_ir", res.power.ir);
        write_matrix(os, "eta_er", res.power.er);
        write_matrix(os, "se", MatrixXd(res.report.se.transpose()));
        write_matrix(os, "e_nl", MatrixXd(res.report.e_nl.transpose()));
        return res.feasible ? ok : infeasible;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Simulation toolkit for SIM-assisted cell-free SWIPT networks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "simswipt 1.0");

    struct Command
    {
        const char *name;
        const char *help;
        int (*run)(const Common &);
        Common args;
    };
    Command commands[] = {
        {"simulate", "one scenario under one policy, CSV of per-receiver metrics", run_simulate, {}},
        {"sweep-layers", "sum-HE and min-SE versus the number of layers", run_sweep_layers, {}},
        {"sweep-aps", "min-SE versus the number of APs at fixed M*N", run_sweep_aps, {}},
        {"validate", "closed forms against Monte Carlo, exit 2 if any |z| > 4", run_validate, {}},
        {"optimize", "run the power allocation and dump it", run_optimize, {}},
    };
    for (auto &cmd : commands)
        add_common(*app.add_subcommand(cmd.name, cmd.help), cmd.args);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    for (auto &cmd : commands)
    {
        if (!app.got_subcommand(cmd.name))
            continue;
        try
        {
            return cmd.run(cmd.args);
        }
        catch (const ConfigError &e)
        {
            std::cerr << "config error: " << e.what() << '\n';
            return config_error;
        }
        catch (const std::exception &e)
        {
            std::cerr << "error: " << e.what() << '\n';
            return internal_error;
        }
    }
    return config_error;
}
