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


#include "simswipt/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace simswipt
{
    namespace
    {
        namespace pt = boost::property_tree;

        std::string fmt_double(double v)
        {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }

        template <typename T>
        T parse_number(const std::string &s)
        {
            T v{};
            const char *b = s.data();
            const char *e = b + s.size();
            auto [ptr, ec] = std::from_chars(b, e, v);
            if (ec != std::errc() || ptr != e)
                throw std::invalid_argument("not a number");
            return v;
        }

        std::string join(const std::vector<int> &v)
        {
            std::string out;
            for (std::size_t i = 0; i < v.size(); ++i)
                out += (i ? "," : "") + std::to_string(v[i]);
            return out;
        }

        std::vector<int> split_ints(const std::string &s)
        {
            std::vector<int> out;
            std::stringstream ss(s);
            std::string item;
            while (std::getline(ss, item, ','))
            {
                const auto b = item.find_first_not_of(" \t");
                const auto e = item.find_last_not_of(" \t");
                if (b == std::string::npos)
                    throw std::invalid_argument("empty list item");
                out.push_back(parse_number<int>(item.substr(b, e - b + 1)));
            }
            if (out.empty())
                throw std::invalid_argument("empty list");
            return out;
        }

        struct Field
        {
            const char *section;
            const char *key;
            std::function<std::string(const SystemConfig &)> get;
            std::function<void(SystemConfig &, const std::string &)> set;
        };

        template <typename T>
        Field number(const char *section, const char *key, T SystemConfig::*member)
        {
            return {section, key,
                    [member](const SystemConfig &c)
                    {
                        if constexpr (std::is_floating_point_v<T>)
                            return fmt_double(c.*member);
                        else
                            return std::to_string(c.*member);
                    },
                    [member](SystemConfig &c, const std::string &s) { c.*member = parse_number<T>(s); }};
        }

        Field int_list(const char *section, const char *key, std::vector<int> SystemConfig::*member)
        {
            return {section, key, [member](const SystemConfig &c) { return join(c.*member); },
                    [member](SystemConfig &c, const std::string &s) { c.*member = split_ints(s); }};
        }

        template <typename E>
        Field choice(const char *section, const char *key, E SystemConfig::*member,
                     std::vector<std::pair<const char *, E>> names)
        {
            return {section, key,
                    [member, names](const SystemConfig &c)
                    {
                        for (const auto &[n, v] : names)
                            if (v == c.*member)
                                return std::string(n);
                        return std::string("?");
                    },
                    [member, names](SystemConfig &c, const std::string &s)
                    {
                        for (const auto &[n, v] : names)
                            if (s == n)
                            {
                                c.*member = v;
                                return;
                            }
                        std::string allowed;
                        for (const auto &[n, v] : names)
                            allowed += (allowed.empty() ? "" : "|") + std::string(n);
                        throw std::invalid_argument("expected one of " + allowed);
                    }};
        }

        const std::vector<Field> &fields()
        {
            static const std::vector<Field> table = {
                number("system", "aps", &SystemConfig::aps),
                number("system", "antennas", &SystemConfig::antennas),
                number("system", "irs", &SystemConfig::irs),
                number("system", "ers", &SystemConfig::ers),
                number("system", "tau", &SystemConfig::tau),
                number("system", "coherence", &SystemConfig::coherence),
                number("system", "dl_power_w", &SystemConfig::dl_power_w),
                number("system", "ul_power_w", &SystemConfig::ul_power_w),
                number("system", "noise_dbm", &SystemConfig::noise_dbm),
                number("system", "kappa", &SystemConfig::kappa),
                choice("system", "pilots", &SystemConfig::pilots,
                       {{"round_robin", PilotPolicy::round_robin}, {"random", PilotPolicy::random}}),
                choice("system", "serving", &SystemConfig::serving,
                       {{"all", ServingSets::all}, {"split", ServingSets::split}}),

                number("sim", "layers", &SystemConfig::layers),
                number("sim", "elements", &SystemConfig::elements),
                number("sim", "carrier_mhz", &SystemConfig::carrier_mhz),
                number("sim", "element_spacing_wl", &SystemConfig::element_spacing_wl),
                number("sim", "thickness_wl", &SystemConfig::thickness_wl),
                number("sim", "layer_spacing_m", &SystemConfig::layer_spacing_m),

                number("layout", "side_m", &SystemConfig::side_m),
                number("layout", "ap_height_m", &SystemConfig::ap_height_m),
                number("layout", "rx_height_m", &SystemConfig::rx_height_m),
                number("layout", "d0_m", &SystemConfig::d0_m),
                number("layout", "d1_m", &SystemConfig::d1_m),
                number("layout", "shadow_std_db", &SystemConfig::shadow_std_db),

                number("energy", "slope", &SystemConfig::eh_slope),
                number("energy", "threshold_w", &SystemConfig::eh_threshold_w),
                number("energy", "max_power_w", &SystemConfig::eh_max_power_w),
                number("energy", "target_w", &SystemConfig::energy_target_w),

                number("rate", "se_target", &SystemConfig::se_target),
                choice("rate", "ppa_target", &SystemConfig::ppa_target,
                       {{"maxmin", PpaTarget::maxmin}, {"fixed", PpaTarget::fixed}}),

                number("optimize", "candidates", &SystemConfig::candidates),
                number("optimize", "heuristic_sweeps", &SystemConfig::heuristic_sweeps),
                number("optimize", "polish_iterations", &SystemConfig::polish_iterations),
                number("optimize", "sca_max_iterations", &SystemConfig::sca_max_iterations),
                number("optimize", "sca_tolerance", &SystemConfig::sca_tolerance),

                number("run", "seed", &SystemConfig::seed),
                number("run", "seeds", &SystemConfig::seeds),
                number("run", "trials", &SystemConfig::trials),
                number("run", "workers", &SystemConfig::workers),
                {"run", "policy", [](const SystemConfig &c) { return to_string(c.policy); },
                 [](SystemConfig &c, const std::string &s) { c.policy = parse_policy(s); }},
                int_list("run", "layer_values", &SystemConfig::layer_values),
                int_list("run", "ap_values", &SystemConfig::ap_values),
                number("run", "fixed_mn", &SystemConfig::fixed_mn),
            };
            return table;
        }

        void require(bool ok, const char *key, const std::string &what)
        {
            if (!ok)
                throw ConfigError(key, what);
        }
    }

    std::string to_string(PhasePolicy p)
    {
        switch (p)
        {
        case PhasePolicy::random:
            return "random";
        case PhasePolicy::equal:
            return "equal";
        case PhasePolicy::heuristic:
            return "heuristic";
        }
        return "?";
    }

    std::string to_string(PowerPolicy p) { return p == PowerPolicy::epa ? "epa" : "ppa"; }

    std::string to_string(const Policy &p) { return to_string(p.phase) + "-" + to_string(p.power); }

    Policy parse_policy(const std::string &text)
    {
        const auto dash = text.find_first_of("-x,:");
        if (dash == std::string::npos)
            throw std::invalid_argument("policy must look like heuristic-ppa");
        const std::string a = text.substr(0, dash);
        const std::string b = text.substr(dash + 1);
        Policy p;
        if (a == "random")
            p.phase = PhasePolicy::random;
        else if (a == "equal")
            p.phase = PhasePolicy::equal;
        else if (a == "heuristic")
            p.phase = PhasePolicy::heuristic;
        else
            throw std::invalid_argument("unknown phase policy '" + a + "'");
        if (b == "epa")
            p.power = PowerPolicy::epa;
        else if (b == "ppa")
            p.power = PowerPolicy::ppa;
        else
            throw std::invalid_argument("unknown power policy '" + b + "'");
        return p;
    }

    double SystemConfig::wavelength() const { return 299792458.0 / (carrier_mhz * 1e6); }

    double SystemConfig::layer_spacing() const
    {
        return layer_spacing_m > 0 ? layer_spacing_m : thickness_wl * wavelength() / layers;
    }

    SimGeometry<double> SystemConfig::geometry() const
    {
        return {layers, elements, element_spacing_wl * wavelength(), layer_spacing(), wavelength()};
    }

    PathLossModel SystemConfig::path_loss() const
    {
        return {carrier_mhz, ap_height_m, rx_height_m, d0_m, d1_m, shadow_std_db};
    }

    EHParams SystemConfig::eh() const { return {eh_slope, eh_threshold_w, eh_max_power_w}; }

    void SystemConfig::validate() const
    {
        require(aps >= 1, "system.aps", "must be >= 1");
        require(antennas >= 1, "system.antennas", "must be >= 1");
        require(irs >= 0, "system.irs", "must be >= 0");
        require(ers >= 0, "system.ers", "must be >= 0");
        require(irs + ers >= 1, "system.irs", "need at least one receiver");
        require(tau >= 0, "system.tau", "must be >= 0 (0 selects irs + ers)");
        require(coherence >= 2, "system.coherence", "must be >= 2");
        require(pilot_length() < coherence, "system.tau", "pilot length must be below the coherence interval");
        require(dl_power_w > 0, "system.dl_power_w", "must be positive");
        require(ul_power_w > 0, "system.ul_power_w", "must be positive");
        require(std::isfinite(noise_dbm), "system.noise_dbm", "must be finite");
        require(kappa >= 0, "system.kappa", "must be >= 0");
        require(serving == ServingSets::all || aps >= 2, "system.serving", "split needs at least two APs");

        require(layers >= 1, "sim.layers", "must be >= 1");
        const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(elements))));
        require(elements >= 1 && side * side == elements, "sim.elements", "must be a perfect square");
        require(carrier_mhz > 0, "sim.carrier_mhz", "must be positive");
        require(element_spacing_wl > 0, "sim.element_spacing_wl", "must be positive");
        require(thickness_wl > 0, "sim.thickness_wl", "must be positive");
        require(layer_spacing_m >= 0, "sim.layer_spacing_m", "must be >= 0 (0 derives it from thickness_wl)");

        require(side_m > 0, "layout.side_m", "must be positive");
        require(ap_height_m > 0, "layout.ap_height_m", "must be positive");
        require(rx_height_m > 0, "layout.rx_height_m", "must be positive");
        require(d0_m > 0, "layout.d0_m", "must be positive");
        require(d1_m > d0_m, "layout.d1_m", "must exceed d0_m");
        require(shadow_std_db >= 0, "layout.shadow_std_db", "must be >= 0");

        require(eh_slope > 0, "energy.slope", "must be positive");
        require(eh_max_power_w > 0, "energy.max_power_w", "must be positive");
        require(std::isfinite(eh_threshold_w), "energy.threshold_w", "must be finite");
        const double om = eh().omega();
        require(om > 0 && om < 1, "energy.threshold_w", "Omega must lie in (0, 1)");
        require(energy_target_w >= 0 && energy_target_w < eh_max_power_w, "energy.target_w",
                "must lie in [0, max_power_w)");

        require(se_target >= 0, "rate.se_target", "must be >= 0");

        require(candidates >= 1, "optimize.candidates", "must be >= 1");
        require(heuristic_sweeps >= 1, "optimize.heuristic_sweeps", "must be >= 1");
        require(polish_iterations >= 0, "optimize.polish_iterations", "must be >= 0");
        require(sca_max_iterations >= 1, "optimize.sca_max_iterations", "must be >= 1");
        require(sca_tolerance > 0, "optimize.sca_tolerance", "must be positive");

        require(seeds >= 1, "run.seeds", "must be >= 1");
        require(trials >= 10, "run.trials", "must be >= 10");
        require(workers >= 1, "run.workers", "must be >= 1");
        require(!layer_values.empty(), "run.layer_values", "must not be empty");
        for (int l : layer_values)
            require(l >= 1, "run.layer_values", "entries must be >= 1");
        require(!ap_values.empty(), "run.ap_values", "must not be empty");
        require(fixed_mn >= 1, "run.fixed_mn", "must be >= 1");
        for (int m : ap_values)
        {
            require(m >= 1, "run.ap_values", "entries must be >= 1");
            require(fixed_mn % m == 0, "run.ap_values", "every entry must divide fixed_mn");
        }
    }

    SystemConfig parse_config(std::istream &is, std::ostream *summary)
    {
        pt::ptree tree;
        try
        {
            pt::read_ini(is, tree);
        }
        catch (const pt::ini_parser_error &e)
        {
            throw ConfigError("<file>", std::string("parse error: ") + e.message() + " at line " +
                                            std::to_string(e.line()));
        }

        std::set<std::string> sections;
        for (const auto &f : fields())
            sections.insert(f.section);

        SystemConfig cfg;
        std::set<std::string> seen;
        for (const auto &[section, body] : tree)
        {
            if (!sections.count(section))
                throw ConfigError(section, body.empty() ? "key outside any section" : "unknown section");
            for (const auto &[key, value] : body)
            {
                const std::string full = section + "." + key;
                const auto it = std::find_if(fields().begin(), fields().end(), [&](const Field &f)
                                             { return section == f.section && key == f.key; });
                if (it == fields().end())
                    throw ConfigError(full, "unknown key");
                const std::string text = value.get_value<std::string>();
                try
                {
                    it->set(cfg, text);
                }
                catch (const std::exception &e)
                {
                    throw ConfigError(full, "invalid value '" + text + "': " + e.what());
                }
                seen.insert(full);
            }
        }

        if (summary)
        {
            bool first = true;
            for (const auto &f : fields())
            {
                const std::string full = std::string(f.section) + "." + f.key;
                if (seen.count(full))
                    continue;
                if (first)
                    *summary << "defaults applied:\n";
                first = false;
                *summary << "  " << full << " = " << f.get(cfg) << '\n';
            }
        }
        cfg.validate();
        return cfg;
    }

    SystemConfig load_config(const std::string &path, std::ostream *summary)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("<file>", "cannot open '" + path + "'");
        return parse_config(in, summary);
    }

    void write_config(std::ostream &os, const SystemConfig &cfg)
    {
        std::string section;
        for (const auto &f : fields())
        {
            if (section != f.section)
            {
                if (!section.empty())
                    os << '\n';
                section = f.section;
                os << '[' << section << "]\n";
            }
            os << f.key << " = " << f.get(cfg) << '\n';
        }
    }

    std::string config_text(const SystemConfig &cfg)
    {
        std::ostringstream os;
        write_config(os, cfg);
        return os.str();
    }

    void save_config(const std::string &path, const SystemConfig &cfg)
    {
        std::ofstream out(path);
        if (!out)
            throw ConfigError("<file>", "cannot write '" + path + "'");
        write_config(out, cfg);
    }

    std::string config_hash(const SystemConfig &cfg)
    {
        // worker count never changes results and the seed has its own column
        SystemConfig key = cfg;
        key.workers = 1;
        key.seed = 0;
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : config_text(key))
        {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }

    SystemConfig contaminated_preset()
    {
        SystemConfig c;
        c.aps = 2;
        c.antennas = 2;
        c.elements = 4;
        c.layers = 2;
        c.irs = 3;
        c.ers = 3;
        c.tau = 2;
        c.pilots = PilotPolicy::round_robin;
        c.policy = {PhasePolicy::heuristic, PowerPolicy::epa};
        c.trials = 10000;
        return c;
    }
}
