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

#include "simswipt/config.hpp"

#include <sstream>

using namespace simswipt;

namespace
{
    SystemConfig parse(const std::string &text, std::ostream *summary = nullptr)
    {
        std::istringstream in(text);
        return parse_config(in, summary);
    }

    std::string error_key(const std::string &text)
    {
        try
        {
            parse(text);
        }
        catch (const ConfigError &e)
        {
            return e.key();
        }
        return "";
    }
}

TEST_CASE("empty input gives the desk-scale defaults and lists them")
{
    std::ostringstream summary;
    const SystemConfig cfg = parse("", &summary);
    CHECK(cfg == SystemConfig{});
    CHECK(cfg.aps == 3);
    CHECK(cfg.antennas == 4);
    CHECK(cfg.elements == 9);
    CHECK(cfg.irs == 2);
    CHECK(cfg.ers == 2);
    CHECK(cfg.seeds == 20);
    CHECK(cfg.pilot_length() == 4);
    const std::string s = summary.str();
    CHECK(s.find("defaults applied") != std::string::npos);
    CHECK(s.find("system.aps = 3") != std::string::npos);
    CHECK(s.find("run.policy = heuristic-ppa") != std::string::npos);
}

TEST_CASE("explicit keys override defaults and drop out of the summary")
{
    std::ostringstream summary;
    const SystemConfig cfg = parse("[system]\naps = 5\ntau = 3\n\n[sim]\nlayers = 3\n"
                                   "[run]\npolicy = equal-epa\nlayer_values = 1, 3,5\n",
                                   &summary);
    CHECK(cfg.aps == 5);
    CHECK(cfg.pilot_length() == 3);
    CHECK(cfg.layers == 3);
    CHECK(cfg.policy == Policy{PhasePolicy::equal, PowerPolicy::epa});
    CHECK(cfg.layer_values == std::vector<int>{1, 3, 5});
    CHECK(summary.str().find("system.aps") == std::string::npos);
}

TEST_CASE("derived geometry")
{
    SystemConfig cfg;
    CHECK(cfg.wavelength() == doctest::Approx(0.15778550421052632));
    cfg.layers = 4;
    CHECK(cfg.layer_spacing() == doctest::Approx(5.0 * cfg.wavelength() / 4));
    cfg.layer_spacing_m = 0.1;
    CHECK(cfg.layer_spacing() == 0.1);
    const auto g = cfg.geometry();
    CHECK(g.element_spacing == doctest::Approx(cfg.wavelength() / 2));
    CHECK(g.layers == 4);
}

TEST_CASE("write and parse round trip")
{
    SystemConfig cfg;
    cfg.aps = 6;
    cfg.kappa = 0.1 + 0.2; // not exactly representable in short decimal
    cfg.noise_dbm = -91.3;
    cfg.serving = ServingSets::split;
    cfg.ppa_target = PpaTarget::fixed;
    cfg.seed = 18446744073709551615ULL;
    cfg.ap_values = {1, 2, 3};
    cfg.policy = {PhasePolicy::random, PowerPolicy::ppa};
    const SystemConfig back = parse(config_text(cfg));
    CHECK(back == cfg);
    CHECK(config_text(back) == config_text(cfg));
}

TEST_CASE("bad input names the offending key")
{
    CHECK(error_key("[system]\nantenas = 4\n") == "system.antenas");
    CHECK(error_key("[nonsense]\na = 1\n") == "nonsense");
    CHECK(error_key("[system]\naps = three\n") == "system.aps");
    CHECK(error_key("[system]\naps = 3.5\n") == "system.aps");
    CHECK(error_key("[system]\npilots = sometimes\n") == "system.pilots");
    CHECK(error_key("[run]\npolicy = best-ppa\n") == "run.policy");
    CHECK(error_key("[system]\ntau = 200\n") == "system.tau");
    CHECK(error_key("[system]\ntau = 250\n") == "system.tau");
    CHECK(error_key("[sim]\nelements = 8\n") == "sim.elements");
    CHECK(error_key("[run]\nap_values = 1,5\n") == "run.ap_values");
    CHECK(error_key("[energy]\ntarget_w = 1\n") == "energy.target_w");
    CHECK(error_key("[system]\nserving = split\naps = 1\n") == "system.serving");
    CHECK(error_key("[run]\nlayer_values = 1,,2\n") == "run.layer_values");
    CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), ConfigError);
}

TEST_CASE("policy names")
{
    for (const auto &text : {"random-epa", "equal-ppa", "heuristic-epa"})
        CHECK(to_string(parse_policy(text)) == text);
    CHECK_THROWS(parse_policy("heuristic"));
    CHECK_THROWS(parse_policy("random-xpa"));
}

TEST_CASE("hash tracks the experiment but not the seed or the worker count")
{
    SystemConfig a;
    SystemConfig b = a;
    b.workers = 8;
    b.seed = 99;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b.layers = 3;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("contaminated preset shares pilots")
{
    const SystemConfig c = contaminated_preset();
    CHECK_NOTHROW(c.validate());
    CHECK(c.pilot_length() < c.receivers());
}
