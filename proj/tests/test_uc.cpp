// Copyright 2026 The hycqm Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.


#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace hycqm;
using namespace hycqm::test;
using Catch::Approx;

namespace {

// Minimum of the generated model: every binary pattern, with each period's
// single-segment output filled cheapest first, scored by the model itself.
std::optional<double> model_min(const UcSpec& spec, const ConstrainedModel& m) {
    std::vector<std::size_t> bins;
    for (std::size_t i = 0; i < m.num_variables(); ++i) {
        if (m.variable(i).vartype == Vartype::BINARY) bins.push_back(i);
    }
    REQUIRE(bins.size() <= 20);
    std::optional<double> best;
    std::vector<double> x(m.num_variables(), 0.0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << bins.size()); ++mask) {
        std::fill(x.begin(), x.end(), 0.0);
        for (std::size_t b = 0; b < bins.size(); ++b) x[bins[b]] = static_cast<double>((mask >> b) & 1);
        for (std::size_t t = 1; t <= spec.T(); ++t) {
            std::vector<std::size_t> on;
            double need = spec.demand[t - 1];
            for (std::size_t g = 0; g < spec.G(); ++g) {
                if (x[m.labels()->at(uc_u(spec.generators[g], t))] == 1) {
                    on.push_back(g);
                    need -= spec.generators[g].pmin;
                }
            }
            std::sort(on.begin(), on.end(),
                      [&](std::size_t a, std::size_t b) { return spec.generators[a].slopes[0] < spec.generators[b].slopes[0]; });
            for (std::size_t g : on) {
                const auto& gen = spec.generators[g];
                const double take = std::clamp(need, 0.0, gen.pmax - gen.pmin);
                x[m.labels()->at(uc_p(gen, 0, t))] = take;
                need -= take;
            }
        }
        if (!m.is_feasible(x)) continue;
        const double e = m.objective_value(x);
        if (!best || e < *best) best = e;
    }
    return best;
}

}  // namespace

TEST_CASE("UC oracle agrees with enumeration of the generated model") {
    int compared = 0;
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const UcSpec spec = random_uc_spec(seed % 2 ? 2 : 3, 2, 1 + seed % 2, 1, seed);
        const auto m = gen_unit_commitment(spec);
        const auto sol = uc_oracle(spec);
        const auto ref = model_min(spec, m);
        REQUIRE(sol.has_value() == ref.has_value());
        if (!sol) continue;
        ++compared;
        CHECK(sol->cost == Approx(*ref).epsilon(1e-9));
        const auto x = uc_assignment(spec, m, *sol);
        CHECK(m.is_feasible(x));
        CHECK(m.objective_value(x) == Approx(sol->cost).epsilon(1e-9));
    }
    CHECK(compared >= 6);
}

TEST_CASE("UC minimum up time forbids a one-period run") {
    UcSpec spec;
    Generator a;
    a.name = "a";
    a.pmin = 10;
    a.pmax = 50;
    a.slopes = {1};
    a.startup_costs = {5};
    a.min_up = 2;
    Generator b = a;
    b.name = "b";
    b.min_up = 1;
    b.slopes = {100};
    spec.generators = {a, b};
    spec.demand = {0, 20, 0};
    const auto sol = uc_oracle(spec);
    REQUIRE(sol);
    // a started in period 2 would have to stay on through a zero-demand period
    CHECK(sol->commitment[0][1] == 0);
    CHECK(sol->commitment[1][1] == 1);
    const auto m = gen_unit_commitment(spec);
    CHECK(model_min(spec, m).value() == Approx(sol->cost));
}

TEST_CASE("UC startup category follows the downtime") {
    UcSpec spec;
    Generator g;
    g.name = "g";
    g.pmin = 10;
    g.pmax = 20;
    g.slopes = {1};
    g.startup_costs = {10, 100};
    g.downtime_limits = {1};
    g.initial_status = 3;  // on for three periods before the horizon
    spec.generators = {g};
    // output at pmin carries no slope cost, so only starts are charged
    spec.demand = {10, 0, 10};
    auto sol = uc_oracle(spec);
    REQUIRE(sol);
    CHECK(sol->cost == Approx(10));
    CHECK(model_min(spec, gen_unit_commitment(spec)).value() == Approx(sol->cost));
    spec.demand = {10, 0, 0, 10};
    sol = uc_oracle(spec);
    REQUIRE(sol);
    CHECK(sol->cost == Approx(100));
    CHECK(model_min(spec, gen_unit_commitment(spec)).value() == Approx(sol->cost));
}

TEST_CASE("UC generation searches for a schedule and rejects specs without one") {
    // every unit on overshoots the low periods, so a real search is needed
    const UcSpec multi = random_uc_spec(2, 3, 1, 2, 5);
    const auto found = detail::uc_find_schedule(multi);
    REQUIRE(found);
    for (std::size_t g = 0; g < multi.G(); ++g) CHECK(detail::uc_commitment_ok(multi.generators[g], (*found)[g]));
    CHECK_NOTHROW(gen_unit_commitment(multi));

    // on, forced off, then a restart the two-period minimum down time forbids
    UcSpec stuck;
    Generator g;
    g.name = "g";
    g.pmin = 10;
    g.pmax = 30;
    g.slopes = {1};
    g.startup_costs = {5};
    g.min_down = 2;
    stuck.generators = {g};
    stuck.demand = {20, 0, 20};
    CHECK_FALSE(detail::uc_find_schedule(stuck));
    CHECK_THROWS_AS(gen_unit_commitment(stuck), InfeasibleSpecError);
    stuck.generators[0].min_down = 1;
    CHECK(detail::uc_find_schedule(stuck));

    // agrees with the oracle on whether any schedule exists
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        UcSpec spec = random_uc_spec(3, 4, 1, 1, seed);
        for (auto& gen : spec.generators) gen.min_down = 3;
        CHECK(detail::uc_find_schedule(spec).has_value() == uc_oracle(spec).has_value());
    }
}

TEST_CASE("UC demand above capacity is rejected") {
    UcSpec spec = random_uc_spec(2, 2, 1, 1, 4);
    spec.demand[0] = 1e6;
    CHECK_THROWS_AS(gen_unit_commitment(spec), InfeasibleSpecError);
    spec.demand.clear();
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    CHECK_THROWS_AS(uc_oracle(random_uc_spec(5, 2, 1, 1, 1)), SizeLimitError);
    CHECK_THROWS_AS(uc_oracle(random_uc_spec(2, 2, 1, 2, 1)), ValidationError);
}

TEST_CASE("UC fleet survives a JSON round trip") {
    const UcSpec spec = random_uc_spec(3, 4, 2, 2, 77);
    const UcSpec back = uc_spec_from_json(json::parse(to_json(spec).dump()));
    CHECK(to_json(back) == to_json(spec));
    CHECK(gen_unit_commitment(back) == gen_unit_commitment(spec));
    const UcSpec rnd = uc_spec_from_json(json::parse(R"({"random": {"G": 3, "T": 4, "S": 2, "segments": 2, "seed": 77}})"));
    CHECK(to_json(rnd) == to_json(spec));
    CHECK_THROWS_AS(uc_spec_from_json(json::parse(R"({"demand": [1]})")), ParseError);
}

TEST_CASE("UC model has the expected variable counts") {
    const UcSpec spec = random_uc_spec(3, 4, 2, 3, 8);
    const auto m = gen_unit_commitment(spec);
    CHECK(m.count(Vartype::BINARY) == 3 * 4 * (1 + 2));
    CHECK(m.count(Vartype::CONTINUOUS) == 3 * 4 * 3);
}
