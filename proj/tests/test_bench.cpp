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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace hycqm;
using Catch::Approx;

namespace {

BenchPlan small_plan() {
    return plan_from_json(json::parse(R"({
        "repeats": 3,
        "cells": [
            {"family": "blp", "N": 30, "C": 6, "solver": "hybrid", "params": {"sampleset_size": 8}},
            {"family": "bqp", "N": 12, "C": 3, "solver": "sa", "params": {"reads": 20, "sweeps": 200}},
            {"family": "uc", "N": 2, "C": 2, "k": 1, "solver": "exact"}
        ]})"));
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// objective and feasible columns of records.csv
std::string objective_columns(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
        std::vector<std::string> f;
        std::istringstream cells(line);
        for (std::string c; std::getline(cells, c, ',');) f.push_back(c);
        out += f.at(5) + ',' + f.at(6) + ',' + f.at(7) + '\n';
    }
    return out;
}

}  // namespace

TEST_CASE("plan parsing and validation") {
    const BenchPlan p = small_plan();
    CHECK(p.cells.size() == 3);
    CHECK(p.resolved_seeds() == std::vector<std::uint64_t>{123, 124, 125});
    CHECK(plan_from_json(to_json(p)).resolved_seeds() == p.resolved_seeds());
    CHECK_THROWS_AS(plan_from_json(json::parse(R"({"cells": []})")), ValidationError);
    CHECK_THROWS_AS(plan_from_json(json::parse(R"({"cells": [{"family": "tsp"}]})")), ValidationError);
    CHECK_THROWS_AS(plan_from_json(json::parse(R"({"repeats": 2, "seeds": [1], "cells": [{"family": "blp"}]})")),
                    ValidationError);
    CHECK_THROWS_AS(plan_from_json(json::parse(R"({"cells": [{"N": 3}]})")), ParseError);
}

TEST_CASE("bench records, aggregates and outputs") {
    const BenchPlan plan = small_plan();
    Stopwatch total;
    const auto records = run_plan(plan);
    const double elapsed = total.seconds();
    REQUIRE(records.size() == 9);

    double timed = 0;
    for (const auto& r : records) {
        INFO(r.error);
        CHECK(r.error.empty());
        CHECK(r.feasible());
        CHECK(r.oracle.has_value());
        CHECK(*r.objective >= *r.oracle - 1e-9 * std::max(1.0, std::abs(*r.oracle)));
        CHECK(r.select_time_s > 0);
        timed += r.wall_time_s + r.select_time_s;
    }
    CHECK(timed <= elapsed);
    // exact enumeration reaches the oracle
    for (std::size_t i = 6; i < 9; ++i) CHECK(*records[i].objective == Approx(*records[i].oracle).epsilon(1e-9));

    const auto aggs = aggregate(records);
    REQUIRE(aggs.size() == 3);
    for (std::size_t c = 0; c < 3; ++c) {
        double sum = 0, lo = 1e300, hi = -1e300, tsum = 0, gsum = 0;
        for (std::size_t r = 0; r < 3; ++r) {
            const auto& rec = records[c * 3 + r];
            sum += *rec.objective;
            lo = std::min(lo, *rec.objective);
            hi = std::max(hi, *rec.objective);
            tsum += rec.wall_time_s;
            gsum += (*rec.objective - *rec.oracle) / std::abs(*rec.oracle);
        }
        CHECK(aggs[c].runs == 3);
        CHECK(*aggs[c].obj_mean == Approx(sum / 3).epsilon(1e-12));
        CHECK(*aggs[c].obj_min == lo);
        CHECK(*aggs[c].obj_max == hi);
        CHECK(*aggs[c].time_mean == Approx(tsum / 3).epsilon(1e-12));
        CHECK(*aggs[c].gap_to_oracle == Approx(gsum / 3).margin(1e-12));
    }

    const auto csv = records_csv(records);
    const auto back = parse_records_csv(csv);
    REQUIRE(back.size() == records.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].objective == records[i].objective);
        CHECK(back[i].wall_time_s == records[i].wall_time_s);
        CHECK(back[i].seed == records[i].seed);
    }
    CHECK_THROWS_AS(parse_records_csv("nope\n"), ParseError);
    CHECK_THROWS_AS(parse_records_csv(std::string(kRecordsHeader) + "\nblp,1,2\n"), ParseError);

    const auto dir = std::filesystem::temp_directory_path() / "hycqm_test_bench";
    std::filesystem::remove_all(dir);
    emit(records, dir);
    for (const auto& f : bench_files()) CHECK(std::filesystem::exists(dir / f));
    CHECK(slurp(dir / "records.csv") == csv);
    const json results = json::parse(slurp(dir / "results.json"));
    CHECK(results.at("records").size() == 9);
    CHECK(results.at("aggregate").size() == 3);
    CHECK(slurp(dir / "aggregate.csv").rfind(std::string(kAggregateHeader), 0) == 0);
    std::filesystem::remove_all(dir);

    // objective columns do not depend on timing
    CHECK(objective_columns(records_csv(run_plan(plan, 2))) == objective_columns(csv));
}

TEST_CASE("a failing cell becomes an error record") {
    BenchPlan plan;
    plan.repeats = 1;
    plan.cells.push_back({"blp-k", 12, 3, 2, "hybrid", json::object()});
    const auto records = run_plan(plan);
    REQUIRE(records.size() == 1);
    CHECK_FALSE(records[0].error.empty());
    CHECK_FALSE(records[0].feasible());
    const auto aggs = aggregate(records);
    CHECK_FALSE(aggs[0].obj_mean.has_value());
    CHECK_FALSE(aggs[0].time_mean.has_value());
    CHECK(aggregate_csv(aggs).find("none") != std::string::npos);
    CHECK_THROWS_AS(aggregate({}), ValidationError);
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, 1.0 / 3, 123456.789, 1e-300, -2.5}) CHECK(std::stod(format_number(v)) == v);
    CHECK(format_number(2) == "2");
    CHECK(format_optional(std::nullopt) == "none");
}

TEST_CASE("solve_model dispatches by name") {
    const auto m = gen_bqp({10, 3, 4});
    const double opt = bqp_oracle({10, 3, 4});
    CHECK(solve_model(m, "exact", json::object(), 1).first().energy == Approx(opt));
    for (const char* s : {"sa", "sqa", "tabu"}) {
        const auto ss = solve_model(m, s, json{{"reads", 20}}, 5);
        CHECK(ss.size() == 20);
        for (const auto& smp : ss) CHECK(smp.feasible == m.is_feasible(smp.assignment.values()));
    }
    CHECK_THROWS_AS(solve_model(m, "qpu", json::object(), 1), ValidationError);
    CHECK_THROWS_AS(hybrid_config_from_json(json::array()), ParseError);
    CHECK(hybrid_config_from_json(json{{"subsolver", "tabu"}}).subsolver == Subsolver::TABU);
    CHECK_THROWS_AS(hybrid_config_from_json(json{{"timelimit", 5}}), ParseError);
    CHECK_THROWS_AS(solve_model(m, "sa", json{{"num_reads", 5}}, 1), ParseError);
}
