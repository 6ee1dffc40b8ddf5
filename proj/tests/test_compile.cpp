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

#include <set>

#include "support.hpp"

using namespace hycqm;
using namespace hycqm::test;
using Catch::Approx;

namespace {

/// Masks over the model bits minimizing the penalized QUBO after minimizing
/// out the slack bits, by plain enumeration.
std::set<std::uint64_t> penalized_argmin(const CompiledQubo& cq) {
    const std::size_t n = cq.qubo.num_variables();
    const std::size_t nm = cq.num_model_variables;
    std::vector<double> best(std::size_t(1) << nm, std::numeric_limits<double>::infinity());
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
        const double e = qubo_energy(cq.qubo, mask_bits(mask, n));
        auto& slot = best[mask & ((std::uint64_t(1) << nm) - 1)];
        slot = std::min(slot, e);
    }
    const double lo = *std::min_element(best.begin(), best.end());
    std::set<std::uint64_t> out;
    for (std::uint64_t x = 0; x < best.size(); ++x) {
        if (best[x] <= lo + 1e-9 * std::max(1.0, std::abs(lo))) out.insert(x);
    }
    return out;
}

std::set<std::uint64_t> constrained_argmin(const ConstrainedModel& m) {
    const std::size_t n = m.num_variables();
    const auto best = constrained_min(m);
    std::set<std::uint64_t> out;
    if (!best) return out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
        const auto x = mask_values(mask, n);
        if (m.is_feasible(x) && m.objective_value(x) <= *best + 1e-9 * std::max(1.0, std::abs(*best))) out.insert(mask);
    }
    return out;
}

}  // namespace

TEST_CASE("qubo_to_ising preserves every energy and round-trips") {
    std::mt19937_64 gen(11);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 1 + t % 10;
        const QuboModel q = random_qubo(n, gen);
        const IsingModel m = qubo_to_ising(q);
        const QuboModel back = ising_to_qubo(m);
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
            const auto bits = mask_bits(mask, n);
            std::vector<double> s(n);
            for (std::size_t i = 0; i < n; ++i) s[i] = 2.0 * bits[i] - 1.0;
            const double e = qubo_energy(q, bits);
            CHECK(ising_energy(m, s) == Approx(e).margin(1e-9));
            CHECK(qubo_energy(back, bits) == Approx(e).margin(1e-12));
        }
    }
}

TEST_CASE("the transform maps x = (s + 1) / 2 coefficient by coefficient") {
    QuboModel q(2);
    q.set_linear(0, 2);
    q.set_linear(1, -1);
    q.add_quadratic(0, 1, 4);
    const IsingModel m = qubo_to_ising(q);
    CHECK(m.linear(0) == Approx(1 + 1));
    CHECK(m.linear(1) == Approx(-0.5 + 1));
    CHECK(m.quadratic(0, 1) == Approx(1));
    CHECK(m.offset() == Approx(1 - 0.5 + 1));
}

TEST_CASE("slack weights cover exactly 0..U") {
    for (std::int64_t u = 0; u <= 70; ++u) {
        const auto w = slack_weights(u);
        std::set<std::int64_t> sums;
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << w.size()); ++mask) {
            std::int64_t s = 0;
            for (std::size_t j = 0; j < w.size(); ++j) s += (mask >> j) & 1 ? w[j] : 0;
            sums.insert(s);
        }
        CHECK(static_cast<std::int64_t>(sums.size()) == u + 1);
        CHECK(*sums.begin() == 0);
        CHECK(*sums.rbegin() == u);
        const std::size_t bits = u == 0 ? 0 : static_cast<std::size_t>(std::ceil(std::log2(double(u + 1))));
        CHECK(w.size() == bits);
    }
}

TEST_CASE("encode_inequality: feasible exactly when some slack closes the equality") {
    std::mt19937_64 gen(5);
    std::uniform_int_distribution<int> coef(-4, 4);
    for (int t = 0; t < 40; ++t) {
        const std::size_t n = 5;
        ModelBuilder b;
        QuadraticExpr lhs;
        for (std::size_t i = 0; i < n; ++i) {
            b.add_binary("x" + std::to_string(i));
            lhs.add_linear("x" + std::to_string(i), coef(gen));
        }
        const Sense sense = t % 2 ? Sense::LE : Sense::GE;
        const ConstrainedModel dom = b.build();
        Constraint c{lhs, sense, static_cast<double>(coef(gen)), "c"};
        InequalityEncoding enc;
        try {
            enc = encode_inequality(c, dom);
        } catch (const InfeasibleConstraintError&) {
            // then no binary assignment satisfies c
            for (std::uint64_t mask = 0; mask < 32; ++mask) {
                std::map<std::string, double> a;
                for (std::size_t i = 0; i < n; ++i) a["x" + std::to_string(i)] = double((mask >> i) & 1);
                CHECK(violation(sense, evaluate(lhs, a), c.rhs) > 0);
            }
            continue;
        }
        const auto& ids = enc.slack.slack_ids;
        for (std::uint64_t mask = 0; mask < 32; ++mask) {
            std::map<std::string, double> a;
            for (std::size_t i = 0; i < n; ++i) a["x" + std::to_string(i)] = double((mask >> i) & 1);
            const bool feasible = violation(sense, evaluate(lhs, a), c.rhs) == 0;
            bool closable = false;
            for (std::uint64_t y = 0; y < (std::uint64_t(1) << ids.size()); ++y) {
                for (std::size_t j = 0; j < ids.size(); ++j) a[ids[j]] = double((y >> j) & 1);
                closable = closable || evaluate(enc.equality.lhs, a) == enc.equality.rhs;
            }
            CHECK(feasible == closable);
        }
    }
}

TEST_CASE("encode_inequality rejects what it cannot encode") {
    ModelBuilder b;
    b.add_binary("x").add_continuous("r", 0, 1);
    const ConstrainedModel dom = b.build();
    QuadraticExpr frac;
    frac.add_linear("x", 0.5);
    CHECK_THROWS_AS(encode_inequality({frac, Sense::LE, 1, "f"}, dom), UnsupportedEncodingError);
    QuadraticExpr cont;
    cont.add_linear("r", 1);
    CHECK_THROWS_AS(encode_inequality({cont, Sense::LE, 1, "r"}, dom), UnsupportedEncodingError);
    QuadraticExpr x;
    x.add_linear("x", 1);
    CHECK_THROWS_AS(encode_inequality({x, Sense::GE, 2, "g"}, dom), InfeasibleConstraintError);
    CHECK_THROWS_AS(encode_inequality({x, Sense::EQ, 1, "e"}, dom), ValidationError);
    const auto enc = encode_inequality({x, Sense::LE, 1, "tight"}, dom);
    CHECK(enc.slack.range == 1);
}

TEST_CASE("binarized integers decode back over the whole domain") {
    ModelBuilder b;
    b.add_integer("n", -3, 5).add_binary("z");
    QuadraticExpr obj;
    obj.add_linear("n", 2).add_quadratic("n", "z", -1).add_quadratic("n", "n", 0.5);
    b.set_objective(obj);
    QuadraticExpr lhs;
    lhs.add_linear("n", 1);
    b.add_constraint(lhs, Sense::LE, 4, "cap");
    const ConstrainedModel m = b.build();
    const BinarizedModel bin = binarize_integers(m);
    CHECK(bin.model.all_binary());
    const std::size_t n = bin.model.num_variables();
    std::set<double> seen;
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
        const auto xb = mask_values(mask, n);
        const auto x = bin.decode(xb);
        seen.insert(x[0]);
        CHECK(bin.model.objective_value(xb) == Approx(m.objective_value(x)).margin(1e-9));
        CHECK(bin.model.is_feasible(xb) == m.is_feasible(x));
    }
    CHECK(seen == std::set<double>{-3, -2, -1, 0, 1, 2, 3, 4, 5});
}

TEST_CASE("penalized QUBO equals the objective at feasible points and exceeds it elsewhere") {
    std::mt19937_64 gen(8);
    for (int t = 0; t < 20; ++t) {
        const ConstrainedModel m = random_blp(6, gen);
        const CompiledQubo cq = compile_penalties(m);
        const std::size_t n = cq.qubo.num_variables();
        for (std::uint64_t x = 0; x < 64; ++x) {
            double best = std::numeric_limits<double>::infinity();
            for (std::uint64_t y = 0; y < (std::uint64_t(1) << (n - 6)); ++y) {
                best = std::min(best, qubo_energy(cq.qubo, mask_bits(x | (y << 6), n)));
            }
            const auto xv = mask_values(x, 6);
            if (m.is_feasible(xv)) {
                CHECK(best == Approx(m.objective_value(xv)).margin(1e-9));
            } else {
                CHECK(best >= m.objective_value(xv) + cq.report.begin()->second.lambda * 0.999);
            }
        }
    }
}

TEST_CASE("auto multipliers keep the constrained argmin set") {
    std::mt19937_64 gen(21);
    int checked = 0;
    while (checked < 25) {
        const ConstrainedModel m = random_blp(7, gen);
        if (!constrained_min(m)) continue;
        ++checked;
        CHECK(penalized_argmin(compile_penalties(m)) == constrained_argmin(m));
    }
}

TEST_CASE("suggest_lambda never exceeds auto and keeps every argmin feasible") {
    std::mt19937_64 gen(4);
    int checked = 0;
    while (checked < 10) {
        const ConstrainedModel m = random_blp(6, gen);
        if (!constrained_min(m)) continue;
        ++checked;
        const auto sug = suggest_lambda(m);
        REQUIRE(sug.refined);
        PenaltyConfig cfg;
        cfg.lambdas = sug.lambdas;
        const CompiledQubo cq = compile_penalties(m, cfg);
        for (const auto& [label, e] : cq.report) {
            CHECK(e.lambda <= auto_lambda(m));
            CHECK(sug.report.at(label).rule == "bisection");
        }
        for (auto x : penalized_argmin(cq)) CHECK(m.is_feasible(mask_values(x, 6)));
    }
}

TEST_CASE("compile_penalties rejects non-binary models and bad multipliers") {
    ModelBuilder b;
    b.add_integer("n", 0, 3);
    CHECK_THROWS_AS(compile_penalties(b.build()), MustBinarizeError);
    std::mt19937_64 gen(1);
    const ConstrainedModel m = random_blp(4, gen);
    PenaltyConfig cfg;
    cfg.lambdas["c0"] = -1;
    CHECK_THROWS_AS(compile_penalties(m, cfg), ValidationError);
    cfg.lambdas["c0"] = 3;
    cfg.auto_lambda = false;
    if (m.num_constraints() > 1) CHECK_THROWS_AS(compile_penalties(m, cfg), ValidationError);
    const auto report = to_json(compile_penalties(m, PenaltyConfig{{{"c0", 3}}, true}).report);
    CHECK(report.at("c0").at("rule") == "user");
    CHECK(report.at("c0").at("lambda") == 3.0);
}

TEST_CASE("square-of-sum constraints compile through their linear surrogate") {
    for (std::size_t c : {0, 1, 3, 4, 9}) {
        const ConstrainedModel m = gen_blp_quadratic_constraint(5, c, 2);
        const auto sur = linear_surrogate(m.constraint(0), m);
        REQUIRE(sur);
        CHECK(sur->rhs == static_cast<double>(ceil_sqrt(c)));
        for (std::uint64_t mask = 0; mask < 32; ++mask) {
            const auto x = mask_values(mask, 5);
            double s = 0;
            for (double v : x) s += v;
            CHECK((s >= sur->rhs) == m.is_feasible(x));
        }
        const CompiledQubo cq = compile_penalties(m);
        CHECK(cq.unpenalized.empty());
        CHECK(penalized_argmin(cq) == constrained_argmin(m));
    }
}
