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

#include <array>

#include "support.hpp"

using namespace hycqm;
using Catch::Approx;

namespace {

// Reference optimum of a 3-variable LP: every vertex is the solution of
// three active constraints (rows or bounds) taken as equalities; keep the
// best feasible one. Cramer's rule, no pivoting.
struct Plane {
    std::array<double, 3> a;
    double b;
};

double det3(const std::array<std::array<double, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

bool feasible(const LpProblem& p, const std::array<double, 3>& x) {
    for (std::size_t j = 0; j < 3; ++j) {
        if (x[j] < p.lower[j] - 1e-7 || x[j] > p.upper[j] + 1e-7) return false;
    }
    for (const auto& r : p.rows) {
        double s = 0;
        for (auto [j, a] : r.coeffs) s += a * x[j];
        if (violation(r.sense, s, r.rhs) > 1e-7) return false;
    }
    return true;
}

std::optional<double> vertex_optimum(const LpProblem& p) {
    std::vector<Plane> planes;
    for (std::size_t j = 0; j < 3; ++j) {
        std::array<double, 3> e{0, 0, 0};
        e[j] = 1;
        planes.push_back({e, p.lower[j]});
        planes.push_back({e, p.upper[j]});
    }
    for (const auto& r : p.rows) {
        std::array<double, 3> a{0, 0, 0};
        for (auto [j, c] : r.coeffs) a[j] += c;
        planes.push_back({a, r.rhs});
    }
    std::optional<double> best;
    for (std::size_t i = 0; i < planes.size(); ++i) {
        for (std::size_t j = i + 1; j < planes.size(); ++j) {
            for (std::size_t k = j + 1; k < planes.size(); ++k) {
                std::array<std::array<double, 3>, 3> m{planes[i].a, planes[j].a, planes[k].a};
                const double d = det3(m);
                if (std::abs(d) < 1e-9) continue;
                std::array<double, 3> x{};
                for (std::size_t c = 0; c < 3; ++c) {
                    auto mc = m;
                    mc[0][c] = planes[i].b;
                    mc[1][c] = planes[j].b;
                    mc[2][c] = planes[k].b;
                    x[c] = det3(mc) / d;
                }
                if (!feasible(p, x)) continue;
                const double v = p.cost[0] * x[0] + p.cost[1] * x[1] + p.cost[2] * x[2];
                if (!best || v < *best) best = v;
            }
        }
    }
    return best;
}

}  // namespace

TEST_CASE("solve_lp matches vertex enumeration on random 3-variable LPs") {
    std::mt19937_64 gen(17);
    std::uniform_int_distribution<int> c(-5, 5);
    std::uniform_int_distribution<int> s(0, 2);
    int optimal = 0, infeasible = 0;
    for (int t = 0; t < 300; ++t) {
        LpProblem p;
        p.cost = {double(c(gen)), double(c(gen)), double(c(gen))};
        for (int j = 0; j < 3; ++j) {
            const double lo = c(gen);
            p.lower.push_back(lo);
            p.upper.push_back(lo + 1 + std::abs(c(gen)));
        }
        const int rows = 1 + t % 3;
        for (int r = 0; r < rows; ++r) {
            LpProblem::Row row;
            for (std::size_t j = 0; j < 3; ++j) row.coeffs.emplace_back(j, double(c(gen)));
            row.sense = static_cast<Sense>(s(gen));
            row.rhs = c(gen);
            p.rows.push_back(row);
        }
        const auto ref = vertex_optimum(p);
        const LpResult got = solve_lp(p);
        if (!ref) {
            CHECK(got.status == LpStatus::INFEASIBLE);
            ++infeasible;
            continue;
        }
        REQUIRE(got.status == LpStatus::OPTIMAL);
        ++optimal;
        CHECK(got.objective == Approx(*ref).margin(1e-7));
        CHECK(feasible(p, {got.x[0], got.x[1], got.x[2]}));
    }
    CHECK(optimal > 50);
    CHECK(infeasible > 5);
}

TEST_CASE("solve_lp handles fixed variables and crossed bounds") {
    LpProblem p;
    p.cost = {1, -1};
    p.lower = {2, 0};
    p.upper = {2, 3};
    p.rows.push_back({{{0, 1}, {1, 1}}, Sense::LE, 4});
    const auto r = solve_lp(p);
    REQUIRE(r.status == LpStatus::OPTIMAL);
    CHECK(r.x[0] == Approx(2));
    CHECK(r.x[1] == Approx(2));
    CHECK(r.objective == Approx(0));
    p.lower[0] = 3;
    CHECK(solve_lp(p).status == LpStatus::INFEASIBLE);
}

TEST_CASE("ContinuousPart dispatches a linear continuous part exactly") {
    // two plants, costs 3 and 5 per unit, demand 7 - 2 z where z is binary
    ModelBuilder b;
    b.add_binary("z").add_continuous("p1", 0, 4).add_continuous("p2", 0, 10);
    QuadraticExpr obj;
    obj.add_linear("p1", 3).add_linear("p2", 5).add_linear("z", 1);
    b.set_objective(obj);
    QuadraticExpr bal;
    bal.add_linear("p1", 1).add_linear("p2", 1).add_linear("z", 2);
    b.add_constraint(bal, Sense::EQ, 7, "balance");
    const ConstrainedModel m = b.build();
    const ContinuousPart part(m);
    CHECK(part.objective_linear());
    CHECK(part.rows() == std::vector<std::size_t>{0});

    std::vector<double> x{0, 0, 0};
    CHECK(part.optimize(x, std::numeric_limits<double>::infinity()) == 0.0);
    CHECK(x[1] == Approx(4));
    CHECK(x[2] == Approx(3));
    x = {1, 0, 0};
    part.optimize(x, std::numeric_limits<double>::infinity());
    CHECK(x[1] == Approx(4));
    CHECK(x[2] == Approx(1));
    CHECK(m.is_feasible(x));
}

TEST_CASE("ContinuousPart elastic mode leaves the smallest violation it can") {
    ModelBuilder b;
    b.add_continuous("p", 0, 2);
    QuadraticExpr obj;
    obj.add_linear("p", 1);
    b.set_objective(obj);
    QuadraticExpr lhs;
    lhs.add_linear("p", 1);
    b.add_constraint(lhs, Sense::GE, 5, "need");
    const ConstrainedModel m = b.build();
    const ContinuousPart part(m);
    std::vector<double> x{0};
    CHECK(std::isinf(part.optimize(x, std::numeric_limits<double>::infinity())));
    x = {0};
    CHECK(part.optimize(x, 100.0) == Approx(3));
    CHECK(x[0] == Approx(2));
}

TEST_CASE("ContinuousPart coordinate descent reaches the clipped separable minimizer") {
    // (r - 0.3)^2 + (q + 2)^2 on r in [0, 1], q in [-1, 1] -> r = 0.3, q = -1
    ModelBuilder b;
    b.add_continuous("r", 0, 1).add_continuous("q", -1, 1);
    QuadraticExpr obj(0.09 + 4);
    obj.add_quadratic("r", "r", 1).add_linear("r", -0.6).add_quadratic("q", "q", 1).add_linear("q", 4);
    b.set_objective(obj);
    const ConstrainedModel m = b.build();
    const ContinuousPart part(m);
    CHECK_FALSE(part.objective_linear());
    std::vector<double> x{1, 1};
    part.optimize(x, 0);
    CHECK(x[0] == Approx(0.3).margin(1e-9));
    CHECK(x[1] == Approx(-1).margin(1e-9));
}

TEST_CASE("ContinuousPart refuses products of two continuous variables in constraints") {
    ModelBuilder b;
    b.add_continuous("r", 0, 1).add_continuous("q", 0, 1);
    QuadraticExpr lhs;
    lhs.add_quadratic("r", "q", 1);
    b.add_constraint(lhs, Sense::LE, 0.5, "bilinear");
    const ConstrainedModel m = b.build();
    CHECK_THROWS_AS(ContinuousPart(m), UnsupportedEncodingError);
}
