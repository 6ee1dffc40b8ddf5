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


// Usage example: build a small knapsack-style model by hand, look at its
// penalized QUBO, then solve a generated cardinality problem with the
// hybrid solver and compare against the sort oracle.

#include <iostream>

#include "hycqm/hycqm.hpp"

int main() {
    using namespace hycqm;

    ModelBuilder b;
    for (const char* id : {"a", "b", "c", "d"}) b.add_binary(id);
    QuadraticExpr value;
    value.add_linear("a", -5).add_linear("b", -4).add_linear("c", -3).add_linear("d", -2).add_quadratic("a", "c", 1);
    b.set_objective(value);
    QuadraticExpr weight;
    weight.add_linear("a", 4).add_linear("b", 3).add_linear("c", 2).add_linear("d", 1);
    b.add_constraint(weight, Sense::LE, 6, "weight");
    const ConstrainedModel knap = b.build();

    const CompiledQubo cq = compile_penalties(knap);
    std::cout << "knapsack: " << knap.num_variables() << " variables, QUBO with " << cq.qubo.num_variables()
              << " binaries (" << cq.slacks.front().weights.size() << " slack), lambda "
              << cq.report.at("weight").lambda << '\n';

    const SampleSet exact = brute_force(knap);
    std::cout << "knapsack optimum " << exact.first().energy << " at";
    for (std::size_t i = 0; i < knap.num_variables(); ++i) {
        std::cout << ' ' << exact.labels()->names()[i] << '=' << exact.first().assignment.values()[i];
    }
    std::cout << '\n';

    const BlpSpec spec{500, 50, kDefaultSeed, 0};
    HybridConfig cfg;
    cfg.seed = 1;
    const HybridReport report = hybrid_solve(gen_blp(spec), cfg);
    const auto best = select_best_feasible(report.sampleset);
    std::cout << "blp N=500 C=50: hybrid " << (best ? best->energy : 0.0) << ", oracle " << blp_oracle(spec) << ", "
              << report.feasible_count << '/' << report.sampleset.size() << " samples feasible, "
              << report.log.size() << " log entries\n";
    return best ? 0 : 1;
}
