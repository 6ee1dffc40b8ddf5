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

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "hycqm/io.hpp"
#include "hycqm/model.hpp"
#include "hycqm/random.hpp"

namespace hycqm {

/// Pegasus coordinate (u, w, k, z): orientation u (0 vertical, 1
/// horizontal), perpendicular offset w in [0, m), qubit offset k in
/// [0, 12) and parallel offset z in [0, m - 1).
struct PegasusCoord {
    int u = 0, w = 0, k = 0, z = 0;
    friend bool operator==(const PegasusCoord&, const PegasusCoord&) = default;
};

/// Undirected hardware graph with a set of disabled qubits.
class HardwareGraph {
 public:
    using Edge = std::pair<std::size_t, std::size_t>;

    HardwareGraph() = default;
    HardwareGraph(std::string family, std::size_t m, std::size_t nodes, std::vector<Edge> edges)
            : family_(std::move(family)), m_(m), active_(nodes, 1), edges_(std::move(edges)) {
        start_.assign(nodes + 1, 0);
        for (auto [a, b] : edges_) {
            ++start_[a + 1];
            ++start_[b + 1];
        }
        for (std::size_t i = 0; i < nodes; ++i) start_[i + 1] += start_[i];
        nbr_.resize(start_.back());
        std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
        for (auto [a, b] : edges_) {
            nbr_[fill[a]++] = b;
            nbr_[fill[b]++] = a;
        }
    }

    const std::string& family() const { return family_; }
    std::size_t m() const { return m_; }
    std::size_t num_nodes() const { return active_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    /// neighbours regardless of defects
    std::span<const std::size_t> neighbors(std::size_t i) const {
        return {nbr_.data() + start_[i], nbr_.data() + start_[i + 1]};
    }
    bool active(std::size_t i) const { return active_[i] != 0; }
    const std::vector<std::size_t>& defects() const { return defects_; }
    std::size_t num_active() const { return num_nodes() - defects_.size(); }

    /// Degree among active nodes (0 for a defect).
    std::size_t degree(std::size_t i) const {
        if (!active(i)) return 0;
        std::size_t d = 0;
        for (std::size_t j : neighbors(i)) d += active_[j];
        return d;
    }

    std::size_t max_degree() const {
        std::size_t d = 0;
        for (std::size_t i = 0; i < num_nodes(); ++i) d = std::max(d, degree(i));
        return d;
    }

    std::size_t num_active_edges() const {
        return static_cast<std::size_t>(
            std::count_if(edges_.begin(), edges_.end(), [&](const Edge& e) { return active(e.first) && active(e.second); }));
    }

    bool has_edge(std::size_t a, std::size_t b) const {
        auto nb = neighbors(a);
        return std::find(nb.begin(), nb.end(), b) != nb.end();
    }

    void disable(std::vector<std::size_t> nodes) {
        for (std::size_t i : nodes) {
            if (i >= num_nodes()) throw ValidationError("defect outside the graph");
            active_[i] = 0;
        }
        defects_.clear();
        for (std::size_t i = 0; i < num_nodes(); ++i) {
            if (!active_[i]) defects_.push_back(i);
        }
    }

 private:
    std::string family_;
    std::size_t m_ = 0;
    std::vector<std::uint8_t> active_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> start_;
    std::vector<std::size_t> nbr_;
    std::vector<std::size_t> defects_;
};

// ---------------------------------------------------------------------------
// Pegasus
// ---------------------------------------------------------------------------

inline std::size_t pegasus_node_count(std::size_t m) { return 24 * m * (m - 1); }

/// External (z, z+1), odd (2j, 2j+1) and internal couplers.
inline std::size_t pegasus_edge_count(std::size_t m) {
    return 24 * m * (m - 2) + 12 * m * (m - 1) + 144 * (m - 1) * (m - 1);
}

inline std::size_t pegasus_index(std::size_t m, const PegasusCoord& c) {
    return ((static_cast<std::size_t>(c.u) * m + static_cast<std::size_t>(c.w)) * 12 + static_cast<std::size_t>(c.k)) *
               (m - 1) +
           static_cast<std::size_t>(c.z);
}

inline PegasusCoord pegasus_coord(std::size_t m, std::size_t i) {
    PegasusCoord c;
    c.z = static_cast<int>(i % (m - 1));
    i /= m - 1;
    c.k = static_cast<int>(i % 12);
    i /= 12;
    c.w = static_cast<int>(i % m);
    c.u = static_cast<int>(i / m);
    return c;
}

/// Full Pegasus P_m (every coordinate, no fabric trimming) with
/// round(defect_rate * nodes) qubits disabled, drawn without replacement.
inline HardwareGraph build_pegasus(std::size_t m, double defect_rate = 0.0, std::uint64_t seed = kDefaultSeed) {
    if (m < 2) throw ValidationError("Pegasus needs m >= 2");
    if (!(defect_rate >= 0 && defect_rate < 1)) throw ValidationError("defect rate must lie in [0, 1)");
    // vertical and horizontal offsets of each qubit index k
    static constexpr std::array<int, 12> off0{2, 2, 2, 2, 10, 10, 10, 10, 6, 6, 6, 6};
    static constexpr std::array<int, 12> off1{6, 6, 6, 6, 2, 2, 2, 2, 10, 10, 10, 10};
    const int mi = static_cast<int>(m);
    auto idx = [&](int u, int w, int k, int z) { return pegasus_index(m, {u, w, k, z}); };

    std::vector<HardwareGraph::Edge> edges;
    edges.reserve(pegasus_edge_count(m));
    for (int u = 0; u < 2; ++u) {
        for (int w = 0; w < mi; ++w) {
            for (int k = 0; k < 12; ++k) {
                for (int z = 0; z + 1 < mi - 1; ++z) edges.emplace_back(idx(u, w, k, z), idx(u, w, k, z + 1));
            }
            for (int k = 0; k < 12; k += 2) {
                for (int z = 0; z < mi - 1; ++z) edges.emplace_back(idx(u, w, k, z), idx(u, w, k + 1, z));
            }
        }
    }
    for (int w = 0; w < mi; ++w) {
        for (int kk = 0; kk < 12; ++kk) {
            const int k_lo = w ? 0 : off1[kk];
            const int k_hi = w < mi - 1 ? 12 : off1[kk];
            for (int k = k_lo; k < k_hi; ++k) {
                for (int z = 0; z < mi - 1; ++z) {
                    edges.emplace_back(idx(0, w, k, z), idx(1, z + (kk < off0[k]), kk, w - (k < off1[kk])));
                }
            }
        }
    }
    HardwareGraph g("pegasus", m, pegasus_node_count(m), std::move(edges));

    const auto count = static_cast<std::size_t>(std::llround(defect_rate * static_cast<double>(g.num_nodes())));
    if (count > 0) {
        std::vector<std::size_t> pool(g.num_nodes());
        std::iota(pool.begin(), pool.end(), 0);
        Rng rng(seed);
        for (std::size_t t = 0; t < count; ++t) std::swap(pool[t], pool[t + rng.below(pool.size() - t)]);
        pool.resize(count);
        g.disable(std::move(pool));
    }
    return g;
}

inline json graph_stats(const HardwareGraph& g) {
    return json{{"family", g.family()},
                {"m", g.m()},
                {"nodes", g.num_nodes()},
                {"edges", g.edges().size()},
                {"defects", g.defects().size()},
                {"active_nodes", g.num_active()},
                {"active_edges", g.num_active_edges()},
                {"max_degree", g.max_degree()}};
}

// ---------------------------------------------------------------------------
// Clique embedding
// ---------------------------------------------------------------------------

struct Embedding {
    /// chains[v]: physical qubits of logical variable v
    std::vector<std::vector<std::size_t>> chains;
    double chain_strength = 1.0;

    std::size_t num_qubits() const {
        std::size_t n = 0;
        for (const auto& c : chains) n += c.size();
        return n;
    }
    std::size_t max_chain_length() const {
        std::size_t n = 0;
        for (const auto& c : chains) n = std::max(n, c.size());
        return n;
    }
};

/// 1.5 x the largest |coefficient| of the model being embedded.
template <Domain D>
double default_chain_strength(const QuadraticModel<D>& m) {
    return 1.5 * m.max_abs_bias();
}

/// Empty when `e` is a valid embedding of the logical edges into `g`:
/// chains non-empty, on active qubits, vertex-disjoint and connected, and
/// each logical edge has a coupler between its two chains. Otherwise the
/// first problem found.
inline std::string embedding_problem(const Embedding& e, const HardwareGraph& g,
                                     const std::vector<std::pair<std::size_t, std::size_t>>& logical_edges) {
    std::vector<std::int64_t> owner(g.num_nodes(), -1);
    for (std::size_t v = 0; v < e.chains.size(); ++v) {
        const auto& chain = e.chains[v];
        if (chain.empty()) return "chain " + std::to_string(v) + " is empty";
        for (std::size_t q : chain) {
            if (q >= g.num_nodes() || !g.active(q)) return "chain " + std::to_string(v) + " uses an inactive qubit";
            if (owner[q] >= 0) return "chains " + std::to_string(owner[q]) + " and " + std::to_string(v) + " overlap";
            owner[q] = static_cast<std::int64_t>(v);
        }
        // connectivity inside the chain
        std::vector<std::size_t> stack{chain.front()};
        std::vector<std::uint8_t> seen(g.num_nodes(), 0);
        seen[chain.front()] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            const std::size_t q = stack.back();
            stack.pop_back();
            for (std::size_t r : g.neighbors(q)) {
                if (!seen[r] && owner[r] == static_cast<std::int64_t>(v)) {
                    seen[r] = 1;
                    ++reached;
                    stack.push_back(r);
                }
            }
        }
        if (reached != chain.size()) return "chain " + std::to_string(v) + " is not connected";
    }
    for (auto [a, b] : logical_edges) {
        if (a >= e.chains.size() || b >= e.chains.size()) return "logical edge outside the embedding";
        bool coupled = false;
        for (std::size_t q : e.chains[a]) {
            for (std::size_t r : g.neighbors(q)) coupled = coupled || owner[r] == static_cast<std::int64_t>(b);
        }
        if (!coupled) return "no coupler between chains " + std::to_string(a) + " and " + std::to_string(b);
    }
    return {};
}

inline std::vector<std::pair<std::size_t, std::size_t>> clique_edges(std::size_t k) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) out.emplace_back(a, b);
    }
    return out;
}

/// Greedy chain growth: chain v starts at the free qubit nearest to chain 0
/// (the highest-degree free qubit for v = 0) and is extended by shortest
/// paths through free qubits until it touches every earlier chain. Returns
/// nothing when a path cannot be found; a returned embedding has passed
/// embedding_problem.
inline std::optional<Embedding> embed_clique(std::size_t k, const HardwareGraph& g, double chain_strength = 1.0) {
    if (k < 1) throw ValidationError("clique size must be at least 1");
    const std::size_t n = g.num_nodes();
    constexpr std::int64_t kFree = -1;
    std::vector<std::int64_t> owner(n, kFree);
    Embedding e;
    e.chain_strength = chain_strength;

    // BFS over free qubits from the given sources; parent links for paths
    std::vector<std::int64_t> parent(n);
    auto bfs_until = [&](const std::vector<std::size_t>& sources, auto&& is_goal) -> std::optional<std::size_t> {
        std::fill(parent.begin(), parent.end(), -2);
        std::queue<std::size_t> q;
        for (std::size_t s : sources) {
            parent[s] = -1;
            q.push(s);
        }
        while (!q.empty()) {
            const std::size_t a = q.front();
            q.pop();
            for (std::size_t b : g.neighbors(a)) {
                if (!g.active(b) || parent[b] != -2) continue;
                if (is_goal(b)) {
                    parent[b] = static_cast<std::int64_t>(a);
                    return b;
                }
                if (owner[b] != kFree) continue;
                parent[b] = static_cast<std::int64_t>(a);
                q.push(b);
            }
        }
        return std::nullopt;
    };

    for (std::size_t v = 0; v < k; ++v) {
        std::vector<std::size_t> chain;
        if (v == 0) {
            std::size_t best = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (g.active(i) && (best == n || g.degree(i) > g.degree(best))) best = i;
            }
            if (best == n) return std::nullopt;
            chain.push_back(best);
        } else {
            const auto root = bfs_until(e.chains[0], [&](std::size_t b) { return owner[b] == kFree; });
            if (!root) return std::nullopt;
            chain.push_back(*root);
        }
        owner[chain[0]] = static_cast<std::int64_t>(v);
        for (std::size_t c = 0; c < v; ++c) {
            const bool touching = std::any_of(chain.begin(), chain.end(), [&](std::size_t q) {
                auto nb = g.neighbors(q);
                return std::any_of(nb.begin(), nb.end(), [&](std::size_t r) { return owner[r] == static_cast<std::int64_t>(c); });
            });
            if (touching) continue;
            const auto hit = bfs_until(chain, [&](std::size_t b) { return owner[b] == static_cast<std::int64_t>(c); });
            if (!hit) return std::nullopt;
            // walk back from the qubit before the hit to the chain
            for (auto a = parent[*hit]; a >= 0 && owner[static_cast<std::size_t>(a)] == kFree;
                 a = parent[static_cast<std::size_t>(a)]) {
                owner[static_cast<std::size_t>(a)] = static_cast<std::int64_t>(v);
                chain.push_back(static_cast<std::size_t>(a));
            }
        }
        e.chains.push_back(std::move(chain));
    }
    if (!embedding_problem(e, g, clique_edges(k)).empty()) return std::nullopt;
    return e;
}

}  // namespace hycqm
