// Copyright 2026-present the soledge project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "soledge/scheduler.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace soledge {

namespace {

// Two placements whose objectives differ by less than this are considered
// equal by the local search, so it cannot cycle on rounding noise.
constexpr double kImprovementEps = 1e-12;

// internal form: services[i] lives on nodes[assign[i]] (node index, not id)
using Assign = std::vector<std::size_t>;

std::vector<std::size_t> nodes_by_id(const PlacementProblem& p) {
    std::vector<std::size_t> order(p.nodes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return p.nodes[a].id < p.nodes[b].id; });
    return order;
}

// node's electrical level under its hosted services: largest contribution in
// watts, floored at Idle
LoadLevel node_level(const Node& node, const PlacementProblem& p, const Assign& assign,
                     std::size_t node_idx) {
    LoadLevel level = LoadLevel::idle();
    double watts = node_power_w(node.profile, level);
    for (std::size_t s = 0; s < assign.size(); ++s) {
        if (assign[s] != node_idx) {
            continue;
        }
        double w = node_power_w(node.profile, p.services[s].load_contribution);
        if (w > watts) {
            watts = w;
            level = p.services[s].load_contribution;
        }
    }
    return level;
}

double objective_unchecked(const PlacementProblem& p, const Assign& assign) {
    if (p.services.empty()) {
        return 0.0;
    }
    std::vector<NodePowerProfile> profiles;
    std::vector<LoadLevel> levels;
    for (std::size_t n = 0; n < p.nodes.size(); ++n) {
        bool hosting = std::find(assign.begin(), assign.end(), n) != assign.end();
        if (!hosting && p.nodes[n].role != NodeRole::Master) {
            continue;  // empty worker is off
        }
        profiles.push_back(p.nodes[n].profile);
        levels.push_back(node_level(p.nodes[n], p, assign, n));
    }
    return cluster_bus_power(profiles, levels, p.converter).bus_w;
}

struct Usage {
    std::vector<int> cpu;
    std::vector<int> mem;
};

Usage usage_of(const PlacementProblem& p, const Assign& assign) {
    Usage u{std::vector<int>(p.nodes.size(), 0), std::vector<int>(p.nodes.size(), 0)};
    for (std::size_t s = 0; s < assign.size(); ++s) {
        u.cpu[assign[s]] += p.services[s].cpu_millicores;
        u.mem[assign[s]] += p.services[s].mem_mb;
    }
    return u;
}

bool fits(const PlacementProblem& p, const Usage& u, std::size_t node_idx, int cpu, int mem) {
    return u.cpu[node_idx] + cpu <= p.nodes[node_idx].cpu_capacity_millicores &&
           u.mem[node_idx] + mem <= p.nodes[node_idx].mem_capacity_mb;
}

Assign to_indices(const PlacementProblem& p, const Placement& placement) {
    std::unordered_map<int, std::size_t> by_id;
    for (std::size_t n = 0; n < p.nodes.size(); ++n) {
        by_id[p.nodes[n].id] = n;
    }
    Assign assign(p.services.size());
    for (std::size_t s = 0; s < p.services.size(); ++s) {
        auto it = placement.assignment.find(p.services[s].name);
        if (it == placement.assignment.end()) {
            throw std::invalid_argument("service '" + p.services[s].name + "' is not assigned");
        }
        auto node = by_id.find(it->second);
        if (node == by_id.end()) {
            throw std::invalid_argument("service '" + p.services[s].name +
                                        "' assigned to unknown node id " +
                                        std::to_string(it->second));
        }
        assign[s] = node->second;
    }
    return assign;
}

Placement to_placement(const PlacementProblem& p, const Assign& assign) {
    Placement out;
    for (std::size_t s = 0; s < assign.size(); ++s) {
        out.assignment[p.services[s].name] = p.nodes[assign[s]].id;
    }
    out.objective_w = objective_unchecked(p, assign);
    return out;
}

}  // namespace

void check_problem(const PlacementProblem& problem) {
    if (problem.nodes.empty()) {
        throw std::invalid_argument("placement problem needs at least one node");
    }
    std::set<int> ids;
    int masters = 0;
    for (const Node& n : problem.nodes) {
        if (!ids.insert(n.id).second) {
            throw std::invalid_argument("duplicate node id " + std::to_string(n.id));
        }
        if (n.role == NodeRole::Master) {
            ++masters;
        }
        if (n.cpu_capacity_millicores <= 0 || n.mem_capacity_mb <= 0) {
            throw std::invalid_argument("node " + std::to_string(n.id) +
                                        " capacities must be positive");
        }
    }
    if (masters > 1) {
        throw std::invalid_argument("at most one Master node allowed, got " +
                                    std::to_string(masters));
    }
    std::set<std::string> names;
    for (const ServiceSpec& s : problem.services) {
        if (s.name.empty()) {
            throw std::invalid_argument("service names must be non-empty");
        }
        if (!names.insert(s.name).second) {
            throw std::invalid_argument("duplicate service name '" + s.name + "'");
        }
        if (s.cpu_millicores <= 0 || s.mem_mb <= 0) {
            throw std::invalid_argument("service '" + s.name +
                                        "' demands must be positive");
        }
    }
    if (!(problem.converter.efficiency > 0.0 && problem.converter.efficiency <= 1.0)) {
        throw std::invalid_argument("converter efficiency must be in (0, 1]");
    }
}

void check_placement(const PlacementProblem& problem, const Placement& placement) {
    check_problem(problem);
    if (placement.assignment.size() != problem.services.size()) {
        throw std::invalid_argument("placement assigns " +
                                    std::to_string(placement.assignment.size()) +
                                    " services, problem has " +
                                    std::to_string(problem.services.size()));
    }
    Assign assign = to_indices(problem, placement);
    Usage u = usage_of(problem, assign);
    for (std::size_t n = 0; n < problem.nodes.size(); ++n) {
        if (u.cpu[n] > problem.nodes[n].cpu_capacity_millicores) {
            throw std::invalid_argument(
                "node " + std::to_string(problem.nodes[n].id) + " cpu over capacity: " +
                std::to_string(u.cpu[n]) + " > " +
                std::to_string(problem.nodes[n].cpu_capacity_millicores) + " millicores");
        }
        if (u.mem[n] > problem.nodes[n].mem_capacity_mb) {
            throw std::invalid_argument(
                "node " + std::to_string(problem.nodes[n].id) + " memory over capacity: " +
                std::to_string(u.mem[n]) + " > " +
                std::to_string(problem.nodes[n].mem_capacity_mb) + " MB");
        }
    }
}

double objective_w(const PlacementProblem& problem, const Placement& placement) {
    check_placement(problem, placement);
    return objective_unchecked(problem, to_indices(problem, placement));
}

Placement greedy_place(const PlacementProblem& problem) {
    check_problem(problem);
    if (problem.services.empty()) {
        return Placement{};
    }

    auto order = nodes_by_id(problem);
    std::vector<bool> active(problem.nodes.size(), false);
    for (std::size_t n = 0; n < problem.nodes.size(); ++n) {
        active[n] = problem.nodes[n].role == NodeRole::Master;  // active by policy
    }

    std::vector<std::size_t> svc(problem.services.size());
    std::iota(svc.begin(), svc.end(), std::size_t{0});
    std::stable_sort(svc.begin(), svc.end(), [&](std::size_t a, std::size_t b) {
        return problem.services[a].cpu_millicores > problem.services[b].cpu_millicores;
    });

    Assign assign(problem.services.size());
    Usage u{std::vector<int>(problem.nodes.size(), 0), std::vector<int>(problem.nodes.size(), 0)};
    for (std::size_t s : svc) {
        const ServiceSpec& spec = problem.services[s];
        auto try_place = [&](bool want_active) -> bool {
            for (std::size_t n : order) {
                if (active[n] != want_active) {
                    continue;
                }
                if (fits(problem, u, n, spec.cpu_millicores, spec.mem_mb)) {
                    assign[s] = n;
                    u.cpu[n] += spec.cpu_millicores;
                    u.mem[n] += spec.mem_mb;
                    active[n] = true;
                    return true;
                }
            }
            return false;
        };
        if (!try_place(true) && !try_place(false)) {
            throw std::invalid_argument("no node can host service '" + spec.name + "'");
        }
    }
    return to_placement(problem, assign);
}

Placement local_search_improve(const PlacementProblem& problem, Placement placement,
                               int max_iters) {
    check_placement(problem, placement);
    Assign assign = to_indices(problem, placement);
    auto order = nodes_by_id(problem);
    Usage u = usage_of(problem, assign);
    double current = objective_unchecked(problem, assign);

    for (int iter = 0; iter < max_iters; ++iter) {
        double best = current;
        Assign best_assign;

        auto consider = [&](const Assign& candidate) {
            double obj = objective_unchecked(problem, candidate);
            if (obj < best - kImprovementEps) {
                best = obj;
                best_assign = candidate;
            }
        };

        // single-service moves, then pairwise swaps, in a fixed scan order
        for (std::size_t s = 0; s < assign.size(); ++s) {
            const ServiceSpec& spec = problem.services[s];
            for (std::size_t n : order) {
                if (n == assign[s] || !fits(problem, u, n, spec.cpu_millicores, spec.mem_mb)) {
                    continue;
                }
                Assign candidate = assign;
                candidate[s] = n;
                consider(candidate);
            }
        }
        for (std::size_t a = 0; a < assign.size(); ++a) {
            for (std::size_t b = a + 1; b < assign.size(); ++b) {
                std::size_t na = assign[a];
                std::size_t nb = assign[b];
                if (na == nb) {
                    continue;
                }
                const ServiceSpec& sa = problem.services[a];
                const ServiceSpec& sb = problem.services[b];
                bool ok_a = u.cpu[nb] - sb.cpu_millicores + sa.cpu_millicores <=
                                problem.nodes[nb].cpu_capacity_millicores &&
                            u.mem[nb] - sb.mem_mb + sa.mem_mb <=
                                problem.nodes[nb].mem_capacity_mb;
                bool ok_b = u.cpu[na] - sa.cpu_millicores + sb.cpu_millicores <=
                                problem.nodes[na].cpu_capacity_millicores &&
                            u.mem[na] - sa.mem_mb + sb.mem_mb <=
                                problem.nodes[na].mem_capacity_mb;
                if (!ok_a || !ok_b) {
                    continue;
                }
                Assign candidate = assign;
                std::swap(candidate[a], candidate[b]);
                consider(candidate);
            }
        }

        if (best_assign.empty()) {
            break;  // local optimum
        }
        assign = std::move(best_assign);
        u = usage_of(problem, assign);
        current = best;
    }
    return to_placement(problem, assign);
}

Placement brute_force_place(const PlacementProblem& problem) {
    check_problem(problem);
    if (problem.services.size() > 8 || problem.nodes.size() > 5) {
        throw std::invalid_argument(
            "brute force is limited to 8 services on 5 nodes, got " +
            std::to_string(problem.services.size()) + " services on " +
            std::to_string(problem.nodes.size()) + " nodes");
    }
    if (problem.services.empty()) {
        return Placement{};
    }

    auto order = nodes_by_id(problem);
    Assign assign(problem.services.size());
    Usage u{std::vector<int>(problem.nodes.size(), 0), std::vector<int>(problem.nodes.size(), 0)};
    Assign best_assign;
    double best = std::numeric_limits<double>::infinity();

    // DFS in (catalog order, node id) order; keeping the first minimum makes
    // the tie-break the lexicographically smallest assignment
    auto dfs = [&](auto&& self, std::size_t s) -> void {
        if (s == problem.services.size()) {
            double obj = objective_unchecked(problem, assign);
            if (obj < best) {
                best = obj;
                best_assign = assign;
            }
            return;
        }
        const ServiceSpec& spec = problem.services[s];
        for (std::size_t n : order) {
            if (!fits(problem, u, n, spec.cpu_millicores, spec.mem_mb)) {
                continue;
            }
            assign[s] = n;
            u.cpu[n] += spec.cpu_millicores;
            u.mem[n] += spec.mem_mb;
            self(self, s + 1);
            u.cpu[n] -= spec.cpu_millicores;
            u.mem[n] -= spec.mem_mb;
        }
    };
    dfs(dfs, 0);

    if (best_assign.empty()) {
        throw std::invalid_argument("no feasible placement exists for this instance");
    }
    return to_placement(problem, best_assign);
}

}  // namespace soledge
