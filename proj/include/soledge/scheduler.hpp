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

#ifndef SOLEDGE_SCHEDULER_HPP
#define SOLEDGE_SCHEDULER_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "soledge/energy.hpp"

// Power-aware placement of the service catalog onto nodes: minimize
// steady-state bus power subject to per-node CPU/memory capacity.

namespace soledge {

enum class NodeRole : std::uint8_t { Master, Worker };

struct Node {
    int id = 0;
    NodeRole role = NodeRole::Worker;
    NodePowerProfile profile;
    int cpu_capacity_millicores = 4000;
    int mem_capacity_mb = 824;  // 1 GB minus a 200 MB system reserve
    bool powered = true;

    friend bool operator==(const Node&, const Node&) = default;
};

struct ServiceSpec {
    std::string name;
    int cpu_millicores = 0;
    int mem_mb = 0;
    int priority = 0;  // lower sheds first
    LoadLevel load_contribution = LoadLevel::idle();

    friend bool operator==(const ServiceSpec&, const ServiceSpec&) = default;
};

struct PlacementProblem {
    std::vector<Node> nodes;
    std::vector<ServiceSpec> services;
    DcDcConverter converter;

    friend bool operator==(const PlacementProblem&, const PlacementProblem&) = default;
};

struct Placement {
    std::map<std::string, int> assignment;  // service name -> node id
    double objective_w = 0.0;               // steady-state bus watts @12V

    friend bool operator==(const Placement&, const Placement&) = default;
};

// Problem invariants: at least one node, unique node ids, at most one Master,
// positive capacities and demands, unique service names, sane converter.
// Throws std::invalid_argument naming the offender.
void check_problem(const PlacementProblem& problem);

// Independent feasibility checker: every service assigned exactly once to an
// existing node, per-node CPU and memory sums within capacity. Throws
// std::invalid_argument naming the violated node and resource.
void check_placement(const PlacementProblem& problem, const Placement& placement);

// Steady-state bus power of a feasible placement. A node hosting services
// runs at the largest of their load contributions (in watts, floored at
// Idle); empty nodes are off, except the Master which stays powered whenever
// any service runs. Validates the placement first.
double objective_w(const PlacementProblem& problem, const Placement& placement);

// First-fit-decreasing by CPU demand onto already-active nodes (the Master
// counts as active by policy) before activating a new node; ties toward the
// lowest node id. Throws std::invalid_argument naming an unplaceable service.
Placement greedy_place(const PlacementProblem& problem);

// Repeatedly applies the best single-service move or pairwise swap that
// strictly lowers the objective; stops at a local optimum or after max_iters
// rounds. Resulting objective never exceeds the input's.
Placement local_search_improve(const PlacementProblem& problem, Placement placement,
                               int max_iters = 1000);

// Exhaustive oracle for small instances (services <= 8, nodes <= 5, enforced
// with a size error). Ties broken toward the lexicographically smallest
// assignment in (catalog order, node id) terms.
Placement brute_force_place(const PlacementProblem& problem);

}  // namespace soledge

#endif  // SOLEDGE_SCHEDULER_HPP
