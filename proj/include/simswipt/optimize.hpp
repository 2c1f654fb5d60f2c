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


#ifndef SIMSWIPT_OPTIMIZE_HPP
#define SIMSWIPT_OPTIMIZE_HPP

#include "simswipt/performance.hpp"
#include "simswipt/propagation.hpp"
#include "simswipt/solver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace simswipt
{
    // ---- phase shifts -------------------------------------------------------

    // I.i.d. uniform phases in [0, 2 pi).
    PhaseConfig random_ps(const SimGeometry<double> &geom, int aps, Rng &rng);

    // One phase per layer, shared by all elements of that layer and all APs.
    PhaseConfig equal_ps(const SimGeometry<double> &geom, int aps, double value = 0.0);
    PhaseConfig equal_ps(const SimGeometry<double> &geom, int aps, const VectorXd &per_layer);

    struct HeuristicOptions
    {
        int candidates = 200; // C, the incumbent is candidate 0
        int sweeps = 1;
        int workers = 1;
        int polish_iterations = 20; // fixed-point refinements of the chosen layer, 0 disables
    };

    struct HeuristicResult
    {
        PhaseConfig phases;
        // objective[m] holds tr(F_m F_m^H) before the search and after every
        // layer update, so it has sweeps * L + 1 entries.
        std::vector<std::vector<double>> objective;
    };

    // Layer-by-layer random search maximising tr(F_m F_m^H) per AP. Candidates
    // for (m, sweep, layer) come from their own stream of `seed`.
    HeuristicResult heuristic_ps(const std::vector<PropagationStack<double>> &stacks, const PhaseConfig &initial,
                                 const HeuristicOptions &opts, std::uint64_t seed);

    // ---- power allocation ---------------------------------------------------

    // 1/K_i (1/K_e) on every IR- (ER-) serving AP.
    PowerAllocation epa(const SystemParams &params);

    // Convex upper bound of Xi around e_tilde_n, in the shifted variable:
    //   chi - (1/xi) (ln((phi - e) / e_n) - (e - e_n) / e_n)
    double xi_tilde(double e_tilde, double e_tilde_n, const EHParams &eh);

    // The same bound as a function of the harvested-energy variable eps,
    // e_tilde = (1 - Omega) eps + phi Omega, free of cancellation.
    double xi_tilde_energy(double eps, double eps_n, const EHParams &eh);

    struct Thresholds
    {
        VectorXd se;     // S per IR [bit/s/Hz]
        VectorXd energy; // harvested floor per ER [W]
    };

    // Residuals of the true problem at (power, eps); non-negative means satisfied.
    struct ConstraintCheck
    {
        VectorXd sinr_margin;   // SINR / T - 1
        VectorXd energy_margin; // Q / Q_required(eps) - 1
        VectorXd floor_margin;  // eps minus floor
        double budget_excess = 0.0; // max per-AP sum - 1, -inf without budgets
        double min_power = 0.0;     // smallest coefficient, +inf without any

        bool satisfied(double tol = 1e-9) const;
        double worst() const;
        std::string describe() const;
    };

    ConstraintCheck check_constraints(const NetworkModel &model, const MomentTable &table, const PowerAllocation &power,
                                      const VectorXd &eps, const Thresholds &th);

    struct ScaState
    {
        PowerAllocation power;
        VectorXd eps;       // per ER [W]
        VectorXd q;         // q^(n) per IR
        VectorXd threshold; // T per IR
        int iteration = 0;
        std::vector<double> history;

        double objective() const { return eps.sum(); }
    };

    // Expansion points of `state` rebuilt from its power and eps.
    ScaState make_sca_state(const NetworkModel &model, const MomentTable &table, const PowerAllocation &power,
                            const VectorXd &eps, const Thresholds &th);

    // Variable layout of one convex subproblem.
    struct Subproblem
    {
        ConvexProgram program;
        std::vector<std::vector<Index>> ir_var;  // [m][ki], -1 if AP m does not serve IRs
        std::vector<std::vector<Index>> sqrt_var; // t[m][ki]
        std::vector<std::vector<Index>> er_var;  // [m][ke]
        std::vector<Index> eps_var;              // [ke]
        double eps_scale = 1.0;                  // eps = eps_scale * x

        VectorXd pack(const PowerAllocation &power, const VectorXd &eps, const VectorXd *sqrt_eta = nullptr) const;
        PowerAllocation unpack_power(const VectorXd &x, const SystemParams &params) const;
        VectorXd unpack_eps(const VectorXd &x) const;
    };

    Subproblem build_subproblem(const ScaState &state, const NetworkModel &model, const MomentTable &table,
                                const Thresholds &th);

    struct SubproblemSolution
    {
        PowerAllocation power;
        VectorXd eps;
        SolverResult solver;
    };

    // Warm-started from `state`; phase I repairs the start if needed.
    SubproblemSolution solve_subproblem(const Subproblem &sub, const ScaState &state, const NetworkModel &model,
                                        const SolverOptions &opts = {});

    enum class ScaStatus
    {
        converged,
        max_iterations,
        infeasible,
    };

    const char *to_string(ScaStatus s);

    struct ScaOptions
    {
        int max_iterations = 30;
        double tolerance = 1e-6; // relative objective change
        int start_iterations = 40; // feasibility-restoration rounds
        SolverOptions solver;
    };

    struct ScaIteration
    {
        int iteration = 0;
        double objective = 0.0;
        double worst_margin = 0.0;
        SolveStatus solver = SolveStatus::optimal;
        double kkt_residual = 0.0;
        bool accepted = false;
        PowerAllocation power; // subproblem solution, kept whether or not accepted
        VectorXd eps;
    };

    struct ScaResult
    {
        ScaStatus status = ScaStatus::infeasible;
        PowerAllocation power;
        VectorXd eps;
        std::vector<double> history; // accepted objectives, starting point first
        std::vector<ScaIteration> log;
        std::string diagnostic;
        double objective() const { return history.empty() ? 0.0 : history.back(); }
    };

    // Strictly feasible point of the true problem reached by repeated
    // surrogate phase-I solves from `start`, or nullopt.
    struct FeasiblePoint
    {
        PowerAllocation power;
        VectorXd eps;
    };

    std::optional<FeasiblePoint> find_feasible_point(const NetworkModel &model, const MomentTable &table,
                                                     const Thresholds &th, const PowerAllocation &start,
                                                     const ScaOptions &opts, std::string *diagnostic = nullptr);

    // SCA for the sum-HE problem given the phases baked into `model`.
    ScaResult sca_power_allocation(const NetworkModel &model, const MomentTable &table, const Thresholds &th,
                                   const ScaOptions &opts = {});
    ScaResult sca_power_allocation(const NetworkModel &model, const MomentTable &table, const Thresholds &th,
                                   const FeasiblePoint &start, const ScaOptions &opts = {});

    // Largest common SE target (up to `resolution`) for which a feasible
    // point is found, together with that point.
    struct MaxMinResult
    {
        double target = 0.0;
        FeasiblePoint point;
    };

    std::optional<MaxMinResult> max_min_se_target(const NetworkModel &model, const MomentTable &table,
                                                  const VectorXd &energy_floor, const ScaOptions &opts = {},
                                                  double resolution = 1e-3);
}

#endif // SIMSWIPT_OPTIMIZE_HPP
