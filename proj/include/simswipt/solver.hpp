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


#ifndef SIMSWIPT_SOLVER_HPP
#define SIMSWIPT_SOLVER_HPP

#include "simswipt/types.hpp"

#include <string>
#include <vector>

namespace simswipt
{
    // Convex univariate term weight * f(scale * x[var]).
    struct ConvexTerm
    {
        enum class Kind
        {
            square,  // f(u) = u^2
            neg_log1m, // f(u) = -log(1 - u), domain u < 1
        };

        Index var = 0;
        double weight = 1.0;
        Kind kind = Kind::square;
        double scale = 1.0;

        bool in_domain(double x) const { return kind == Kind::square || scale * x < 1.0; }
        double value(double x) const;
        double first(double x) const;
        double second(double x) const;
    };

    // Concave constraint  linear^T x + offset - sum(terms) >= 0.
    struct Constraint
    {
        std::string name;
        VectorXd linear;
        double offset = 0.0;
        std::vector<ConvexTerm> terms;

        // -inf outside the domain of any term.
        double value(const VectorXd &x) const;
        VectorXd gradient(const VectorXd &x) const;
    };

    // minimize objective^T x  subject to every constraint >= 0.
    struct ConvexProgram
    {
        Index variables = 0;
        VectorXd objective;
        std::vector<Constraint> constraints;

        Constraint &add(std::string name);
        void validate() const;
    };

    enum class SolveStatus
    {
        optimal,
        infeasible,
        max_iterations,
    };

    const char *to_string(SolveStatus s);

    struct SolverOptions
    {
        double tolerance = 1e-9;   // duality gap relative to max(1, |objective|)
        double barrier_growth = 20.0;
        int max_newton = 400;      // across all centering steps
    };

    struct SolverResult
    {
        SolveStatus status = SolveStatus::max_iterations;
        VectorXd x;
        VectorXd duals;
        double objective = 0.0;
        double duality_gap = 0.0;
        double kkt_residual = 0.0;  // ||c - sum lambda_i grad g_i||_inf
        int newton_iterations = 0;
        std::string violated;       // most violated constraint when infeasible
        double max_violation = 0.0; // max(0, -g_i) at x
    };

    // Log-barrier interior-point method. `start` need not be feasible; a
    // phase-I problem maximising the minimum slack is solved first and stops
    // as soon as a strictly feasible point appears. Phase I only looks within
    // 1e4 * max(1, |start|_inf) of the start.
    SolverResult solve(const ConvexProgram &program, const VectorXd &start, const SolverOptions &opts = {});

    // Maximises the smallest constraint value from `start`. The result x is
    // the best point found and `objective` is the attained minimum slack.
    SolverResult maximize_min_slack(const ConvexProgram &program, const VectorXd &start, const SolverOptions &opts = {},
                                    bool stop_when_feasible = true);
}

#endif // SIMSWIPT_SOLVER_HPP
