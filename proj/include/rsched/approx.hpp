// Copyright 2026 the rsched authors
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

#ifndef RSCHED_APPROX_HPP
#define RSCHED_APPROX_HPP

#include "rsched/dp_basic.hpp"
#include "rsched/instance.hpp"

namespace rsched {

/// Feasible schedule whose makespan B satisfies OPT <= B <= 2*OPT.
///
/// Restricted-identical views take the classic route: binary search on the
/// target T, fractional feasibility as a max-flow (job supplies p_j, machine
/// caps T), cycle canceling on the support, then rounding the support forest
/// so that each machine gains at most one fractional job. General unrelated
/// views fall back to binary-searching the smallest feasible load cap with
/// the capped load-vector DP, which returns the exact optimum (B = OPT).
SolveResult two_approx(const SubinstanceRef& sub);

}  // namespace rsched

#endif  // RSCHED_APPROX_HPP
