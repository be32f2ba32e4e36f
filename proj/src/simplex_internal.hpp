// Copyright 2026 The scgep Authors
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

#ifndef SCGEP_SRC_SIMPLEX_INTERNAL_HPP_
#define SCGEP_SRC_SIMPLEX_INTERNAL_HPP_

#include <span>

#include "scgep/milp.hpp"

namespace scgep::internal {

// LP solve of `problem` with the column bounds replaced by lower/upper.
// Integrality marks are ignored.
SolveResult solve_lp_bounded(const SparseProblem& problem,
                             std::span<const double> lower,
                             std::span<const double> upper,
                             const SolverOptions& options);

}  // namespace scgep::internal

#endif  // SCGEP_SRC_SIMPLEX_INTERNAL_HPP_
