// Copyright 2026 The Retrodictor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

namespace retro::tol {

/// Structural invariants: hermiticity, idempotence, orthogonality, completeness, unit norm.
inline constexpr double kStructural = 1e-10;

/// Lowest eigenvalue accepted for a density operator.
inline constexpr double kPsdFloor = -1e-9;

/// |Tr P - rank| for projectors.
inline constexpr double kRankTrace = 1e-8;

/// Cross-checks between two arithmetic routes that accumulate rounding.
inline constexpr double kCrossCheck = 1e-8;

/// A branch or conditioning probability at or below this is treated as an impossible event.
inline constexpr double kZeroProbability = 1e-14;

/// Normalization of a joint distribution.
inline constexpr double kNormalization = 1e-9;

/// Joint-table entries above this (negative) value are clamped to zero on read.
inline constexpr double kNegativeEntry = -1e-12;

/// Closed form vs oracle agreement.
inline constexpr double kOracleAgreement = 1e-9;

/// Classical model row sums.
inline constexpr double kClassicalModel = 1e-12;

}  // namespace retro::tol
