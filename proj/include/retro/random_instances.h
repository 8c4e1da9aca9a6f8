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

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "retro/qla.h"

namespace retro::random {

using Rng = std::mt19937_64;

/// Haar-like random unit ket: normalized complex Gaussian vector.
Ket ket(Rng &rng, std::size_t dim);

/// Fine PVM from Gram-Schmidt orthonormalization of a random complex matrix.
ProjectiveDecomposition fine_pvm(Rng &rng, std::size_t dim);

/// Pure state with probability `pure_fraction`, otherwise a full-rank
/// Ginibre mixed state G G^H / Tr(G G^H).
DensityOperator density(Rng &rng, std::size_t dim, double pure_fraction = 0.5);

/// Random partition of the labels of `pvm` into between 2 and size() groups
/// (or 1 group for size() == 1). Group order follows first members.
std::vector<std::vector<std::string>> partition(Rng &rng, const ProjectiveDecomposition &pvm);

/// Random Givens angles and phases for `rotate_fixing_axis` at this dimension.
ComplementRotation complement_rotation(Rng &rng, std::size_t dim);

}  // namespace retro::random
