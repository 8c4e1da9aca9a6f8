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

#include "retro/random_instances.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace retro::random {

namespace {

std::vector<Complex> gaussian_vector(Rng &rng, std::size_t dim) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Complex> v(dim);
    for (auto &z : v) {
        const double re = normal(rng);
        const double im = normal(rng);
        z = Complex(re, im);
    }
    return v;
}

}  // namespace

Ket ket(Rng &rng, std::size_t dim) {
    return Ket::normalized(gaussian_vector(rng, dim));
}

ProjectiveDecomposition fine_pvm(Rng &rng, std::size_t dim) {
    std::vector<std::vector<Complex>> basis;
    while (basis.size() < dim) {
        auto v = gaussian_vector(rng, dim);
        // Modified Gram-Schmidt, twice for numerical orthogonality.
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto &u : basis) {
                Complex proj = 0.0;
                for (std::size_t i = 0; i < dim; ++i) {
                    proj += std::conj(u[i]) * v[i];
                }
                for (std::size_t i = 0; i < dim; ++i) {
                    v[i] -= proj * u[i];
                }
            }
        }
        double norm2 = 0.0;
        for (const auto &z : v) {
            norm2 += std::norm(z);
        }
        if (norm2 < 1e-8) {
            continue;
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto &z : v) {
            z *= inv;
        }
        basis.push_back(std::move(v));
    }
    std::vector<Ket> kets;
    kets.reserve(dim);
    for (auto &v : basis) {
        kets.push_back(Ket::normalized(std::move(v)));
    }
    return pvm_from_kets(kets);
}

DensityOperator density(Rng &rng, std::size_t dim, double pure_fraction) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng) < pure_fraction) {
        return DensityOperator::pure(ket(rng, dim));
    }
    ComplexMatrix g(dim, gaussian_vector(rng, dim * dim));
    ComplexMatrix m = g * g.adjoint();
    m = Complex(1.0 / m.trace().real()) * m;
    // Exact hermiticity after the product's round-off.
    m = 0.5 * (m + m.adjoint());
    return DensityOperator(std::move(m));
}

std::vector<std::vector<std::string>> partition(Rng &rng, const ProjectiveDecomposition &pvm) {
    const auto labels = pvm.labels();
    const std::size_t n = labels.size();
    if (n == 1) {
        return {labels};
    }
    std::uniform_int_distribution<std::size_t> group_count(2, n);
    const std::size_t k = group_count(rng);
    // Seed each group with one label so none is empty, then scatter the rest.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = i;
    }
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> group_of(n);
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    for (std::size_t i = 0; i < n; ++i) {
        group_of[order[i]] = i < k ? i : pick(rng);
    }
    std::vector<std::vector<std::string>> groups;
    std::vector<std::size_t> slot_of_group(k, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t g = group_of[i];
        if (slot_of_group[g] == n) {
            slot_of_group[g] = groups.size();
            groups.emplace_back();
        }
        groups[slot_of_group[g]].push_back(labels[i]);
    }
    return groups;
}

ComplementRotation complement_rotation(Rng &rng, std::size_t dim) {
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    ComplementRotation r = ComplementRotation::identity(dim);
    for (auto &g : r.givens) {
        g.theta = angle(rng);
        g.phase = angle(rng);
    }
    r.phases.resize(dim - 1);
    for (auto &p : r.phases) {
        p = angle(rng);
    }
    return r;
}

}  // namespace retro::random
