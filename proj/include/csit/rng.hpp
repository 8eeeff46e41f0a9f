// SPDX-License-Identifier: Apache-2.0
//
// csit: compressive-sensing CSIT estimation for multi-cell FDD massive MIMO
// Copyright (C) 2026 The csit authors
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

#ifndef CSIT_RNG_HPP
#define CSIT_RNG_HPP

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace csit
{
    using Rng = std::mt19937_64;

    // Splittable seeding: a master seed plus a path of counters (trial index,
    // stream purpose, sweep point, ...) maps to an independent generator.
    // Identical (master, path) always yields the identical stream.
    std::uint64_t substream_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

    Rng make_substream(std::uint64_t master, std::initializer_list<std::uint64_t> path);

    // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    template <typename Real>
    std::complex<Real> complex_gaussian(Rng &rng, Real variance)
    {
        std::normal_distribution<Real> normal(Real(0), std::sqrt(variance / Real(2)));
        const Real re = normal(rng);
        const Real im = normal(rng);
        return {re, im};
    }
}

#endif
