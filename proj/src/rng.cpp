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

#include "csit/rng.hpp"

#include <array>

namespace csit
{
    namespace
    {
        // SplitMix64 finalizer
        std::uint64_t mix(std::uint64_t x)
        {
            x += 0x9e3779b97f4a7c15ULL;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
            return x ^ (x >> 31);
        }
    }

    std::uint64_t substream_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path)
    {
        std::uint64_t h = mix(master);
        for (std::uint64_t id : path)
            h = mix(h ^ mix(id + 0x632be59bd9b4e019ULL));
        return h;
    }

    Rng make_substream(std::uint64_t master, std::initializer_list<std::uint64_t> path)
    {
        const std::uint64_t s = substream_seed(master, path);
        std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
        return Rng(seq);
    }
}
