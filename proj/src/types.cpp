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

#include "csit/types.hpp"

#include <algorithm>
#include <iterator>

namespace csit
{
    bool is_valid_support(const SupportSet &support, Index upper_bound)
    {
        for (std::size_t i = 0; i < support.size(); ++i)
        {
            if (support[i] < 0 || support[i] >= upper_bound)
                return false;
            if (i > 0 && support[i] <= support[i - 1])
                return false;
        }
        return true;
    }

    SupportSet support_union(const SupportSet &a, const SupportSet &b)
    {
        SupportSet out;
        out.reserve(a.size() + b.size());
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return out;
    }

    SupportSet support_intersection(const SupportSet &a, const SupportSet &b)
    {
        SupportSet out;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return out;
    }
}
