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


#include "csit/precoding.hpp"

#include <algorithm>
#include <numeric>

namespace csit
{
    ServingAssignment select_serving_sets(const Eigen::MatrixXd &gains, int n_serve)
    {
        if (n_serve < 1)
            throw std::invalid_argument("select_serving_sets: n_serve must be at least 1");
        const auto L = static_cast<int>(gains.cols());
        const int keep = std::min(n_serve, L);

        ServingAssignment out;
        out.cells.reserve(static_cast<std::size_t>(gains.rows()));
        for (Index k = 0; k < gains.rows(); ++k)
        {
            std::vector<int> order(static_cast<std::size_t>(L));
            std::iota(order.begin(), order.end(), 0);
            // stable sort keeps the lower index first among equal gains
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return gains(k, a) > gains(k, b); });
            order.resize(static_cast<std::size_t>(keep));
            out.cells.push_back(std::move(order));
        }
        return out;
    }
}
