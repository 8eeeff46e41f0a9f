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

#ifndef CSIT_TYPES_HPP
#define CSIT_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace csit
{
    using Index = Eigen::Index;

    template <typename Real>
    using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

    template <typename Real>
    using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

    template <typename Real>
    using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

    using CMatrixd = CMatrix<double>;
    using CVectord = CVector<double>;

    // Sorted, duplicate-free list of angle-bin (or stacked column) indices.
    using SupportSet = std::vector<Index>;

    // Cells whose SNR at a user clears the activation threshold, ascending.
    using ActiveCellSet = std::vector<int>;

    bool is_valid_support(const SupportSet &support, Index upper_bound);

    // Sorted union; both inputs must already be sorted.
    SupportSet support_union(const SupportSet &a, const SupportSet &b);

    SupportSet support_intersection(const SupportSet &a, const SupportSet &b);
}

#endif
