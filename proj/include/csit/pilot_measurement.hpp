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

#ifndef CSIT_PILOT_MEASUREMENT_HPP
#define CSIT_PILOT_MEASUREMENT_HPP

#include "csit/channel_model.hpp"
#include "csit/rng.hpp"
#include "csit/types.hpp"

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace csit
{
    /// Downlink pilot symbols s_{l,p}^t for every cell, subcarrier and slot.
    ///
    /// Stored as one G x M block per (cell, subcarrier); row t of block(l, p)
    /// is the pilot vector the M antennas of BS l send in slot t on
    /// subcarrier p. Every entry has unit modulus.
    template <typename Real>
    struct PilotBook
    {
        Index cells = 0;
        Index subcarriers = 0;
        Index slots = 0;
        Index antennas = 0;
        std::vector<CMatrix<Real>> symbols; // (l * subcarriers + p) -> slots x antennas

        const CMatrix<Real> &block(Index l, Index p) const { return symbols[static_cast<std::size_t>(l * subcarriers + p)]; }
        CMatrix<Real> &block(Index l, Index p) { return symbols[static_cast<std::size_t>(l * subcarriers + p)]; }

        std::complex<Real> operator()(Index l, Index p, Index t, Index m) const { return block(l, p)(t, m); }
    };

    /// Unit-modulus pilots exp(j theta), theta i.i.d. uniform on [0, 2 pi)
    /// across cells, subcarriers, slots and antennas.
    template <typename Real>
    PilotBook<Real> design_pilot_book(Index L, Index M, Index P, Index G, Rng &rng)
    {
        if (L < 1 || M < 1 || P < 1 || G < 1)
            throw std::invalid_argument("design_pilot_book: all dimensions must be positive");

        PilotBook<Real> book;
        book.cells = L;
        book.subcarriers = P;
        book.slots = G;
        book.antennas = M;
        book.symbols.reserve(static_cast<std::size_t>(L * P));

        std::uniform_real_distribution<Real> phase(Real(0), Real(2) * std::numbers::pi_v<Real>);
        for (Index l = 0; l < L; ++l)
            for (Index p = 0; p < P; ++p)
            {
                CMatrix<Real> S(G, M);
                for (Index t = 0; t < G; ++t)
                    for (Index m = 0; m < M; ++m)
                        S(t, m) = std::polar(Real(1), phase(rng));
                book.symbols.push_back(std::move(S));
            }
        return book;
    }

    /// Cells with SNR strictly above rho_th, ascending. Empty means unservable.
    ActiveCellSet active_cell_set(std::span<const double> snr_per_cell, double rho_th);

    /// Shared active set for a group of physically close users: per-cell SNR
    /// is averaged over the group (users x cells input) before thresholding.
    ActiveCellSet group_active_cell_set(const Eigen::MatrixXd &snr, double rho_th);

    /// Pilots seen through the angular transform, phi_{l,p} = S_{l,p} F.
    ///
    /// Every sensing matrix is a column-concatenation of these G x M blocks,
    /// so they are formed once per pilot book and reused by all user groups.
    template <typename Real>
    struct ProjectedPilots
    {
        Index cells = 0;
        Index subcarriers = 0;
        Index slots = 0;
        Index antennas = 0;
        std::vector<CMatrix<Real>> phi; // (l * subcarriers + p) -> slots x antennas

        ProjectedPilots() = default;

        ProjectedPilots(const PilotBook<Real> &book, const CMatrix<Real> &F)
            : cells(book.cells), subcarriers(book.subcarriers), slots(book.slots), antennas(book.antennas)
        {
            if (F.rows() != book.antennas || F.cols() != book.antennas)
                throw std::invalid_argument("ProjectedPilots: transform size does not match pilot antennas");
            phi.reserve(book.symbols.size());
            for (const auto &S : book.symbols)
                phi.push_back(S * F);
        }

        const CMatrix<Real> &block(Index l, Index p) const { return phi[static_cast<std::size_t>(l * subcarriers + p)]; }

        /// Theta_p = [phi_{pi(1),p}, ..., phi_{pi(n),p}], G x (M |pi|).
        CMatrix<Real> sensing(const ActiveCellSet &pi, Index p) const
        {
            if (pi.empty())
                throw std::invalid_argument("sensing matrix: active cell set is empty");
            if (p < 0 || p >= subcarriers)
                throw std::invalid_argument("sensing matrix: subcarrier out of range");
            CMatrix<Real> theta(slots, antennas * static_cast<Index>(pi.size()));
            for (std::size_t b = 0; b < pi.size(); ++b)
            {
                if (pi[b] < 0 || pi[b] >= cells)
                    throw std::invalid_argument("sensing matrix: cell index out of range");
                if (b > 0 && pi[b] <= pi[b - 1])
                    throw std::invalid_argument("sensing matrix: active cell set must be strictly increasing");
                theta.middleCols(static_cast<Index>(b) * antennas, antennas) = block(pi[b], p);
            }
            return theta;
        }

        std::vector<CMatrix<Real>> sensing_all(const ActiveCellSet &pi) const
        {
            std::vector<CMatrix<Real>> out;
            out.reserve(static_cast<std::size_t>(subcarriers));
            for (Index p = 0; p < subcarriers; ++p)
                out.push_back(sensing(pi, p));
            return out;
        }
    };

    /// Row t of the result is the concatenation over l in pi of (s_{l,p}^t)^T F.
    template <typename Real>
    CMatrix<Real> assemble_sensing_matrix(const PilotBook<Real> &book, const CMatrix<Real> &F, const ActiveCellSet &pi,
                                          Index p)
    {
        if (pi.empty())
            throw std::invalid_argument("assemble_sensing_matrix: active cell set is empty");
        if (F.rows() != book.antennas || F.cols() != book.antennas)
            throw std::invalid_argument("assemble_sensing_matrix: transform size does not match pilot antennas");
        if (p < 0 || p >= book.subcarriers)
            throw std::invalid_argument("assemble_sensing_matrix: subcarrier out of range");

        const Index M = book.antennas;
        CMatrix<Real> theta(book.slots, M * static_cast<Index>(pi.size()));
        for (std::size_t b = 0; b < pi.size(); ++b)
        {
            if (pi[b] < 0 || pi[b] >= book.cells || (b > 0 && pi[b] <= pi[b - 1]))
                throw std::invalid_argument("assemble_sensing_matrix: invalid active cell set");
            theta.middleCols(static_cast<Index>(b) * M, M).noalias() = book.block(pi[b], p) * F;
        }
        return theta;
    }

    /// Fed-back pilot observations R_p (G x K) for one user group.
    template <typename Real>
    struct FeedbackTensor
    {
        std::vector<CMatrix<Real>> R; // per subcarrier, slots x users
        Real noise_var = Real(0);
        ActiveCellSet pi;             // the group's shared active set

        Index subcarriers() const { return static_cast<Index>(R.size()); }
        Index slots() const { return R.empty() ? 0 : R.front().rows(); }
        Index users() const { return R.empty() ? 0 : R.front().cols(); }

        // Mean received power per entry, averaged over all subcarriers.
        Real mean_power() const
        {
            Real total = 0;
            Index n = 0;
            for (const auto &r : R)
            {
                total += r.squaredNorm();
                n += r.size();
            }
            return n > 0 ? total / Real(n) : Real(0);
        }
    };

    /// r_{k,p}^t = sum over every cell l of phi_{l,p}^t h_{k,l,p} + w.
    ///
    /// Every cell contributes through its true channel; whether it is modeled
    /// by the estimator is decided only by which blocks enter the sensing
    /// matrix. w ~ CN(0, noise_var) i.i.d.
    template <typename Real>
    FeedbackTensor<Real> simulate_feedback(const AngularChannelSet<Real> &channels, const ProjectedPilots<Real> &pilots,
                                           Real noise_var, Rng &rng)
    {
        if (channels.cells != pilots.cells || channels.subcarriers != pilots.subcarriers ||
            channels.antennas != pilots.antennas)
            throw std::invalid_argument("simulate_feedback: channel and pilot dimensions disagree");
        if (noise_var < Real(0))
            throw std::invalid_argument("simulate_feedback: negative noise variance");

        const Index G = pilots.slots;
        const Index K = channels.users;
        FeedbackTensor<Real> fb;
        fb.noise_var = noise_var;
        fb.R.reserve(static_cast<std::size_t>(channels.subcarriers));

        for (Index p = 0; p < channels.subcarriers; ++p)
        {
            CMatrix<Real> R = CMatrix<Real>::Zero(G, K);
            for (Index l = 0; l < channels.cells; ++l)
            {
                const CMatrix<Real> &phi = pilots.block(l, p);
                for (Index k = 0; k < K; ++k)
                {
                    // only the support bins are nonzero
                    const auto &h = channels.link(k, l);
                    for (Index m : channels.support(k, l))
                        R.col(k) += phi.col(m) * h(m, p);
                }
            }
            fb.R.push_back(std::move(R));
        }

        // noise drawn after all signal terms so the signal part does not
        // depend on noise_var
        if (noise_var > Real(0))
            for (auto &R : fb.R)
                for (Index k = 0; k < K; ++k)
                    for (Index t = 0; t < G; ++t)
                        R(t, k) += complex_gaussian<Real>(rng, noise_var);
        return fb;
    }

    /// Variant taking the raw pilot book and per-user active sets; all users
    /// of a group must report the same set.
    template <typename Real>
    FeedbackTensor<Real> simulate_feedback(const AngularChannelSet<Real> &channels, const PilotBook<Real> &book,
                                           const CMatrix<Real> &F, const std::vector<ActiveCellSet> &pi_per_user,
                                           Real noise_var, Rng &rng)
    {
        if (static_cast<Index>(pi_per_user.size()) != channels.users)
            throw std::invalid_argument("simulate_feedback: need one active cell set per user");
        for (const auto &pi : pi_per_user)
            if (pi != pi_per_user.front())
                throw std::invalid_argument("simulate_feedback: users of one group must share the active cell set");

        FeedbackTensor<Real> fb = simulate_feedback(channels, ProjectedPilots<Real>(book, F), noise_var, rng);
        if (!pi_per_user.empty())
            fb.pi = pi_per_user.front();
        return fb;
    }

    /// Stacked angular truth for a group: rows are cell blocks in pi order,
    /// columns are users. One matrix per subcarrier.
    template <typename Real>
    std::vector<CMatrix<Real>> stacked_channels(const AngularChannelSet<Real> &channels, const ActiveCellSet &pi)
    {
        const Index M = channels.antennas;
        std::vector<CMatrix<Real>> out;
        out.reserve(static_cast<std::size_t>(channels.subcarriers));
        for (Index p = 0; p < channels.subcarriers; ++p)
        {
            CMatrix<Real> H(M * static_cast<Index>(pi.size()), channels.users);
            for (std::size_t b = 0; b < pi.size(); ++b)
                H.middleRows(static_cast<Index>(b) * M, M) = channels.cell_matrix(pi[b], p);
            out.push_back(std::move(H));
        }
        return out;
    }

    /// True supports in stacked coordinates, one per user.
    template <typename Real>
    std::vector<SupportSet> stacked_supports(const AngularChannelSet<Real> &channels, const ActiveCellSet &pi)
    {
        std::vector<SupportSet> out(static_cast<std::size_t>(channels.users));
        for (Index k = 0; k < channels.users; ++k)
            for (std::size_t b = 0; b < pi.size(); ++b)
                for (Index m : channels.support(k, pi[b]))
                    out[static_cast<std::size_t>(k)].push_back(static_cast<Index>(b) * channels.antennas + m);
        return out;
    }

    // Pilot book artifacts --------------------------------------------------
    //
    // Both formats store entries in (l, p, t, m) order as (re, im) pairs.
    // CSV: a "L,P,G,M" header line, the four dimensions, then one "re,im"
    // line per entry written with 17 significant digits.
    // Binary: the 8-byte magic "CSITPB01", four little-endian uint64
    // dimensions, then re/im as IEEE-754 doubles.

    void write_pilot_book_csv(std::ostream &os, const PilotBook<double> &book);
    PilotBook<double> read_pilot_book_csv(std::istream &is);

    void write_pilot_book_binary(std::ostream &os, const PilotBook<double> &book);
    PilotBook<double> read_pilot_book_binary(std::istream &is);
}

#endif
