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

#include "csit/pilot_measurement.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

namespace csit
{
    ActiveCellSet active_cell_set(std::span<const double> snr_per_cell, double rho_th)
    {
        ActiveCellSet pi;
        for (std::size_t l = 0; l < snr_per_cell.size(); ++l)
        {
            if (snr_per_cell[l] < 0.0)
                throw std::invalid_argument("active_cell_set: SNR must be non-negative");
            if (snr_per_cell[l] > rho_th)
                pi.push_back(static_cast<int>(l));
        }
        return pi;
    }

    ActiveCellSet group_active_cell_set(const Eigen::MatrixXd &snr, double rho_th)
    {
        if (snr.rows() < 1)
            throw std::invalid_argument("group_active_cell_set: empty group");
        const Eigen::VectorXd mean = snr.colwise().mean().transpose();
        return active_cell_set(std::span<const double>(mean.data(), static_cast<std::size_t>(mean.size())), rho_th);
    }

    namespace
    {
        constexpr std::array<char, 8> kMagic{'C', 'S', 'I', 'T', 'P', 'B', '0', '1'};

        PilotBook<double> empty_book(Index L, Index P, Index G, Index M)
        {
            if (L < 1 || P < 1 || G < 1 || M < 1)
                throw std::runtime_error("pilot book: dimensions must be positive");
            PilotBook<double> book;
            book.cells = L;
            book.subcarriers = P;
            book.slots = G;
            book.antennas = M;
            book.symbols.assign(static_cast<std::size_t>(L * P), CMatrixd(G, M));
            return book;
        }

        void put_u64(std::ostream &os, std::uint64_t v)
        {
            std::array<unsigned char, 8> bytes{};
            for (int i = 0; i < 8; ++i)
                bytes[static_cast<std::size_t>(i)] = static_cast<unsigned char>(v >> (8 * i));
            os.write(reinterpret_cast<const char *>(bytes.data()), 8);
        }

        std::uint64_t get_u64(std::istream &is)
        {
            std::array<unsigned char, 8> bytes{};
            if (!is.read(reinterpret_cast<char *>(bytes.data()), 8))
                throw std::runtime_error("pilot book: truncated binary header");
            std::uint64_t v = 0;
            for (int i = 0; i < 8; ++i)
                v |= static_cast<std::uint64_t>(bytes[static_cast<std::size_t>(i)]) << (8 * i);
            return v;
        }

        void put_f64(std::ostream &os, double x) { put_u64(os, std::bit_cast<std::uint64_t>(x)); }

        double get_f64(std::istream &is) { return std::bit_cast<double>(get_u64(is)); }
    }

    void write_pilot_book_csv(std::ostream &os, const PilotBook<double> &book)
    {
        os << "L,P,G,M\n"
           << book.cells << ',' << book.subcarriers << ',' << book.slots << ',' << book.antennas << '\n';
        char line[64];
        for (Index l = 0; l < book.cells; ++l)
            for (Index p = 0; p < book.subcarriers; ++p)
                for (Index t = 0; t < book.slots; ++t)
                    for (Index m = 0; m < book.antennas; ++m)
                    {
                        const auto z = book(l, p, t, m);
                        std::snprintf(line, sizeof line, "%.17g,%.17g\n", z.real(), z.imag());
                        os << line;
                    }
    }

    PilotBook<double> read_pilot_book_csv(std::istream &is)
    {
        std::string line;
        if (!std::getline(is, line) || line != "L,P,G,M")
            throw std::runtime_error("pilot book csv: missing L,P,G,M header");
        if (!std::getline(is, line))
            throw std::runtime_error("pilot book csv: missing dimensions");
        std::istringstream dims(line);
        Index L = 0, P = 0, G = 0, M = 0;
        char c1 = 0, c2 = 0, c3 = 0;
        if (!(dims >> L >> c1 >> P >> c2 >> G >> c3 >> M) || c1 != ',' || c2 != ',' || c3 != ',')
            throw std::runtime_error("pilot book csv: malformed dimensions line");

        PilotBook<double> book = empty_book(L, P, G, M);
        for (Index l = 0; l < L; ++l)
            for (Index p = 0; p < P; ++p)
                for (Index t = 0; t < G; ++t)
                    for (Index m = 0; m < M; ++m)
                    {
                        if (!std::getline(is, line))
                            throw std::runtime_error("pilot book csv: truncated entry list");
                        const auto comma = line.find(',');
                        if (comma == std::string::npos)
                            throw std::runtime_error("pilot book csv: malformed entry '" + line + "'");
                        book.block(l, p)(t, m) = {std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))};
                    }
        return book;
    }

    void write_pilot_book_binary(std::ostream &os, const PilotBook<double> &book)
    {
        os.write(kMagic.data(), kMagic.size());
        put_u64(os, static_cast<std::uint64_t>(book.cells));
        put_u64(os, static_cast<std::uint64_t>(book.subcarriers));
        put_u64(os, static_cast<std::uint64_t>(book.slots));
        put_u64(os, static_cast<std::uint64_t>(book.antennas));
        for (Index l = 0; l < book.cells; ++l)
            for (Index p = 0; p < book.subcarriers; ++p)
                for (Index t = 0; t < book.slots; ++t)
                    for (Index m = 0; m < book.antennas; ++m)
                    {
                        const auto z = book(l, p, t, m);
                        put_f64(os, z.real());
                        put_f64(os, z.imag());
                    }
    }

    PilotBook<double> read_pilot_book_binary(std::istream &is)
    {
        std::array<char, 8> magic{};
        if (!is.read(magic.data(), magic.size()) || magic != kMagic)
            throw std::runtime_error("pilot book binary: bad magic");
        const auto L = static_cast<Index>(get_u64(is));
        const auto P = static_cast<Index>(get_u64(is));
        const auto G = static_cast<Index>(get_u64(is));
        const auto M = static_cast<Index>(get_u64(is));
        PilotBook<double> book = empty_book(L, P, G, M);
        for (Index l = 0; l < L; ++l)
            for (Index p = 0; p < P; ++p)
                for (Index t = 0; t < G; ++t)
                    for (Index m = 0; m < M; ++m)
                    {
                        const double re = get_f64(is);
                        const double im = get_f64(is);
                        book.block(l, p)(t, m) = {re, im};
                    }
        return book;
    }
}
