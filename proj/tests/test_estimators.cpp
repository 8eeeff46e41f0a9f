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


#include "csit/estimators.hpp"
#include "csit/pilot_measurement.hpp"

#include <catch_amalgamated.hpp>

#include <limits>

using namespace csit;
using Catch::Matchers::WithinAbs;

namespace
{
    // Single-cell problem with per-user supports shared over subcarriers.
    struct Problem
    {
        std::vector<CMatrixd> R;
        std::vector<CMatrixd> Theta;
        std::vector<CMatrixd> H;
        std::vector<SupportSet> supports;
    };

    Problem make_problem(Index M, Index s, Index c, Index K, Index P, Index G, double noise_var, std::uint64_t seed,
                         int subgroups = 2)
    {
        Rng rng = make_substream(seed, {0});
        const auto sizes = even_subgroups(static_cast<int>(K), subgroups);
        Problem pr;
        pr.supports = sample_group_supports(M, s, c, sizes, rng);
        const Eigen::MatrixXd gains = Eigen::MatrixXd::Ones(K, 1);
        const auto ch = synthesize_channels<double>(pr.supports, gains, M, P, rng);
        const auto book = design_pilot_book<double>(1, M, P, G, rng);
        const ProjectedPilots<double> pilots(book, unitary_dft<double>(M));
        const auto fb = simulate_feedback(ch, pilots, noise_var, rng);
        pr.R = fb.R;
        pr.Theta = pilots.sensing_all(ActiveCellSet{0});
        pr.H = stacked_channels(ch, ActiveCellSet{0});
        return pr;
    }

    double relative_error(const std::vector<CMatrixd> &a, const std::vector<CMatrixd> &b)
    {
        double err = 0, ref = 0;
        for (std::size_t p = 0; p < a.size(); ++p)
        {
            err += (a[p] - b[p]).squaredNorm();
            ref += b[p].squaredNorm();
        }
        return std::sqrt(err / ref);
    }

    // Exhaustive minimum-residual support of size s for one column.
    SupportSet brute_force_support(const CMatrixd &Theta, const CVectord &r, Index s)
    {
        const Index N = Theta.cols();
        SupportSet best;
        double best_res = std::numeric_limits<double>::infinity();
        std::vector<bool> mask(static_cast<std::size_t>(N), false);
        std::fill(mask.end() - s, mask.end(), true);
        do
        {
            SupportSet cand;
            for (Index j = 0; j < N; ++j)
                if (mask[static_cast<std::size_t>(j)])
                    cand.push_back(j);
            CMatrixd A(Theta.rows(), s);
            for (Index j = 0; j < s; ++j)
                A.col(j) = Theta.col(cand[static_cast<std::size_t>(j)]);
            const CVectord x = A.colPivHouseholderQr().solve(r);
            const double res = (r - A * x).norm();
            if (res < best_res)
            {
                best_res = res;
                best = cand;
            }
        } while (std::next_permutation(mask.begin(), mask.end()));
        return best;
    }
}

TEST_CASE("zero feedback gives a zero estimate after one iteration", "[jmumc]")
{
    const std::vector<CMatrixd> R(3, CMatrixd::Zero(10, 4));
    Rng rng = make_substream(1, {});
    const auto book = design_pilot_book<double>(2, 16, 3, 10, rng);
    const ProjectedPilots<double> pilots(book, unitary_dft<double>(16));
    const auto Theta = pilots.sensing_all(ActiveCellSet{0, 1});

    EstimatorConfig cfg;
    cfg.gamma_th = 1e-3;
    for (auto result : {jmumc_omp<double>(R, Theta, cfg), jmu_omp<double>(R, Theta, cfg),
                        single_cell_joint_omp<double>(R, pilots.sensing_all(ActiveCellSet{0}), cfg)})
    {
        CHECK(result.iterations == 1);
        for (const auto &s : result.supports)
            CHECK(s.empty());
        for (const auto &H : result.H_hat)
            CHECK(H.norm() == 0.0);
    }
}

TEST_CASE("a threshold above every index power returns zeros without failing", "[jmumc]")
{
    const Problem pr = make_problem(64, 4, 2, 4, 3, 20, 0.01, 2);
    EstimatorConfig cfg;
    cfg.gamma_th = 1e6;
    const auto est = jmumc_omp<double>(pr.R, pr.Theta, cfg);
    for (const auto &H : est.H_hat)
        CHECK(H.norm() == 0.0);
    CHECK(est.trace.size() == 1);
}

TEST_CASE("noiseless joint recovery is exact", "[jmumc]")
{
    int exact = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        const Problem pr = make_problem(128, 6, 4, 10, 50, 40, 0.0, 100 + seed);
        // between the power of a compensating foreign atom and 1/s
        EstimatorConfig cfg;
        cfg.gamma_th = 0.05;
        const auto est = jmumc_omp<double>(pr.R, pr.Theta, cfg);
        if (est.supports == pr.supports && relative_error(est.H_hat, pr.H) < 1e-8)
            ++exact;
    }
    CHECK(exact == 20);
}

TEST_CASE("estimates agree with the oracle whenever the support is right", "[jmumc][oracle]")
{
    int matched = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed)
    {
        const Problem pr = make_problem(64, 4, 2, 6, 5, 32, 1e-3, 300 + seed);
        EstimatorConfig cfg;
        cfg.gamma_th = 0.05;
        const auto est = jmumc_omp<double>(pr.R, pr.Theta, cfg);
        if (est.supports != pr.supports)
            continue;
        ++matched;
        const auto oracle = oracle_ls<double>(pr.R, pr.Theta, pr.supports);
        for (std::size_t p = 0; p < est.H_hat.size(); ++p)
            for (Index k = 0; k < est.H_hat[p].cols(); ++k)
                CHECK((est.H_hat[p].col(k) - oracle.H_hat[p].col(k)).norm() <= 1e-10 * oracle.H_hat[p].col(k).norm());
    }
    CHECK(matched >= 25);
}

TEST_CASE("single-user recovery against exhaustive search", "[jmumc][bruteforce]")
{
    // P = 2 shares the support over two measurement vectors; the greedy
    // choice is not guaranteed, so only agreement in the typical case and
    // exactness on agreement are asserted here.
    int agree = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t)
    {
        const Problem pr = make_problem(8, 2, 2, 1, 2, 6, 0.0, 500 + static_cast<std::uint64_t>(t), 1);
        EstimatorConfig cfg;
        cfg.gamma_th = 1e-9;
        const auto est = jmumc_omp<double>(pr.R, pr.Theta, cfg);

        // exhaustive search over supports shared by both subcarriers
        SupportSet best;
        double best_res = std::numeric_limits<double>::infinity();
        for (Index a = 0; a < 8; ++a)
            for (Index b = a + 1; b < 8; ++b)
            {
                double res = 0;
                for (int p = 0; p < 2; ++p)
                {
                    CMatrixd A(6, 2);
                    A << pr.Theta[static_cast<std::size_t>(p)].col(a), pr.Theta[static_cast<std::size_t>(p)].col(b);
                    const CVectord x = A.colPivHouseholderQr().solve(pr.R[static_cast<std::size_t>(p)].col(0));
                    res += (pr.R[static_cast<std::size_t>(p)].col(0) - A * x).squaredNorm();
                }
                if (res < best_res)
                {
                    best_res = res;
                    best = {a, b};
                }
            }
        CHECK(best == pr.supports[0]);
        if (est.supports[0] == best)
        {
            ++agree;
            CHECK(relative_error(est.H_hat, pr.H) < 1e-10);
        }
    }
    INFO("agreement " << agree << " / " << trials);
    CHECK(agree >= trials * 3 / 4);

    // the exhaustive helper itself recovers planted supports
    const Problem one = make_problem(8, 2, 2, 1, 1, 6, 0.0, 999, 1);
    CHECK(brute_force_support(one.Theta[0], one.R[0].col(0), 2) == one.supports[0]);
}

TEST_CASE("per-subcarrier and joint variants coincide where they should", "[jmu]")
{
    const Problem one = make_problem(64, 5, 3, 4, 1, 24, 0.01, 21);
    EstimatorConfig cfg;
    cfg.gamma_th = 0.01;
    const auto a = jmumc_omp<double>(one.R, one.Theta, cfg);
    const auto b = jmu_omp<double>(one.R, one.Theta, cfg);
    CHECK(a.supports == b.supports);
    CHECK((a.H_hat[0] - b.H_hat[0]).norm() == 0.0);

    // without interfering cells the single-cell model is the full model
    const Problem multi = make_problem(64, 5, 3, 4, 3, 24, 0.01, 22);
    const auto c = jmu_omp<double>(multi.R, multi.Theta, cfg);
    const auto d = single_cell_joint_omp<double>(multi.R, multi.Theta, cfg);
    for (std::size_t p = 0; p < c.H_hat.size(); ++p)
        CHECK((c.H_hat[p] - d.H_hat[p]).norm() == 0.0);
}

TEST_CASE("per-subcarrier recovery finds the common support at generous G", "[jmu]")
{
    // G = 4 s |pi| with |pi| = 1
    int consistent = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t)
    {
        const Problem pr = make_problem(128, 6, 6, 10, 4, 24, 0.0, 700 + static_cast<std::uint64_t>(t), 1);
        EstimatorConfig cfg;
        cfg.gamma_th = 1e-6;
        const auto est = jmu_omp<double>(pr.R, pr.Theta, cfg);
        bool same = true;
        for (const auto &per_p : est.subcarrier_supports)
            same = same && per_p == pr.supports;
        consistent += same ? 1 : 0;
    }
    CHECK(consistent >= 95);
}

TEST_CASE("structural invariants of the greedy loop", "[jmumc][invariants]")
{
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        const Problem pr = make_problem(64, 6, 4, 6, 4, 30, 0.05, 40 + seed);
        EstimatorConfig cfg;
        cfg.gamma_th = 0.01;
        const auto est = jmumc_omp<double>(pr.R, pr.Theta, cfg);

        for (std::size_t j = 1; j < est.trace.size(); ++j)
            CHECK(est.trace[j] < est.trace[j - 1]);
        // one index at most per iteration
        for (const auto &s : est.supports)
            CHECK(static_cast<int>(s.size()) <= est.iterations);

        for (std::size_t p = 0; p < est.H_hat.size(); ++p)
            for (Index k = 0; k < 6; ++k)
            {
                const auto &omega = est.supports[static_cast<std::size_t>(k)];
                for (Index m = 0; m < 64; ++m)
                    if (!std::binary_search(omega.begin(), omega.end(), m))
                        CHECK(est.H_hat[p](m, k) == std::complex<double>(0.0));
                if (omega.empty())
                    continue;
                // least-squares optimality on the selected columns
                CMatrixd A(30, static_cast<Index>(omega.size()));
                CVectord g(static_cast<Index>(omega.size()));
                for (std::size_t j = 0; j < omega.size(); ++j)
                {
                    A.col(static_cast<Index>(j)) = pr.Theta[p].col(omega[j]);
                    g(static_cast<Index>(j)) = est.H_hat[p](omega[j], k);
                }
                const CVectord r = pr.R[p].col(k);
                CHECK((A.adjoint() * (r - A * g)).norm() < 1e-8 * A.norm() * r.norm());
            }
    }
}

TEST_CASE("support size is capped by the number of measurements", "[jmumc]")
{
    const Problem pr = make_problem(64, 6, 6, 2, 2, 8, 1.0, 77);
    EstimatorConfig cfg;
    cfg.gamma_th = 0.0;
    const auto est = jmumc_omp<double>(pr.R, pr.Theta, cfg);
    for (const auto &s : est.supports)
        CHECK(s.size() <= 8);

    EstimatorConfig few;
    few.max_iter = 2;
    const auto capped = jmumc_omp<double>(pr.R, pr.Theta, few);
    CHECK(capped.iterations <= 2);
    for (const auto &s : capped.supports)
        CHECK(s.size() <= 2);
}

TEST_CASE("dependent columns take the minimum-norm path", "[jmumc]")
{
    Rng rng = make_substream(3, {});
    CMatrixd Theta(6, 5);
    for (Index i = 0; i < Theta.size(); ++i)
        Theta.data()[i] = complex_gaussian<double>(rng, 1.0);
    Theta.col(3) = Theta.col(1); // duplicate atom
    CMatrixd R = Theta.col(1) * std::complex<double>(2.0, -1.0) + Theta.col(4) * 0.5;
    const std::vector<CMatrixd> Rs{R};
    const std::vector<CMatrixd> Ts{Theta};

    EstimatorConfig cfg;
    cfg.gamma_th = 0.0;
    const auto est = jmumc_omp<double>(Rs, Ts, cfg);
    CHECK(est.H_hat[0].allFinite());
    CHECK((Theta * est.H_hat[0] - R).norm() < 1e-10 * R.norm());

    const auto oracle = oracle_ls<double>(Rs, Ts, {SupportSet{1, 3, 4}});
    CHECK(oracle.degenerate);
    // minimum norm splits the weight evenly over the duplicated pair
    CHECK(std::abs(oracle.H_hat[0](1, 0) - oracle.H_hat[0](3, 0)) < 1e-10);
    CHECK(std::abs(oracle.H_hat[0](1, 0) - std::complex<double>(1.0, -0.5)) < 1e-10);
}

TEST_CASE("oracle least squares", "[oracle]")
{
    const Problem clean = make_problem(64, 6, 4, 4, 3, 20, 0.0, 88);
    const auto exact = oracle_ls<double>(clean.R, clean.Theta, clean.supports);
    CHECK(relative_error(exact.H_hat, clean.H) < 1e-12);

    const Problem noisy = make_problem(64, 6, 4, 4, 3, 20, 0.1, 89);
    const auto est = oracle_ls<double>(noisy.R, noisy.Theta, noisy.supports);
    for (std::size_t p = 0; p < 3; ++p)
        for (Index k = 0; k < 4; ++k)
        {
            const auto &omega = noisy.supports[static_cast<std::size_t>(k)];
            CMatrixd A(20, 6);
            CVectord g(6);
            for (Index j = 0; j < 6; ++j)
            {
                A.col(j) = noisy.Theta[p].col(omega[static_cast<std::size_t>(j)]);
                g(j) = est.H_hat[p](omega[static_cast<std::size_t>(j)], k);
            }
            const CVectord r = noisy.R[p].col(k);
            CHECK((A.adjoint() * (r - A * g)).cwiseAbs().maxCoeff() < 1e-10 * A.norm() * r.norm());
            // projection oracle: the normal equations solved independently
            const CVectord ref = (A.adjoint() * A).ldlt().solve(A.adjoint() * r);
            CHECK((g - ref).norm() < 1e-9 * ref.norm());
        }

    const std::vector<SupportSet> none(4);
    const auto zero = oracle_ls<double>(noisy.R, noisy.Theta, none);
    for (const auto &H : zero.H_hat)
        CHECK(H.norm() == 0.0);

    std::vector<SupportSet> too_big(4);
    for (Index m = 0; m < 21; ++m)
        too_big[0].push_back(m);
    CHECK_THROWS_AS(oracle_ls<double>(noisy.R, noisy.Theta, too_big), std::invalid_argument);
}

TEST_CASE("shape mismatches are rejected", "[errors]")
{
    const std::vector<CMatrixd> R{CMatrixd::Zero(5, 2)};
    const std::vector<CMatrixd> bad{CMatrixd::Zero(6, 10)};
    CHECK_THROWS_AS(jmumc_omp<double>(R, bad, EstimatorConfig{}), std::invalid_argument);
    const std::vector<CMatrixd> none;
    CHECK_THROWS_AS(jmu_omp<double>(R, none, EstimatorConfig{}), std::invalid_argument);
    EstimatorConfig negative;
    negative.gamma_th = -1;
    CHECK_THROWS_AS(jmumc_omp<double>(R, R, negative), std::invalid_argument);
}

TEST_CASE("nmse reference values", "[nmse]")
{
    Rng rng = make_substream(5, {});
    std::vector<CMatrixd> H(2, CMatrixd(4, 3));
    for (auto &h : H)
        for (Index i = 0; i < h.size(); ++i)
            h.data()[i] = complex_gaussian<double>(rng, 1.0);
    std::vector<CMatrixd> zero(2, CMatrixd::Zero(4, 3));
    std::vector<CMatrixd> half = H;
    for (auto &h : half)
        h *= 0.5;

    CHECK(nmse_db<double>(H, H) == kNmseFloorDb);
    CHECK_THAT(nmse_db<double>(zero, H), WithinAbs(0.0, 1e-12));
    CHECK_THAT(nmse_db<double>(half, H), WithinAbs(10.0 * std::log10(0.25), 1e-12));
    CHECK(std::isnan(nmse_db<double>(H, zero)));
    CHECK(ratio_to_db(1e-40) == kNmseFloorDb);
}
