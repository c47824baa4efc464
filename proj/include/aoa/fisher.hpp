// SPDX-License-Identifier: Apache-2.0
//
// aoa-lab: angle-of-arrival bounds and antenna selection for massive MIMO arrays
// Copyright (C) 2026 The aoa-lab Authors
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

#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "aoa/array_model.hpp"

namespace aoa
{
    enum class CrlbMode
    {
        exact,
        deterministic
    };

    struct CrlbReport
    {
        Eigen::MatrixXd fim;       // K x K, 1/rad^2
        Eigen::VectorXd crlb_diag; // rad^2
        double trace = 0.0;
        CrlbMode mode = CrlbMode::exact;
    };

    /// Diagonal of the S matrix: S_kk = ((|h_d|^2 + 2 sigma_h^2) rho_k sin^2(theta_k))^-1.
    struct SMatrix
    {
        Eigen::VectorXd diag;
    };

    /// How the receiving antennas are chosen for the closed-form bound.
    struct SubsetSpec
    {
        enum class Kind
        {
            full,
            first,
            furthest,
            general
        };

        Kind kind = Kind::full;
        int size = 0;                          // F for first / furthest
        std::vector<int> indices;              // general only

        static SubsetSpec full() { return {}; }
        static SubsetSpec first(int f) { return {Kind::first, f, {}}; }
        static SubsetSpec furthest(int f) { return {Kind::furthest, f, {}}; }
        static SubsetSpec general(const AntennaSubset &s)
        {
            return {Kind::general, s.size(), {s.indices().begin(), s.indices().end()}};
        }
    };

    /// Exact rational num/den such that CRLB_kk = (num/den) / beta^2 * S_kk.
    struct GeometryFactor
    {
        std::int64_t num = 0;
        std::int64_t den = 1;
        double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    };

    /// X = dw/dtheta, w = G s. X_{i,k} = j beta x_i sin(theta_k) h_{x_i,k} s_k sqrt(l_k) e^{-j x_i beta cos theta_k} / sqrt(F)
    Eigen::MatrixXcd sensitivity_matrix(const Scenario &scenario, const ChannelRealization &channel,
                                        const AntennaSubset &subset);

    /// J = (2/sigma_n^2) Re(X^H X), CRLB = J^-1. Throws SingularFim for a degenerate geometry.
    CrlbReport exact_crlb(const Scenario &scenario, const ChannelRealization &channel, const AntennaSubset &subset);

    SMatrix s_matrix(const Scenario &scenario);

    /// Geometry factor of the closed-form bound for a subset choice on an M-element array.
    ///   full:       3 / ((M-1)(2M-1))
    ///   first(F):   3 / ((F-1)(2F-1))
    ///   furthest(F):3 / (6M(M-F-1) + (F+1)(2F+1))
    ///   general(S): F / (2 sum_{x in S} x^2)
    GeometryFactor geometry_factor(const SubsetSpec &spec, int num_antennas);

    /// Large-array limit of the CRLB for the given subset choice.
    CrlbReport deterministic_crlb(const Scenario &scenario, const SubsetSpec &spec);
}
