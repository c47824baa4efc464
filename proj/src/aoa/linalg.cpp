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

#include "aoa/linalg.hpp"
#include "aoa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

namespace aoa
{
    std::optional<Eigen::MatrixXd> invert_pivoted(const Eigen::MatrixXd &a, double rel_tol)
    {
        if (a.rows() != a.cols())
            throw std::invalid_argument("invert_pivoted: matrix must be square");

        const Eigen::Index n = a.rows();
        const double scale = a.cwiseAbs().maxCoeff();
        if (n == 0 || !(scale > 0.0))
            return std::nullopt;
        const double threshold = rel_tol * scale;

        Eigen::MatrixXd work = a;
        Eigen::MatrixXd inv = Eigen::MatrixXd::Identity(n, n);
        for (Eigen::Index col = 0; col < n; ++col)
        {
            Eigen::Index pivot = col;
            for (Eigen::Index r = col + 1; r < n; ++r)
                if (std::abs(work(r, col)) > std::abs(work(pivot, col)))
                    pivot = r;
            if (!(std::abs(work(pivot, col)) >= threshold))
                return std::nullopt;
            if (pivot != col)
            {
                work.row(pivot).swap(work.row(col));
                inv.row(pivot).swap(inv.row(col));
            }
            const double d = work(col, col);
            work.row(col) /= d;
            inv.row(col) /= d;
            for (Eigen::Index r = 0; r < n; ++r)
            {
                if (r == col)
                    continue;
                const double f = work(r, col);
                if (f == 0.0)
                    continue;
                work.row(r) -= f * work.row(col);
                inv.row(r) -= f * inv.row(col);
            }
        }
        return inv;
    }

    namespace
    {
        double off_diagonal_norm(const Eigen::MatrixXcd &a)
        {
            double s = 0.0;
            for (Eigen::Index j = 0; j < a.cols(); ++j)
                for (Eigen::Index i = 0; i < a.rows(); ++i)
                    if (i != j)
                        s += std::norm(a(i, j));
            return std::sqrt(s);
        }
    }

    HermitianEigen hermitian_evd(const Eigen::MatrixXcd &r)
    {
        if (r.rows() != r.cols())
            throw std::invalid_argument("hermitian_evd: matrix must be square");

        const Eigen::Index n = r.rows();
        const double norm = r.norm();
        if ((r - r.adjoint()).norm() > 1e-10 * std::max(norm, 1e-300))
            throw std::invalid_argument("hermitian_evd: matrix is not Hermitian");

        Eigen::MatrixXcd a = 0.5 * (r + r.adjoint());
        Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);
        const double target = 1e-12 * norm;

        HermitianEigen out;
        int sweep = 0;
        while (off_diagonal_norm(a) > target)
        {
            if (sweep == 100)
                throw NumericalFailure("hermitian_evd: no convergence after 100 sweeps");
            ++sweep;
            for (Eigen::Index p = 0; p < n - 1; ++p)
            {
                for (Eigen::Index q = p + 1; q < n; ++q)
                {
                    const std::complex<double> z = a(p, q);
                    const double mag = std::abs(z);
                    if (mag == 0.0)
                        continue;

                    // Phase rotation makes the (p,q) entry real, then a real Jacobi rotation zeroes it.
                    const std::complex<double> phase = z / mag; // e^{j phi}
                    const double app = a(p, p).real();
                    const double aqq = a(q, q).real();
                    const double tau = (aqq - app) / (2.0 * mag);
                    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const double s = t * c;
                    const std::complex<double> pc = std::conj(phase); // e^{-j phi}

                    // columns: A <- A U, U = [[c, s], [-s e^{-j phi}, c e^{-j phi}]]
                    for (Eigen::Index k = 0; k < n; ++k)
                    {
                        const std::complex<double> akp = a(k, p);
                        const std::complex<double> akq = a(k, q);
                        a(k, p) = c * akp - s * pc * akq;
                        a(k, q) = s * akp + c * pc * akq;
                    }
                    // rows: A <- U^H A
                    for (Eigen::Index k = 0; k < n; ++k)
                    {
                        const std::complex<double> apk = a(p, k);
                        const std::complex<double> aqk = a(q, k);
                        a(p, k) = c * apk - s * phase * aqk;
                        a(q, k) = s * apk + c * phase * aqk;
                    }
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    a(p, p) = a(p, p).real();
                    a(q, q) = a(q, q).real();

                    for (Eigen::Index k = 0; k < n; ++k)
                    {
                        const std::complex<double> vkp = v(k, p);
                        const std::complex<double> vkq = v(k, q);
                        v(k, p) = c * vkp - s * pc * vkq;
                        v(k, q) = s * vkp + c * pc * vkq;
                    }
                }
            }
        }

        std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() > a(j, j).real(); });

        out.values.resize(n);
        out.vectors.resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const Eigen::Index src = order[static_cast<std::size_t>(i)];
            out.values(i) = a(src, src).real();
            out.vectors.col(i) = v.col(src);
        }
        out.sweeps = sweep;
        return out;
    }
}
