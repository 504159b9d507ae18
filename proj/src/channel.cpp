// SPDX-License-Identifier: Apache-2.0
//
// cpsc-fama: link-level simulator for codebook-based fluid antenna uplink access
// Copyright (C) 2026 The cpsc-fama Authors
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

#include "cpsc/channel.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>
#include <vector>

#include "cpsc/error.hpp"

namespace cpsc
{

PortGrid::PortGrid(std::size_t n1, std::size_t n2, double w1, double w2)
    : n1_(n1), n2_(n2), w1_(w1), w2_(w2)
{
    if (n1 == 0 || n2 == 0)
        throw InvalidArgument("PortGrid: port counts must be >= 1");
    if (!(w1 > 0.0) || !(w2 > 0.0) || !std::isfinite(w1) || !std::isfinite(w2))
        throw InvalidArgument("PortGrid: surface dimensions must be finite and > 0");
}

std::size_t PortGrid::linear_index(std::size_t i, std::size_t j) const
{
    if (i >= n1_ || j >= n2_)
        throw InvalidArgument("PortGrid::linear_index: port outside grid");
    return j + i * n2_;
}

double PortGrid::offset1(std::size_t i) const
{
    return n1_ == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n1_ - 1) * w1_;
}

double PortGrid::offset2(std::size_t j) const
{
    return n2_ == 1 ? 0.0 : static_cast<double>(j) / static_cast<double>(n2_ - 1) * w2_;
}

void ChannelModel::validate() const
{
    if (!(rice_factor >= 0.0) || !std::isfinite(rice_factor))
        throw InvalidArgument("ChannelModel: Rice factor must be finite and >= 0");
    if (!(channel_power > 0.0) || !std::isfinite(channel_power))
        throw InvalidArgument("ChannelModel: channel power must be finite and > 0");
    if (num_bs_antennas == 0)
        throw InvalidArgument("ChannelModel: need at least one BS antenna");
}

UserGeometry make_user_geometry(double x, double y, double orientation)
{
    UserGeometry g;
    g.x = x;
    g.y = y;
    g.orientation = orientation;
    g.bs_azimuth = std::atan2(y, x);
    g.los_azimuth = std::atan2(-y, -x) - orientation;
    // BS and UEs share one height; path loss and elevation are not modelled.
    g.los_elevation = 0.0;
    return g;
}

UserGeometry draw_user_geometry(const Deployment &deployment, CounterRng &rng)
{
    double half = deployment.side / 2.0;
    double x = uniform_real(rng, deployment.distance - half, deployment.distance + half);
    double y = uniform_real(rng, -half, half);
    double orientation = uniform_real(rng, 0.0, 2.0 * std::numbers::pi);
    return make_user_geometry(x, y, orientation);
}

Eigen::MatrixXd spatial_covariance(const PortGrid &grid, double omega)
{
    if (!(omega > 0.0))
        throw InvalidArgument("spatial_covariance: omega must be > 0");
    const std::size_t n = grid.size();
    Eigen::MatrixXd cov(n, n);
    for (std::size_t k1 = 0; k1 < n; ++k1)
    {
        cov(k1, k1) = omega;
        for (std::size_t k2 = k1 + 1; k2 < n; ++k2)
        {
            double d1 = grid.offset1(grid.row_of(k1)) - grid.offset1(grid.row_of(k2));
            double d2 = grid.offset2(grid.col_of(k1)) - grid.offset2(grid.col_of(k2));
            double v = omega * std::cyl_bessel_j(0.0, 2.0 * std::numbers::pi * std::sqrt(d1 * d1 + d2 * d2));
            cov(k1, k2) = v;
            cov(k2, k1) = v;
        }
    }
    return cov;
}

Eigen::MatrixXcd los_component(const ChannelModel &model, const UserGeometry &geom)
{
    const auto &grid = model.grid;
    const std::size_t m_count = model.num_bs_antennas;
    const std::size_t n_count = grid.size();
    const double amp = std::sqrt(model.channel_power);
    const double two_pi = 2.0 * std::numbers::pi;

    Eigen::VectorXd bs_phase(m_count);
    for (std::size_t m = 0; m < m_count; ++m)
        bs_phase(m) = std::numbers::pi * static_cast<double>(m) * std::sin(geom.bs_azimuth);

    const double c1 = std::cos(geom.los_azimuth) * std::cos(geom.los_elevation);
    const double c2 = std::sin(geom.los_azimuth) * std::cos(geom.los_elevation);
    Eigen::VectorXd port_phase(n_count);
    for (std::size_t n = 0; n < n_count; ++n)
        port_phase(n) = two_pi * (grid.offset1(grid.row_of(n)) * c1 + grid.offset2(grid.col_of(n)) * c2);

    Eigen::MatrixXcd los(m_count, n_count);
    for (std::size_t n = 0; n < n_count; ++n)
        for (std::size_t m = 0; m < m_count; ++m)
            los(m, n) = std::polar(amp, bs_phase(m) + port_phase(n));
    return los;
}

ChannelGenerator::ChannelGenerator(ChannelModel model) : model_(std::move(model))
{
    model_.validate();
    covariance_ = spatial_covariance(model_.grid, model_.channel_power);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance_);
    if (eig.info() != Eigen::Success)
    {
        std::ostringstream msg;
        msg << "ChannelGenerator: eigendecomposition of the " << covariance_.rows() << "x" << covariance_.cols()
            << " port covariance failed (diag " << model_.channel_power << ", max |J| "
            << covariance_.cwiseAbs().maxCoeff() << ")";
        throw NumericalError(msg.str());
    }

    const Eigen::VectorXd &values = eig.eigenvalues();
    const double top = values.maxCoeff();
    clipped_ = std::min(0.0, values.minCoeff());

    // Eigenvalues at or below round-off carry no power; dropping them keeps
    // the sampler at the numerical rank of J.
    const double floor = top * 1e-13;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = values.size() - 1; i >= 0; --i)
        if (values(i) > floor)
            keep.push_back(i);

    factor_.resize(covariance_.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c)
        factor_.col(static_cast<Eigen::Index>(c)) = eig.eigenvectors().col(keep[c]) * std::sqrt(values(keep[c]));
}

Eigen::MatrixXcd ChannelGenerator::sample_nlos(CounterRng &rng) const
{
    const auto rows = static_cast<Eigen::Index>(model_.num_bs_antennas);
    const Eigen::Index rank = factor_.cols();
    NormalSource normal(rng);
    Eigen::MatrixXd white_re(rows, rank);
    Eigen::MatrixXd white_im(rows, rank);
    for (Eigen::Index m = 0; m < rows; ++m)
        for (Eigen::Index k = 0; k < rank; ++k)
        {
            auto z = normal.next_complex();
            white_re(m, k) = z.real();
            white_im(m, k) = z.imag();
        }
    Eigen::MatrixXcd out(rows, factor_.rows());
    out.real() = white_re * factor_.transpose();
    out.imag() = white_im * factor_.transpose();
    return out;
}

ChannelMatrix ChannelGenerator::sample(const UserGeometry &geom, CounterRng &rng, std::size_t user_id) const
{
    ChannelMatrix h;
    h.user_id = user_id;
    h.entries = sample_nlos(rng);
    const double l = model_.rice_factor;
    if (l > 0.0)
    {
        const double los_weight = std::sqrt(l / (1.0 + l));
        const double nlos_weight = std::sqrt(1.0 / (1.0 + l));
        h.entries = los_weight * los_component(model_, geom) + nlos_weight * h.entries;
    }
    return h;
}

ChannelMatrix sample_channel(const ChannelModel &model, const UserGeometry &geom, CounterRng &rng)
{
    return ChannelGenerator(model).sample(geom, rng);
}

void write_channel_csv(std::ostream &out, const ChannelMatrix &h)
{
    out << "m,n,re,im\n";
    char buf[96];
    for (Eigen::Index n = 0; n < h.entries.cols(); ++n)
        for (Eigen::Index m = 0; m < h.entries.rows(); ++m)
        {
            std::snprintf(buf, sizeof buf, "%lld,%lld,%.17g,%.17g\n", static_cast<long long>(m + 1),
                          static_cast<long long>(n + 1), h.entries(m, n).real(), h.entries(m, n).imag());
            out << buf;
        }
}

} // namespace cpsc
