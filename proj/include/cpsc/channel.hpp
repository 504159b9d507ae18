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

#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "cpsc/random.hpp"

namespace cpsc
{

// Rectangular grid of fluid-antenna ports spanning w1 x w2 wavelengths.
//
// Ports are addressed 0-based here: port (i, j) with i < n1, j < n2 has
// linear index j + i * n2.
class PortGrid
{
  public:
    PortGrid(std::size_t n1, std::size_t n2, double w1, double w2);

    std::size_t n1() const { return n1_; }
    std::size_t n2() const { return n2_; }
    double w1() const { return w1_; }
    double w2() const { return w2_; }
    std::size_t size() const { return n1_ * n2_; }

    std::size_t linear_index(std::size_t i, std::size_t j) const;
    std::size_t row_of(std::size_t index) const { return index / n2_; }
    std::size_t col_of(std::size_t index) const { return index % n2_; }

    // Port position in wavelengths along each surface axis. A dimension with
    // a single port has zero extent.
    double offset1(std::size_t i) const;
    double offset2(std::size_t j) const;

  private:
    std::size_t n1_;
    std::size_t n2_;
    double w1_;
    double w2_;
};

struct ChannelModel
{
    double rice_factor = 0.1;
    double channel_power = 1.0;
    std::size_t num_bs_antennas = 1;
    PortGrid grid{1, 1, 1.0, 1.0};

    void validate() const;
};

// Port-to-BS coefficients of one user: M rows (BS antennas) by N columns
// (ports).
struct ChannelMatrix
{
    Eigen::MatrixXcd entries;
    std::size_t user_id = 0;

    std::size_t num_bs_antennas() const { return static_cast<std::size_t>(entries.rows()); }
    std::size_t num_ports() const { return static_cast<std::size_t>(entries.cols()); }
};

// Users are scattered over a square in the horizontal plane whose centre
// lies `distance` metres from the BS along the BS broadside (+x). The BS
// array is a half-wavelength ULA along the y axis.
struct Deployment
{
    double side = 100.0;
    double distance = 200.0;
};

struct UserGeometry
{
    double x = 0.0;
    double y = 0.0;
    // Rotation of the UE surface about the vertical axis.
    double orientation = 0.0;
    // Angle of arrival at the BS array, measured from broadside.
    double bs_azimuth = 0.0;
    // Departure direction towards the BS in the UE surface frame.
    double los_azimuth = 0.0;
    double los_elevation = 0.0;
};

UserGeometry make_user_geometry(double x, double y, double orientation);
UserGeometry draw_user_geometry(const Deployment &deployment, CounterRng &rng);

// Bessel spatial covariance of the NLoS component across ports:
//   J[k1,k2] = omega * j0(2*pi*d(k1,k2)), d in wavelengths.
Eigen::MatrixXd spatial_covariance(const PortGrid &grid, double omega);

// Deterministic plane-wave LoS component with entries of modulus sqrt(omega).
Eigen::MatrixXcd los_component(const ChannelModel &model, const UserGeometry &geom);

// Holds the colouring factor F (N x r, F F^T = J) so the eigendecomposition
// is paid once per configuration. Immutable after construction and safe to
// share between worker threads.
class ChannelGenerator
{
  public:
    explicit ChannelGenerator(ChannelModel model);

    const ChannelModel &model() const { return model_; }
    const Eigen::MatrixXd &covariance() const { return covariance_; }
    const Eigen::MatrixXd &factor() const { return factor_; }
    // Most negative eigenvalue seen before clipping (0 if J was PSD).
    double clipped_eigenvalue() const { return clipped_; }

    // NLoS part only: M rows, each CN(0, J), independent across rows.
    Eigen::MatrixXcd sample_nlos(CounterRng &rng) const;

    ChannelMatrix sample(const UserGeometry &geom, CounterRng &rng, std::size_t user_id = 0) const;

  private:
    ChannelModel model_;
    Eigen::MatrixXd covariance_;
    Eigen::MatrixXd factor_;
    double clipped_ = 0.0;
};

ChannelMatrix sample_channel(const ChannelModel &model, const UserGeometry &geom, CounterRng &rng);

// Debug dump, one row per coefficient: m,n,re,im (1-based indices).
void write_channel_csv(std::ostream &out, const ChannelMatrix &h);

} // namespace cpsc
