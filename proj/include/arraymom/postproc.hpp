// Copyright 2026 arraymom authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ARRAYMOM_POSTPROC_HPP
#define ARRAYMOM_POSTPROC_HPP

#include <vector>

#include "arraymom/linsolve.hpp"

namespace arraymom {

// Far-field observation directions with Ludwig-3 co/cross polarization
// vectors. `weights` holds solid-angle weights when the grid covers the
// sphere; cut grids leave it empty.
struct DirectionGrid {
  std::vector<Vec3> dirs;
  std::vector<Vec3> co, cx;
  std::vector<double> theta, phi;  // radians
  std::vector<double> weights;
  int size() const { return static_cast<int>(dirs.size()); }
};

// Full-sphere grid with midpoint theta samples and sin(theta) dTheta dPhi
// weights. copolAngle is the azimuth of the co-polarization reference axis
// (0 = x).
DirectionGrid sphereGrid(int nTheta, int nPhi, double copolAngle);

// Great-circle cut through broadside in the plane of azimuth phi:
// theta in [-90, 90] degrees mapped onto (theta, phi) and (|theta|, phi+pi).
DirectionGrid phiCutGrid(double phi, int nPoints, double copolAngle);

// Radiation integrals of one component's basis functions against the phase
// factor exp(jk rhat.r'), projected on both polarizations. co/cx are
// (directions x edges).
struct FarfieldTensor {
  MatrixXc co, cx;
};

FarfieldTensor componentFarfieldTensor(const DesignatedData& comp,
                                       const DirectionGrid& grid,
                                       const KernelParams& params);

struct Farfield {
  VectorXc co, cx;  // per direction, volts
};

// Far-field of the whole array: the phase-shifted contraction of each
// component's tensor with its parts' current coefficients, scaled by
// -j k eta. `excitation` combines the solution columns.
Farfield arrayFarfield(const std::vector<FarfieldTensor>& tensors,
                       const MatrixXc& current, const VectorXc& excitation,
                       const ArrayModel& model, const DirectionGrid& grid,
                       const KernelParams& params);

// Tensors for all nine components on one grid (empty components yield empty
// tensors).
std::vector<FarfieldTensor> allComponentTensors(const ArrayModel& model,
                                                const DirectionGrid& grid,
                                                const KernelParams& params);

// One pattern per solution column (ports excited one at a time).
std::vector<Farfield> embeddedElementPatterns(
    const std::vector<FarfieldTensor>& tensors, const MatrixXc& current,
    const ArrayModel& model, const DirectionGrid& grid,
    const KernelParams& params);

// Port network from the solved unit-voltage currents: Y = L Ihat L with
// L = diag(1/l_feed), Z_port = Y^-1, and the power-wave scattering matrix
// for real per-port reference impedances.
struct NetworkData {
  MatrixXc portCurrent;  // Ihat, p x p
  MatrixXc y, zPort, s;
  Eigen::VectorXd z0;
};

NetworkData portNetwork(const SolveResult& solution, const ExcitationSet& ex,
                        const ArrayModel& model, const Eigen::VectorXd& z0);

// Total active reflection coefficient (b = S a).
double tarc(const MatrixXc& s, const VectorXc& a);

// 4 pi (|F_co|^2 + |F_cx|^2) / integral over the weighted grid.
Eigen::VectorXd directivity(const Farfield& f, const DirectionGrid& grid);

// Solid-angle integral of |F|^2 on a weighted grid (the directivity
// denominator, reusable for cuts).
double totalRadiationIntegral(const Farfield& f, const DirectionGrid& grid);

Eigen::VectorXd directivityFromPower(const Farfield& f, double integral);

// Per-triangle surface current samples at triangle centroids. With
// mergeShared, coincident triangles of different parts are merged by summing
// their current vectors, so each physical triangle appears exactly once.
struct SurfaceCurrentField {
  std::vector<Vec3> centroid;
  std::vector<Eigen::Vector3cd> current;
  std::vector<double> magnitude;
};

SurfaceCurrentField exportSurfaceCurrent(const MatrixXc& current,
                                         const VectorXc& excitation,
                                         const ArrayModel& model,
                                         bool mergeShared = true);

}  // namespace arraymom

#endif  // ARRAYMOM_POSTPROC_HPP
