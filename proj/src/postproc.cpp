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

#include "arraymom/postproc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/LU>

#include "arraymom/quadrature.hpp"

namespace arraymom {

namespace {

Vec3 sphDir(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

// Ludwig-3 unit vectors for the reference azimuth phi0.
void ludwig3(double theta, double phi, double phi0, Vec3* co, Vec3* cx) {
  const Vec3 thetaHat(std::cos(theta) * std::cos(phi),
                      std::cos(theta) * std::sin(phi), -std::sin(theta));
  const Vec3 phiHat(-std::sin(phi), std::cos(phi), 0.0);
  const double c = std::cos(phi - phi0), s = std::sin(phi - phi0);
  *co = c * thetaHat - s * phiHat;
  *cx = s * thetaHat + c * phiHat;
}

void pushDirection(DirectionGrid& g, double theta, double phi, double weight,
                   double copolAngle) {
  Vec3 co, cx;
  ludwig3(theta, phi, copolAngle, &co, &cx);
  g.dirs.push_back(sphDir(theta, phi));
  g.co.push_back(co);
  g.cx.push_back(cx);
  g.theta.push_back(theta);
  g.phi.push_back(phi);
  if (weight >= 0.0) g.weights.push_back(weight);
}

}  // namespace

DirectionGrid sphereGrid(int nTheta, int nPhi, double copolAngle) {
  if (nTheta < 2 || nPhi < 2)
    throw UserError("sphereGrid: need at least 2x2 directions");
  DirectionGrid g;
  const double dTheta = M_PI / nTheta;
  const double dPhi = 2.0 * M_PI / nPhi;
  for (int it = 0; it < nTheta; ++it) {
    const double theta = (it + 0.5) * dTheta;
    const double w = std::sin(theta) * dTheta * dPhi;
    for (int ip = 0; ip < nPhi; ++ip) pushDirection(g, theta, ip * dPhi, w, copolAngle);
  }
  return g;
}

DirectionGrid phiCutGrid(double phi, int nPoints, double copolAngle) {
  if (nPoints < 2) throw UserError("phiCutGrid: need at least 2 points");
  DirectionGrid g;
  for (int i = 0; i < nPoints; ++i) {
    const double t = -M_PI / 2 + M_PI * i / (nPoints - 1);
    if (t < 0.0)
      pushDirection(g, -t, phi + M_PI, -1.0, copolAngle);
    else
      pushDirection(g, t, phi, -1.0, copolAngle);
  }
  return g;
}

FarfieldTensor componentFarfieldTensor(const DesignatedData& comp,
                                       const DirectionGrid& grid,
                                       const KernelParams& params) {
  params.validate();
  const int m = grid.size();
  const int n = comp.edgeCount();
  FarfieldTensor t;
  t.co = MatrixXc::Zero(m, n);
  t.cx = MatrixXc::Zero(m, n);
  if (n == 0) return t;
  const double k = params.wavenumber;
  const auto& rule = triangleRule(params.quadratureOrder);

  for (int e = 0; e < n; ++e) {
    const double len = comp.edgeLengths[e];
    for (int half = 0; half < 2; ++half) {
      const int tri =
          (half == 0 ? comp.intrinsicPlus[e] : comp.intrinsicMinus[e]) - 1;
      const double sign = half == 0 ? 1.0 : -1.0;
      const Vec3 free =
          comp.triVerts[tri][half == 0 ? comp.plusFreeCorner[e]
                                       : comp.minusFreeCorner[e]];
      const double scale = sign * len * 0.5;  // sign * len/(2A) * A
      for (const auto& q : rule) {
        const Vec3 r = barycentricPoint(comp.triVerts[tri], q);
        const Vec3 rho = r - free;
        const double w = q.weight * scale;
        for (int d = 0; d < m; ++d) {
          const Complex phase =
              w * std::polar(1.0, k * grid.dirs[d].dot(r));
          t.co(d, e) += phase * grid.co[d].dot(rho);
          t.cx(d, e) += phase * grid.cx[d].dot(rho);
        }
      }
    }
  }
  return t;
}

std::vector<FarfieldTensor> allComponentTensors(const ArrayModel& model,
                                                const DirectionGrid& grid,
                                                const KernelParams& params) {
  std::vector<FarfieldTensor> tensors(9);
  for (int c = 1; c <= 9; ++c)
    tensors[c - 1] = componentFarfieldTensor(model.comps.comp(c), grid, params);
  return tensors;
}

Farfield arrayFarfield(const std::vector<FarfieldTensor>& tensors,
                       const MatrixXc& current, const VectorXc& excitation,
                       const ArrayModel& model, const DirectionGrid& grid,
                       const KernelParams& params) {
  if (tensors.size() != 9)
    throw UserError("arrayFarfield: expected nine component tensors");
  if (current.cols() != excitation.size())
    throw UserError("arrayFarfield: excitation length does not match columns");
  if (current.rows() != model.totalEdges())
    throw UserError("arrayFarfield: current vector size mismatch");
  const VectorXc combined = current * excitation;
  const int m = grid.size();
  Farfield f;
  f.co = VectorXc::Zero(m);
  f.cx = VectorXc::Zero(m);
  const double k = params.wavenumber;

  for (int p = 1; p <= model.partCount(); ++p) {
    const int comp = model.partComponent(p);
    const int n = model.partEdgeCount(p);
    if (n == 0) continue;
    const FarfieldTensor& t = tensors[comp - 1];
    const VectorXc seg = combined.segment(model.edgeStart[p - 1], n);
    const Vec3 d = model.partOffset(p);
    const VectorXc co = t.co * seg;
    const VectorXc cx = t.cx * seg;
    for (int i = 0; i < m; ++i) {
      const Complex phase = std::polar(1.0, k * grid.dirs[i].dot(d));
      f.co(i) += phase * co(i);
      f.cx(i) += phase * cx(i);
    }
  }
  const Complex front(0.0, -k * params.eta);
  f.co *= front;
  f.cx *= front;
  return f;
}

std::vector<Farfield> embeddedElementPatterns(
    const std::vector<FarfieldTensor>& tensors, const MatrixXc& current,
    const ArrayModel& model, const DirectionGrid& grid,
    const KernelParams& params) {
  std::vector<Farfield> out;
  out.reserve(current.cols());
  for (int c = 0; c < current.cols(); ++c) {
    VectorXc a = VectorXc::Zero(current.cols());
    a(c) = 1.0;
    out.push_back(arrayFarfield(tensors, current, a, model, grid, params));
  }
  return out;
}

NetworkData portNetwork(const SolveResult& solution, const ExcitationSet& ex,
                        const ArrayModel& model, const Eigen::VectorXd& z0) {
  const int p = ex.portCount();
  if (solution.current.cols() != p)
    throw UserError("portNetwork: solution columns do not match ports");
  if (z0.size() != p) throw UserError("portNetwork: need one Z0 per port");
  for (int i = 0; i < p; ++i)
    if (!(z0(i) > 0.0))
      throw UserError("portNetwork: reference impedances must be positive");

  NetworkData net;
  net.z0 = z0;
  net.portCurrent = MatrixXc::Zero(p, p);
  for (int i = 0; i < p; ++i)
    net.portCurrent.row(i) = solution.current.row(ex.feedRows[i]);

  const double len =
      model.comps.comp(5).edgeLengths[ex.feedLocalEdge - 1];
  const double invLen = 1.0 / len;
  net.y = invLen * net.portCurrent * invLen;

  Eigen::PartialPivLU<MatrixXc> lu(net.y);
  const auto diag = lu.matrixLU().diagonal();
  double maxAbs = 0.0, minAbs = std::numeric_limits<double>::infinity();
  for (long i = 0; i < diag.size(); ++i) {
    maxAbs = std::max(maxAbs, std::abs(diag(i)));
    minAbs = std::min(minAbs, std::abs(diag(i)));
  }
  if (!(minAbs > 1e-14 * maxAbs))
    throw NumericError("portNetwork: singular admittance matrix");
  net.zPort = lu.inverse();

  // Power-wave scattering matrix for real reference impedances.
  MatrixXc zMinus = net.zPort, zPlus = net.zPort;
  for (int i = 0; i < p; ++i) {
    zMinus(i, i) -= z0(i);
    zPlus(i, i) += z0(i);
  }
  const MatrixXc core = zMinus * zPlus.inverse();
  net.s = MatrixXc::Zero(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      net.s(i, j) = core(i, j) * std::sqrt(z0(j) / z0(i));
  return net;
}

double tarc(const MatrixXc& s, const VectorXc& a) {
  const double an = a.norm();
  if (an == 0.0) throw UserError("tarc: zero excitation");
  return (s * a).norm() / an;
}

double totalRadiationIntegral(const Farfield& f, const DirectionGrid& grid) {
  if (grid.weights.size() != static_cast<size_t>(grid.size()))
    throw UserError("totalRadiationIntegral: grid has no solid-angle weights");
  double sum = 0.0;
  for (int i = 0; i < grid.size(); ++i)
    sum += grid.weights[i] * (std::norm(f.co(i)) + std::norm(f.cx(i)));
  return sum;
}

Eigen::VectorXd directivityFromPower(const Farfield& f, double integral) {
  if (!(integral > 0.0)) throw UserError("directivity: zero radiated power");
  Eigen::VectorXd d(f.co.size());
  for (long i = 0; i < f.co.size(); ++i)
    d(i) = 4.0 * M_PI * (std::norm(f.co(i)) + std::norm(f.cx(i))) / integral;
  return d;
}

Eigen::VectorXd directivity(const Farfield& f, const DirectionGrid& grid) {
  return directivityFromPower(f, totalRadiationIntegral(f, grid));
}

SurfaceCurrentField exportSurfaceCurrent(const MatrixXc& current,
                                         const VectorXc& excitation,
                                         const ArrayModel& model,
                                         bool mergeShared) {
  if (current.rows() != model.totalEdges())
    throw UserError("exportSurfaceCurrent: current vector size mismatch");
  if (current.cols() != excitation.size())
    throw UserError("exportSurfaceCurrent: excitation length mismatch");
  const VectorXc combined = current * excitation;

  struct Sample {
    Vec3 pos;
    Eigen::Vector3cd j;
  };
  std::vector<Sample> samples;
  for (int p = 1; p <= model.partCount(); ++p) {
    const DesignatedData& d = model.partData(p);
    if (d.empty()) continue;
    const Vec3 off = model.partOffset(p);
    std::vector<Eigen::Vector3cd> triJ(d.triCount(), Eigen::Vector3cd::Zero());
    for (int e = 0; e < d.edgeCount(); ++e) {
      const Complex coeff = combined(model.edgeStart[p - 1] + e);
      for (int half = 0; half < 2; ++half) {
        const int tri =
            (half == 0 ? d.intrinsicPlus[e] : d.intrinsicMinus[e]) - 1;
        const double sign = half == 0 ? 1.0 : -1.0;
        const Vec3 free = d.triVerts[tri][half == 0 ? d.plusFreeCorner[e]
                                                    : d.minusFreeCorner[e]];
        const Vec3 rho = d.triCentroids[tri] - free;
        triJ[tri] += coeff * sign * d.edgeLengths[e] /
                     (2.0 * d.triAreas[tri]) * rho.cast<Complex>();
      }
    }
    for (int t = 0; t < d.triCount(); ++t)
      samples.push_back({d.triCentroids[t] + off, triJ[t]});
  }

  SurfaceCurrentField field;
  if (!mergeShared) {
    for (const Sample& s : samples) {
      field.centroid.push_back(s.pos);
      field.current.push_back(s.j);
      field.magnitude.push_back(s.j.norm());
    }
    return field;
  }

  double diameter = 1.0;
  if (!samples.empty()) {
    Vec3 lo = samples[0].pos, hi = samples[0].pos;
    for (const Sample& s : samples) {
      lo = lo.cwiseMin(s.pos);
      hi = hi.cwiseMax(s.pos);
    }
    diameter = std::max((hi - lo).norm(), 1e-30);
  }
  const double tol = 1e-9 * diameter;

  std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) {
    return std::tie(a.pos.x(), a.pos.y(), a.pos.z()) <
           std::tie(b.pos.x(), b.pos.y(), b.pos.z());
  });
  for (size_t i = 0; i < samples.size();) {
    Vec3 pos = samples[i].pos;
    Eigen::Vector3cd j = samples[i].j;
    size_t k = i + 1;
    while (k < samples.size() && (samples[k].pos - pos).norm() <= tol) {
      j += samples[k].j;
      ++k;
    }
    field.centroid.push_back(pos);
    field.current.push_back(j);
    field.magnitude.push_back(j.norm());
    i = k;
  }
  return field;
}

}  // namespace arraymom
