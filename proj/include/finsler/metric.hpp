#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "finsler/fields.hpp"

namespace finsler {

// Dense symmetric 3-tensor, indexed A(i,j,k).
class Tensor3 {
 public:
  explicit Tensor3(int dim) : dim_(dim), a_(dim * dim * dim, 0.0) {}

  int dim() const { return dim_; }
  double& operator()(int i, int j, int k) { return a_[(i * dim_ + j) * dim_ + k]; }
  double operator()(int i, int j, int k) const { return a_[(i * dim_ + j) * dim_ + k]; }

  double maxAbs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
  }

  // Contraction over the first slot: (A v)_jk = A_ijk v^i.
  Mat contractFirst(const Vec& v) const {
    Mat out = Mat::Zero(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j)
        for (int k = 0; k < dim_; ++k) out(j, k) += (*this)(i, j, k) * v[i];
    return out;
  }

 private:
  int dim_;
  std::vector<double> a_;
};

// Randers data F = sqrt(h[y,y]) + omega[y] with |omega|_h < 1.
struct RandersData {
  RiemannianField h;
  OneFormField omega;

  double omegaNorm(const Vec& x) const;  // sqrt(omega h^{-1} omega) at x
};

// Finsler metric on a chart: either Randers (closed-form tensors) or a
// generic positively 2-homogeneous energy evaluated by finite differences.
class FinslerMetric {
 public:
  using Evaluator = std::function<double(const Vec&, const Vec&)>;

  // Validates |omega|_x < 1 on the bounds grid when every axis is sampleable;
  // pass validateRes to control the grid, or leave charts unbounded to skip.
  static FinslerMetric randers(ChartDomain domain, RandersData data,
                               const std::vector<int>* validateRes = nullptr);
  static FinslerMetric generic(ChartDomain domain, Evaluator F);

  const ChartDomain& domain() const { return domain_; }
  bool isRanders() const { return randers_.has_value(); }
  const RandersData& randersData() const;

  // Same metric with y -> -y (Randers: omega sign flip).
  FinslerMetric reversed() const;

  double value(const Vec& x, const Vec& y) const;          // F(x, y)
  double energyDensity(const Vec& x, const Vec& y) const;  // G = F^2

  Vec dGdy(const Vec& x, const Vec& y) const;
  Vec dGdx(const Vec& x, const Vec& y) const;

  Mat fundamentalTensor(const Vec& x, const Vec& y) const;    // closed form on Randers
  Mat fundamentalTensorFD(const Vec& x, const Vec& y) const;  // y-Hessian of G by FD

  Tensor3 cartanTensor(const Vec& x, const Vec& y) const;
  Tensor3 cartanTensorFD(const Vec& x, const Vec& y) const;

  // lambda(x) = sup_y F(x,-y)/F(x,y) by dense directional sampling with
  // golden-section refinement.
  double reversibility(const Vec& x, std::uint64_t seed = 0x9e3779b9) const;

  void checkOmegaNormOnGrid(const std::vector<int>& res) const;  // throws Error at >= 1

 private:
  ChartDomain domain_;
  std::optional<RandersData> randers_;
  Evaluator generic_;

  void requireNonDegenerate(const Vec& y) const;
};

}  // namespace finsler
