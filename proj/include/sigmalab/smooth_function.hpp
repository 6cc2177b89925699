#pragma once

#include <Eigen/Core>

#include "sigmalab/candidates.hpp"
#include "sigmalab/grid.hpp"

namespace sigmalab {

/// Value/gradient/Hessian access shared by closed-form candidates and grid fields.
class SmoothFunction {
 public:
  virtual ~SmoothFunction() = default;
  virtual int dim() const = 0;
  virtual double value(const Eigen::Ref<const Eigen::VectorXd>& x) const = 0;
  virtual Eigen::VectorXd gradient(const Eigen::Ref<const Eigen::VectorXd>& x) const = 0;
  virtual SymMatrix hessian(const Eigen::Ref<const Eigen::VectorXd>& x) const = 0;
  virtual double u1(const Eigen::Ref<const Eigen::VectorXd>& x) const { return gradient(x)[0]; }
  virtual double u11(const Eigen::Ref<const Eigen::VectorXd>& x) const { return hessian(x)(0, 0); }
};

class CandidateFunction final : public SmoothFunction {
 public:
  explicit CandidateFunction(CandidateSolution u) : u_(std::move(u)) {}
  int dim() const override { return u_.dim(); }
  double value(const Eigen::Ref<const Eigen::VectorXd>& x) const override { return u_.value(x); }
  Eigen::VectorXd gradient(const Eigen::Ref<const Eigen::VectorXd>& x) const override { return u_.gradient(x); }
  SymMatrix hessian(const Eigen::Ref<const Eigen::VectorXd>& x) const override { return u_.hessian(x); }
  double u1(const Eigen::Ref<const Eigen::VectorXd>& x) const override { return u_.eval(x, {1, 0, 0}); }
  double u11(const Eigen::Ref<const Eigen::VectorXd>& x) const override { return u_.eval(x, {2, 0, 0}); }
  const CandidateSolution& candidate() const { return u_; }

 private:
  CandidateSolution u_;
};

/// Multilinear interpolation of node values, and of central-difference gradients and
/// Hessians over the interior sub-box (one cell in from each face). Points outside are clamped.
class FieldInterpolant final : public SmoothFunction {
 public:
  explicit FieldInterpolant(ScalarField field);
  int dim() const override { return field_.grid().dim(); }
  double value(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  Eigen::VectorXd gradient(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  SymMatrix hessian(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  double u1(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  double u11(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  const ScalarField& field() const { return field_; }

 private:
  template <class Getter>
  double interpolate(const Eigen::Ref<const Eigen::VectorXd>& x, int inset, Getter&& get) const;

  ScalarField field_;
  std::vector<Eigen::VectorXd> grad_;
  std::vector<SymMatrix> hess_;
};

}  // namespace sigmalab
