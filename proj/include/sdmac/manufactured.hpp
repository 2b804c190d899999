#pragma once
#include <stdexcept>
#include <string>

#include "sdmac/grid.hpp"

namespace sdmac {

struct PhysicalParams {
  double nu = 1.0;     // fluid viscosity
  double kappa = 1.0;  // permeability constant
  double alpha = 1.0;  // BJS slip coefficient

  void validate() const {
    if (!(nu > 0) || !(kappa > 0) || !(alpha > 0))
      throw std::invalid_argument("PhysicalParams: nu, kappa, alpha must be positive");
  }
};

enum class Example { One = 1, Two = 2, Three = 3 };

double example3_eta(const PhysicalParams& p, double y);
double example3_eta_d1(const PhysicalParams& p, double y);
double example3_eta_d2(const PhysicalParams& p, double y);

/// A closed-form exact solution together with the analytic derivatives needed
/// to sample forcings and boundary data. Construction checks the parameter
/// constraints each case imposes through the interface conditions.
class ManufacturedCase {
 public:
  static ManufacturedCase make(Example id, const PhysicalParams& params);

  Example id() const { return id_; }
  const PhysicalParams& params() const { return params_; }
  Square stokes_domain() const;
  Square darcy_domain() const;

  double u(double x, double y) const;
  double v(double x, double y) const;
  double p(double x, double y) const;
  double phi(double x, double y) const;

  double lap_u(double x, double y) const;
  double lap_v(double x, double y) const;
  double p_x(double x, double y) const;
  double p_y(double x, double y) const;
  double lap_phi(double x, double y) const;

  // forcings induced by the fields
  double f_stokes_x(double x, double y) const { return -params_.nu * lap_u(x, y) + p_x(x, y); }
  double f_stokes_y(double x, double y) const { return -params_.nu * lap_v(x, y) + p_y(x, y); }
  double f_darcy(double x, double y) const { return -params_.kappa * lap_phi(x, y); }

 private:
  ManufacturedCase(Example id, const PhysicalParams& params) : id_(id), params_(params) {}
  Example id_;
  PhysicalParams params_;
};

}  // namespace sdmac
