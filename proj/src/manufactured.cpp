#include "sdmac/manufactured.hpp"

#include <cmath>

namespace sdmac {

namespace {
const double kPi = std::acos(-1.0);

bool near_one(double v) { return std::fabs(v - 1.0) <= 1e-14; }
}  // namespace

double example3_eta(const PhysicalParams& p, double y) {
  return -p.kappa - y / (2.0 * p.nu) + (0.5 * p.kappa - p.alpha / (4.0 * p.nu * p.nu)) * y * y;
}

double example3_eta_d1(const PhysicalParams& p, double y) {
  return -1.0 / (2.0 * p.nu) + 2.0 * (0.5 * p.kappa - p.alpha / (4.0 * p.nu * p.nu)) * y;
}

double example3_eta_d2(const PhysicalParams& p, double y) {
  (void)y;
  return 2.0 * (0.5 * p.kappa - p.alpha / (4.0 * p.nu * p.nu));
}

ManufacturedCase ManufacturedCase::make(Example id, const PhysicalParams& params) {
  params.validate();
  switch (id) {
    case Example::One:
      if (!near_one(params.alpha) || !near_one(params.nu))
        throw std::invalid_argument("Example 1 admits only alpha = nu = 1");
      break;
    case Example::Two:
      if (!near_one(params.alpha) || !near_one(params.nu) || !near_one(params.kappa))
        throw std::invalid_argument("Example 2 admits only alpha = nu = kappa = 1");
      break;
    case Example::Three:
      break;
  }
  return ManufacturedCase(id, params);
}

Square ManufacturedCase::stokes_domain() const {
  if (id_ == Example::Three) return {0, 1, 0, 1};
  return {0, 1, 1, 2};
}

Square ManufacturedCase::darcy_domain() const {
  if (id_ == Example::Three) return {0, 1, -1, 0};
  return {0, 1, 0, 1};
}

double ManufacturedCase::u(double x, double y) const {
  switch (id_) {
    case Example::One:
      return -std::exp(y) * std::sin(kPi * x) / kPi;
    case Example::Two:
      return (y - 1) * (y - 1) + x * (y - 1) + 3 * x - 1;
    case Example::Three:
      return example3_eta_d1(params_, y) * std::cos(x);
  }
  return 0;
}

double ManufacturedCase::v(double x, double y) const {
  switch (id_) {
    case Example::One:
      return (std::exp(y) - std::exp(1.0)) * std::cos(kPi * x);
    case Example::Two:
      return x * (x - 1) - 0.5 * (y - 1) * (y - 1) - 3 * y + 1;
    case Example::Three:
      return example3_eta(params_, y) * std::sin(x);
  }
  return 0;
}

double ManufacturedCase::p(double x, double y) const {
  switch (id_) {
    case Example::One:
      return 2 * std::exp(y) * std::cos(kPi * x);
    case Example::Two:
      return 2 * x + y - 1;
    case Example::Three:
      return 0;
  }
  return 0;
}

double ManufacturedCase::phi(double x, double y) const {
  switch (id_) {
    case Example::One:
      return (std::exp(y) - y * std::exp(1.0)) * std::cos(kPi * x);
    case Example::Two:
      return x * (1 - x) * (y - 1) + std::pow(y - 1, 3) / 3.0 + 2 * x + 2 * y + 4;
    case Example::Three:
      return std::exp(y) * std::sin(x);
  }
  return 0;
}

double ManufacturedCase::lap_u(double x, double y) const {
  switch (id_) {
    case Example::One:
      return (kPi - 1.0 / kPi) * std::exp(y) * std::sin(kPi * x);
    case Example::Two:
      return 2.0;
    case Example::Three:
      return -example3_eta_d1(params_, y) * std::cos(x);
  }
  return 0;
}

double ManufacturedCase::lap_v(double x, double y) const {
  switch (id_) {
    case Example::One:
      return -kPi * kPi * (std::exp(y) - std::exp(1.0)) * std::cos(kPi * x) +
             std::exp(y) * std::cos(kPi * x);
    case Example::Two:
      return 1.0;
    case Example::Three:
      return (example3_eta_d2(params_, y) - example3_eta(params_, y)) * std::sin(x);
  }
  return 0;
}

double ManufacturedCase::p_x(double x, double y) const {
  switch (id_) {
    case Example::One:
      return -2 * kPi * std::exp(y) * std::sin(kPi * x);
    case Example::Two:
      return 2.0;
    case Example::Three:
      return 0;
  }
  return 0;
}

double ManufacturedCase::p_y(double x, double y) const {
  switch (id_) {
    case Example::One:
      return 2 * std::exp(y) * std::cos(kPi * x);
    case Example::Two:
      return 1.0;
    case Example::Three:
      return 0;
  }
  return 0;
}

double ManufacturedCase::lap_phi(double x, double y) const {
  switch (id_) {
    case Example::One:
      return -kPi * kPi * (std::exp(y) - y * std::exp(1.0)) * std::cos(kPi * x) +
             std::exp(y) * std::cos(kPi * x);
    case Example::Two:
      return -2 * (y - 1) + 2 * (y - 1);
    case Example::Three:
      return 0;
  }
  return 0;
}

}  // namespace sdmac
