#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mn/families.hpp"
#include "mn/newton.hpp"

namespace mn {

/// Built-in test problems, each paired with the scalar model that bounds it.
///   exp_quadratic_1d  F(x) = e^{-x} + x^2 - 1        root 0, kappa 1.5
///   power_5_3_1d      odd extension of t^{5/3} - t   root 0, kappa 5
///   cubic_1d          F(x) = x^3/3 - x               root 0, kappa 5
///   poly2d            F(x,y) = (x+y+x^2, x-y+y^2)    root (0,0), kappa 10
struct RegistryEntry {
  std::string id;
  std::string description;
  double default_kappa = 0.0;
};

const std::vector<RegistryEntry>& registry_entries();
std::vector<std::string> registry_ids();
bool registry_has(std::string_view id);

Problem registry_problem(std::string_view id, std::optional<double> kappa = {});
MajorantModel registry_matched_model(std::string_view id);

}  // namespace mn
