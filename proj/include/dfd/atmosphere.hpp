#pragma once

#include <string>
#include <utility>
#include <vector>

namespace dfd {

/// Piecewise-exponential density profile through tabulated (altitude, density)
/// nodes. Below the first node the first density holds; above the last node
/// the last layer's scale height is extrapolated.
class Atmosphere {
public:
  explicit Atmosphere(std::vector<std::pair<double, double>> nodes);

  static Atmosphere load(const std::string& path);
  static Atmosphere parse(const std::string& csv_content);
  /// Same density at every altitude (0 gives vacuum).
  static Atmosphere constant(double rho);

  double density(double altitude) const;

private:
  Atmosphere() = default;

  std::vector<double> h_;
  std::vector<double> rho_;
  std::vector<double> scale_;  // scale height of the layer starting at h_[i]
  bool constant_ = false;
};

}  // namespace dfd
