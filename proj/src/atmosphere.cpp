#include "dfd/atmosphere.hpp"

#include <algorithm>
#include <cmath>

#include "dfd/error.hpp"
#include "dfd/text.hpp"

namespace dfd {

Atmosphere::Atmosphere(std::vector<std::pair<double, double>> nodes) {
  if (nodes.size() < 2) throw InvariantError("atmosphere table needs at least two rows");
  std::sort(nodes.begin(), nodes.end());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& [h, rho] = nodes[i];
    if (!(rho > 0)) throw InvariantError("atmosphere density must be > 0 at " + text::format_double(h) + " m");
    if (i > 0 && !(h > nodes[i - 1].first)) throw InvariantError("atmosphere altitudes must be distinct");
    if (i > 0 && !(rho < nodes[i - 1].second)) {
      throw InvariantError("atmosphere density must decrease with altitude at " + text::format_double(h) + " m");
    }
    h_.push_back(h);
    rho_.push_back(rho);
  }
  for (std::size_t i = 0; i + 1 < h_.size(); ++i) {
    scale_.push_back((h_[i + 1] - h_[i]) / std::log(rho_[i] / rho_[i + 1]));
  }
  scale_.push_back(scale_.back());
}

Atmosphere Atmosphere::parse(const std::string& csv_content) {
  auto rows = text::parse_csv(csv_content);
  if (rows.empty() || rows[0] != std::vector<std::string>{"altitude_m", "density_kgm3"}) {
    throw ParseError("atmosphere table must start with header altitude_m,density_kgm3");
  }
  std::vector<std::pair<double, double>> nodes;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 2) throw ParseError("atmosphere row " + std::to_string(i) + " needs 2 fields");
    nodes.emplace_back(text::to_double(rows[i][0], "altitude_m"), text::to_double(rows[i][1], "density_kgm3"));
  }
  return Atmosphere(std::move(nodes));
}

Atmosphere Atmosphere::load(const std::string& path) {
  auto rows = text::read_csv(path);
  std::string content;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) content += (i ? "," : "") + r[i];
    content += "\n";
  }
  return parse(content);
}

Atmosphere Atmosphere::constant(double rho) {
  if (rho < 0) throw InvariantError("atmosphere density must be >= 0");
  Atmosphere a;
  a.constant_ = true;
  a.rho_ = {rho};
  return a;
}

double Atmosphere::density(double altitude) const {
  if (constant_) return rho_[0];
  if (altitude <= h_.front()) return rho_.front();
  auto it = std::upper_bound(h_.begin(), h_.end(), altitude);
  std::size_t i = static_cast<std::size_t>(it - h_.begin()) - 1;
  return rho_[i] * std::exp(-(altitude - h_[i]) / scale_[i]);
}

}  // namespace dfd
