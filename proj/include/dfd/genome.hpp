#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dfd/config.hpp"

namespace dfd {

class IniDocument;

/// Optimisable quantities of a component or an external panel.
enum class GeneVariable {
  Material,
  Shape,        // tanks: sphere / cylinder
  Thickness,
  Quantity,
  Parent,
  PositionX,
  PositionY,
  PositionZ,
  Radius,
  Length,
  Width,
  Height,
  Orientation,
  Cell,         // battery catalogue id
  Wall,         // panels: wall type
};

std::string to_string(GeneVariable v);
GeneVariable parse_gene_variable(const std::string& s);
bool is_integer_variable(GeneVariable v);

/// One gene. Genes with `options` hold an index into them (real variables
/// may list numeric levels); the others a value in [lo, hi].
struct GeneSpec {
  std::string label;                 // "<section>.<variable>", used as column name
  std::optional<int> component_id;   // target component
  std::optional<PanelRole> panel;    // or target panel
  GeneVariable variable = GeneVariable::Thickness;
  std::vector<std::string> options;  // integer genes
  double lo = 0.0, hi = 0.0;         // real genes
  // Honeycomb values used when a wall gene switches a panel to honeycomb.
  double hc_thickness = 0.0;
  double hc_areal_density = 0.0;

  bool is_integer() const { return !options.empty(); }
  double lower() const { return is_integer() ? 0.0 : lo; }
  double upper() const { return is_integer() ? static_cast<double>(options.size() - 1) : hi; }
  bool operator==(const GeneSpec&) const = default;
};

using Genome = std::vector<double>;

/// Reads every `[optimize.<name>]` section: `id = N` or `panel = <role>`
/// selects the target; `<variable>.options = a, b, ...`,
/// `<variable>.range = lo, hi` (integers) or `<variable>.bounds = lo, hi`
/// define genes in file order. Options are comma separated, or separated by
/// '|' when an option contains commas (orientations).
std::vector<GeneSpec> gene_specs_from_ini(const IniDocument& doc);

/// Checks targets exist and suit the variable; throws ConfigError.
void validate_gene_specs(const std::vector<GeneSpec>& specs, const SpacecraftConfig& config,
                         const MaterialDatabase& db);

/// Throws DecodeError unless the genome has one in-domain value per spec and
/// integer genes are whole numbers.
void check_genome(const Genome& g, const std::vector<GeneSpec>& specs);

/// Human-readable value: the option string or the real number.
std::string gene_value_string(const GeneSpec& spec, double value);

/// Gene values read back from a configuration (nearest option or clamped
/// value), for seeding and for the baseline.
Genome genome_from_config(const SpacecraftConfig& config, const std::vector<GeneSpec>& specs);

/// Overwrites the bound variables of a copy of `baseline`. Positions are
/// clamped so boxes stay inside the parent interior or on their panel.
SpacecraftConfig apply_genome(const SpacecraftConfig& baseline, const std::vector<GeneSpec>& specs,
                              const Genome& genome);

/// Keeps every box inside its container: free-floating boxes within the
/// interior, attached boxes within their panel.
void clamp_positions(SpacecraftConfig& config);

/// Replaces every top-level node of quantity n > 1 by n instances of
/// quantity 1. Tanks go on a circle of radius 1.2 r about the node position
/// in the x-z plane (chord 2.4 r between neighbours); other copies start at
/// the node position and are separated by placement repair. Sub-components
/// keep their quantity.
SpacecraftConfig expand_instances(const SpacecraftConfig& config);

}  // namespace dfd
