#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gns/dynamics.hpp"
#include "gns/gns.hpp"
#include "gns/restrictions.hpp"
#include "gns/statistics.hpp"

namespace gns {

using Json = nlohmann::json;

struct SpaceSpec {
  std::optional<Index> dimension;
  Index one_particle_dim = 0;
  Index particles = 0;
  Sector sector = Sector::Full;
};

struct StateSpec {
  std::optional<ComplexVector> vector;
  std::optional<ComplexMatrix> density;
  std::optional<std::string> family;  // m2, bell, fermi4, fermi3, bose3, qboson, parity_toy
  std::map<std::string, double> params;
};

struct SubalgebraSpec {
  enum class Kind { Generators, Levels, Named };
  Kind kind = Kind::Levels;
  std::vector<ComplexMatrix> generators;
  bool include_identity = true;
  std::vector<Index> levels;  // one-based, as written in scenario files
  std::string named;          // bell_local, bell_plus, bell_minus, bell_plus_minus,
                              // parity_commutant, projector_commutant
  std::optional<ComplexMatrix> matrix;  // the parity or projector of a named commutant
};

struct ScenarioOptions {
  DecompositionMode mode = DecompositionMode::CanonicalSchmidt;
  std::vector<double> times;
  std::optional<ComplexMatrix> hamiltonian;
  std::vector<std::array<double, 2>> kraus_pairs;
  Index compare_seeds = 20;
  std::optional<ComplexMatrix> parity;
  std::optional<ComplexMatrix> corner_plus;
  std::vector<ComplexMatrix> odd_elements;
  std::optional<ComplexMatrix> projector;
  Index grid = 64;
  bool stereographic = false;
};

struct Scenario {
  std::string name;
  double tolerance = 1e-10;
  std::uint64_t seed = 42;
  LogBase log_base = LogBase::Natural;
  std::optional<SpaceSpec> space;
  StateSpec state;
  SubalgebraSpec subalgebra;
  std::vector<std::string> tasks;
  ScenarioOptions options;
};

/// Values used when a scenario leaves seed or tolerance out.
struct ScenarioDefaults {
  std::uint64_t seed = 42;
  double tolerance = 1e-10;
};

/// Reads GNS_SEED and GNS_TOL; a malformed value raises SchemaError.
ScenarioDefaults defaults_from_environment();

/// Throws SchemaError whose message starts with the offending field path.
Scenario parse_scenario(const Json& doc, const ScenarioDefaults& defaults = {});
Json serialize_scenario(const Scenario& s);
bool operator==(const Scenario& a, const Scenario& b);

struct SurfaceRow {
  double theta = 0.0;
  double phi = 0.0;
  double x = 0.0;
  double y = 0.0;
  double entropy = 0.0;
};

struct SurfaceGrid {
  Index subdivisions = 0;
  bool stereographic = false;
  std::vector<SurfaceRow> rows;
};

/// (theta_i, phi_j) = (i pi / n, 2 pi j / n) for 0 <= i <= n, 0 <= j < n, with
/// each pole sampled once; 2 + (n - 1) n points that include all six axis points.
std::vector<std::array<double, 2>> sphere_grid(Index n);

/// Stereographic image from the north pole (theta = 0), which maps to infinity.
std::array<double, 2> stereographic(double theta, double phi);

/// "x,y,entropy" rows. Raw mode writes (theta, phi); stereographic mode drops
/// the north pole.
std::string emit_surface(const SurfaceGrid& grid);

struct BlockSummary {
  Index d = 0;
  Index m = 0;
  double weight = 0.0;
};

struct ModeComparison {
  double canonical = 0.0;
  double isotypic = 0.0;
  double random_min = 0.0;
  double random_max = 0.0;
  Index seeds = 0;
};

struct KrausSummary {
  double theta_from = 0.0;
  double theta_to = 0.0;
  std::optional<double> residual;
  Index map_count = 0;
  std::optional<std::string> error;
};

struct Report {
  Scenario scenario;
  Index ambient_dimension = 0;
  Index algebra_dimension = 0;
  std::optional<Index> gns_dimension;
  std::optional<Index> ideal_dimension;
  std::vector<BlockSummary> blocks;
  std::optional<double> decomposition_entropy;
  std::optional<double> entropy;
  std::vector<double> spectrum;
  std::optional<GnsDiagnostics> diagnostics;
  std::optional<ModeComparison> comparison;
  std::optional<Trajectory> trajectory;
  std::vector<KrausSummary> kraus;
  std::optional<ParityReport> parity;
  std::optional<CollapseReport> collapse;
  std::optional<SurfaceGrid> surface;

  Json to_json() const;
};

Report run_scenario(const Scenario& s);

struct ExampleInfo {
  std::string name;
  std::string description;
  std::map<std::string, double> defaults;
};

const std::vector<ExampleInfo>& list_examples();

/// The scenario of a built-in example with parameters overridden by `params`.
/// Unknown names or parameters raise SchemaError.
Scenario example_scenario(const std::string& name, const std::map<std::string, double>& params = {},
                          const ScenarioDefaults& defaults = {});

/// Entropy surface of the two-boson family over sphere_grid(n), fanned out
/// over `threads` workers (0 picks the hardware concurrency).
SurfaceGrid bose3_surface(Index n, bool stereographic, std::uint64_t seed, Tolerance tol = {},
                          unsigned threads = 0);

}  // namespace gns
