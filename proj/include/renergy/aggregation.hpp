#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "renergy/coverage.hpp"
#include "renergy/energy_field.hpp"
#include "renergy/scenario.hpp"

namespace renergy {

// Harvesters wired to their nearest aggregator.
struct ClusterAssignment {
  HexLattice harvesters;
  HexLattice aggregators;
  std::vector<Index> aggregator_of;         // per harvester
  std::vector<double> line_length;          // per harvester, km
  std::vector<std::vector<Index>> members;  // per aggregator, ascending
  std::map<std::size_t, std::size_t> size_histogram;  // cluster size -> aggregators

  double mean_cluster_size() const;
};

// The aggregator lattice is shifted by aggregator_offset against the harvester
// lattice; a small generic offset avoids equidistant harvesters.
ClusterAssignment build_clusters(double lambda_h, double lambda_a, const Window& window,
                                 const Point& aggregator_offset = Point::Zero());

// beta p^2 d / v^2. Infinite voltage gives 0; v <= 0 throws DomainError.
double line_loss(double p, double d, double v, double beta);

// Smallest voltage keeping the transfer efficiency at or above tau for every
// harvester: tau sqrt(beta eta gamma / (1 - tau) * sqrt(2 / (3 sqrt 3))) lambda_a^(-1/4).
double required_voltage_prop6(double tau, double beta, double eta, double gamma, double lambda_a);

// Power reaching the aggregator from a harvester producing `harvested` at line
// length d: the root of D + beta D^2 d / V^2 = harvested (Exact) or
// tau * harvested (TauFloor).
double delivered_power(double harvested, double d, double voltage, const LineSpec& line);

// Line voltage under the scenario's rule.
double line_voltage(const ScenarioConfig& cfg);

// Smallest delivered/harvested ratio over all harvesters (peak harvest at the
// longest line); 1 for on-site harvesters and lossless lines.
double worst_case_efficiency(const ScenarioConfig& cfg);

// (tau gamma eta lambda_h / lambda_b) (1 - e^(-lambda_e/lambda_h)) e^(-2 / (3 sqrt 3 nu lambda_h))
double asymptotic_power_floor(double tau, double gamma, double eta, double lambda_h,
                              double lambda_b, double lambda_e, double nu);

// Harvesters, aggregators and BSs on one window. Each BS is wired to its
// nearest aggregator, which splits its intake equally over the BSs it feeds.
struct Deployment {
  Window window;
  ClusterAssignment clusters;
  HexLattice bss;
  std::vector<Index> bs_aggregator;         // per BS
  std::vector<std::size_t> bs_per_aggregator;
  double voltage = 0;

  Index typical_bs() const { return bss.center_index; }
  Index typical_aggregator() const { return bs_aggregator[static_cast<std::size_t>(typical_bs())]; }
};

// Window commensurate with the aggregator lattice and at least as large as
// the on-site default.
Window distributed_window(const ScenarioConfig& cfg);

Deployment build_deployment(const ScenarioConfig& cfg);

struct Supply {
  std::vector<double> bs_power;        // W per BS
  std::vector<double> harvested;       // W per harvester
  std::vector<double> delivered;       // W per harvester
  double total_harvested = 0;
  double total_loss = 0;
  double stranded = 0;  // delivered to aggregators that feed no BS
};

// Full accounting over every harvester and BS of the deployment.
Supply supplied_power(const Deployment& dep, const FieldRealization& real, const ScenarioConfig& cfg);

// Budget of the typical BS: only its aggregator's cluster is evaluated.
double typical_bs_power(const Deployment& dep, const FieldRealization& real, const ScenarioConfig& cfg);

// Fraction of harvester cells (Voronoi hexagons) holding at least one energy centre.
double occupied_cell_fraction(const HexLattice& harvesters, const PointSet& centers, const Window& window);

OutageEstimate simulate_distributed(const ScenarioConfig& cfg, std::uint64_t n_trials, std::uint64_t seed,
                                    int workers = 1);

// Typical-BS budget statistics over independent fields (no users drawn).
PowerStats sample_typical_power(const ScenarioConfig& cfg, std::uint64_t n_trials, std::uint64_t seed,
                                int workers = 1);

}  // namespace renergy
