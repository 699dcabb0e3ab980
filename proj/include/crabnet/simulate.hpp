#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crabnet/baselines.hpp"
#include "crabnet/beam_config.hpp"
#include "crabnet/crab.hpp"
#include "crabnet/graph.hpp"
#include "crabnet/rate_model.hpp"
#include "crabnet/scenario.hpp"

namespace crabnet {

enum class Algorithm { crab, dbscan, ucb, random };

Algorithm parse_algorithm(const std::string& name);
std::string to_string(Algorithm a);

/// Largest CQI whose spectral efficiency is <= log2(1 + sinr); 0 when none.
int sinr_to_cqi(double sinr, const CqiTable& table);
/// Spectral efficiency of a CQI in bits/s/Hz; 0 for CQI 0.
double cqi_to_se(int cqi, const CqiTable& table);

/// Index into `covering` of the serving beam for `zone` (strongest average received
/// power, ties to the lower site then lower beam index), or none.
std::optional<std::size_t> associate(ZoneId zone, std::span<const ActiveBeam> covering, const LinkModel& links);

/// Proportional-fair RB allocation for one gNB. rates[z][q] is the instantaneous rate of
/// zone z on RB q, ewma[z] its average; each RB goes to the zone with the largest
/// rates/ewma (ties to the lower zone position). Returns the owning position per RB.
std::vector<std::size_t> pf_schedule(const std::vector<std::vector<double>>& rates, std::span<const double> ewma);

/// R <- (1 - alpha) R + alpha * achieved.
double ewma_update(double average, double achieved, double alpha = 0.1);

struct SimConfig {
  double duration_s = 10.0;
  double decision_period_s = 1.0;
  double slot_s = 0.1;
  double channel_tick_s = 0.001;
  std::uint64_t seed = 1;
  Algorithm algorithm = Algorithm::crab;
  double beam_reselect_s = 0.023;
  double handover_s = 0.043;
  double pf_alpha = 0.1;
  bool interference = true;

  Criterion criterion = Criterion::coverage;
  std::optional<double> threshold;  // default_threshold(criterion) when empty
  CrabOptions crab;
  UcbOptions ucb;
  DbscanParams dbscan;
  std::optional<int> max_configs;  // overrides the scenario's candidate limit

  void validate() const;
  int slots_per_period() const;
  int periods() const;
};

/// Everything a policy may look at when it decides for one period.
struct PeriodContext {
  int period = 0;
  int first_slot = 0;
  double t = 0.0;
  const SimConfig& config;
  const LinkModel& links;
  std::span<const std::vector<BeamConfig>> candidates;
  std::span<const VehiclePosition> vehicles;
};

struct Enactment {
  BeamConfig config;
  int config_id = -1;  // index into the period's candidate list, -1 when not from it
};

struct PeriodDiagnostics {
  int period = 0;
  std::vector<int> iterations;
  int prunes = 0;
  bool converged = true;
  std::size_t edges = 0;
  std::vector<double> entropy;  // per site
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual void decide(const PeriodContext& ctx) = 0;
  virtual Enactment enact(std::size_t site, int slot) = 0;
  virtual std::optional<PeriodDiagnostics> diagnostics() const { return std::nullopt; }
};

/// Built-in policy for an algorithm.
std::unique_ptr<Policy> make_policy(const SimConfig& config);

struct VehicleMetrics {
  double bits = 0.0;
  double present_s = 0.0;
  double served_s = 0.0;
  int handovers = 0;
  double handover_lost_s = 0.0;
};

struct GnbMetrics {
  double bits = 0.0;
  int config_changes = 0;
  double lost_airtime_s = 0.0;
};

struct MetricsReport {
  std::string algorithm;
  std::uint64_t seed = 0;
  double duration_s = 0.0;
  double total_bits = 0.0;
  double overhead_lost_bits = 0.0;
  double covered_fraction = 0.0;
  double jain_index = 1.0;
  std::map<int, GnbMetrics> gnbs;          // by site id
  std::map<int, VehicleMetrics> vehicles;  // by vehicle id
  std::vector<PeriodDiagnostics> periods;

  double config_changes_per_s(int site_id) const;
};

/// One row per (slot, served zone).
struct SlotEvent {
  double t = 0.0;
  int gnb = 0;
  int config_id = -1;
  ZoneId zone = 0;
  int rb_count = 0;
  double sinr_db = 0.0;
  double bits = 0.0;
};

/// Runs the slot-level simulation. `policy` overrides the configured algorithm.
MetricsReport run(const SimConfig& config, const Scenario& scenario, Policy* policy = nullptr,
                  std::vector<SlotEvent>* events = nullptr);

/// (sum x)^2 / (n sum x^2); 1 for an empty or all-zero input.
double jain_index(std::span<const double> x);

std::string report_json(const MetricsReport& report);
std::string diagnostics_json_line(const PeriodDiagnostics& d);
void write_events_csv(std::span<const SlotEvent> events, std::ostream& out);

}  // namespace crabnet
