#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crabnet/geometry.hpp"
#include "crabnet/params.hpp"

namespace crabnet {

using ZoneId = int;

struct Zone {
  ZoneId id = 0;
  Vec2 center;
  int row = 0;
  int col = 0;
};

/// Square cells of side `side_m` tiling [origin, origin + (width, height)).
/// Cells are half-open: [x, x+side) x [y, y+side).
class ZoneGrid {
 public:
  ZoneGrid() = default;
  ZoneGrid(Vec2 origin, double width_m, double height_m, double side_m);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int size() const { return rows_ * cols_; }
  double side() const { return side_; }
  Vec2 origin() const { return origin_; }
  double width() const { return width_; }
  double height() const { return height_; }

  Zone zone(ZoneId id) const;
  Vec2 center(ZoneId id) const { return zone(id).center; }
  std::optional<ZoneId> zone_of(Vec2 p) const;

 private:
  Vec2 origin_;
  double width_ = 0.0;
  double height_ = 0.0;
  double side_ = 10.0;
  int rows_ = 0;
  int cols_ = 0;
};

struct GnbSite {
  int id = 0;
  Vec2 position;
  double psi_deg = 0.0;
  double p_dbm = 33.0;
  int nt = 64;
  int max_beams = 4;
  int rf_chains = 4;

  void validate() const;
};

struct VehicleSample {
  double t = 0.0;
  int vehicle_id = 0;
  Vec2 position;
};

struct VehiclePosition {
  int vehicle_id = 0;
  Vec2 position;
};

/// Per-vehicle sample tracks with linear interpolation between consecutive samples.
class Trace {
 public:
  Trace() = default;
  /// Samples of one vehicle must be strictly increasing in time (file order).
  explicit Trace(std::vector<VehicleSample> samples);

  bool empty() const { return tracks_.empty(); }
  double start() const { return start_; }
  double end() const { return end_; }
  std::size_t sample_count() const { return sample_count_; }
  std::vector<int> vehicle_ids() const;

  /// Vehicles whose track spans t, ordered by vehicle id.
  std::vector<VehiclePosition> positions_at(double t) const;

 private:
  std::map<int, std::vector<VehicleSample>> tracks_;
  double start_ = 0.0;
  double end_ = 0.0;
  std::size_t sample_count_ = 0;
};

/// Blockage polygons plus optional explicit LoS overrides for gNB pairs.
class LosMap {
 public:
  LosMap() = default;
  explicit LosMap(std::vector<Polygon> polygons) : polygons_(std::move(polygons)) {}

  void set_pair(int site_a, int site_b, bool los);
  std::optional<bool> pair(int site_a, int site_b) const;
  const std::vector<Polygon>& polygons() const { return polygons_; }
  bool clear(Vec2 a, Vec2 b) const;

 private:
  std::vector<Polygon> polygons_;
  std::map<std::pair<int, int>, bool> pairs_;
};

class Scenario {
 public:
  Scenario() = default;
  Scenario(ZoneGrid grid, std::vector<GnbSite> sites, Trace trace, LosMap los);

  const ZoneGrid& grid() const { return grid_; }
  /// Sites sorted by id. Everything else in the library refers to sites by index in this list.
  const std::vector<GnbSite>& sites() const { return sites_; }
  const GnbSite& site(std::size_t index) const { return sites_.at(index); }
  std::optional<std::size_t> site_index(int id) const;
  const Trace& trace() const { return trace_; }
  const LosMap& los_map() const { return los_; }

  RadioParams radio;
  ChannelModelParams channel;
  CandidateLimits limits;
  CqiTable cqi;

  /// Occupied zones at t, sorted and unique. Throws DomainError outside the trace span
  /// (an empty trace has no span and yields no occupied zones).
  std::vector<ZoneId> occupancy(double t) const;
  /// True iff the segment a-b does not pass through the interior of any blockage polygon.
  bool is_los(Vec2 a, Vec2 b) const { return los_.clear(a, b); }
  /// LoS between two sites (by index); explicit pair entries override geometry.
  bool site_los(std::size_t a, std::size_t b) const;

 private:
  ZoneGrid grid_;
  std::vector<GnbSite> sites_;
  Trace trace_;
  LosMap los_;
};

/// Parse a scenario config. Relative trace paths resolve against `base_dir`.
Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir,
                        const std::string& source_name = "<scenario>");
Scenario load_scenario(const std::filesystem::path& config_path);
/// Trace CSV with header; columns t_s, vehicle_id, x_m, y_m.
Trace parse_trace_csv(const std::string& text, const std::string& source_name = "<trace>");
Trace load_trace_csv(const std::filesystem::path& path);

}  // namespace crabnet
