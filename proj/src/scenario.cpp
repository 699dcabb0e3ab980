#include "crabnet/scenario.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "crabnet/error.hpp"

namespace crabnet {

// ---------------------------------------------------------------- ZoneGrid

ZoneGrid::ZoneGrid(Vec2 origin, double width_m, double height_m, double side_m)
    : origin_(origin), width_(width_m), height_(height_m), side_(side_m) {
  if (!(side_m > 0.0)) throw ValidationError("area: zone_side_m must be positive");
  if (!(width_m > 0.0) || !(height_m > 0.0))
    throw ValidationError("area: width_m and height_m must be positive");
  const double c = width_m / side_m;
  const double r = height_m / side_m;
  if (std::abs(c - std::round(c)) > 1e-9 || std::abs(r - std::round(r)) > 1e-9)
    throw ValidationError("area: zones of side " + std::to_string(side_m) +
                          " m do not tile the service area exactly");
  cols_ = static_cast<int>(std::lround(c));
  rows_ = static_cast<int>(std::lround(r));
}

Zone ZoneGrid::zone(ZoneId id) const {
  if (id < 0 || id >= size()) throw DomainError("zone id out of range: " + std::to_string(id));
  Zone z;
  z.id = id;
  z.row = id / cols_;
  z.col = id % cols_;
  z.center = {origin_.x + (z.col + 0.5) * side_, origin_.y + (z.row + 0.5) * side_};
  return z;
}

std::optional<ZoneId> ZoneGrid::zone_of(Vec2 p) const {
  const double fx = (p.x - origin_.x) / side_;
  const double fy = (p.y - origin_.y) / side_;
  if (fx < 0.0 || fy < 0.0) return std::nullopt;
  const int col = static_cast<int>(std::floor(fx));
  const int row = static_cast<int>(std::floor(fy));
  if (col >= cols_ || row >= rows_) return std::nullopt;
  return row * cols_ + col;
}

// ---------------------------------------------------------------- GnbSite

void GnbSite::validate() const {
  const std::string who = "gnb " + std::to_string(id) + ": ";
  if (nt < 1) throw ValidationError(who + "nt must be >= 1");
  if (max_beams < 0) throw ValidationError(who + "b_max must be >= 0");
  if (max_beams > rf_chains) throw ValidationError(who + "b_max exceeds rf_chains");
  if (!(psi_deg >= 0.0 && psi_deg < 360.0)) throw ValidationError(who + "psi_deg must be in [0, 360)");
}

// ---------------------------------------------------------------- Trace

Trace::Trace(std::vector<VehicleSample> samples) : sample_count_(samples.size()) {
  bool first = true;
  for (const VehicleSample& s : samples) {
    auto& track = tracks_[s.vehicle_id];
    if (!track.empty() && !(s.t > track.back().t))
      throw ValidationError("trace: samples of vehicle " + std::to_string(s.vehicle_id) +
                            " are not strictly increasing in time");
    track.push_back(s);
    if (first) {
      start_ = end_ = s.t;
      first = false;
    }
    start_ = std::min(start_, s.t);
    end_ = std::max(end_, s.t);
  }
}

std::vector<int> Trace::vehicle_ids() const {
  std::vector<int> ids;
  ids.reserve(tracks_.size());
  for (const auto& [id, _] : tracks_) ids.push_back(id);
  return ids;
}

std::vector<VehiclePosition> Trace::positions_at(double t) const {
  std::vector<VehiclePosition> out;
  for (const auto& [id, track] : tracks_) {
    if (t < track.front().t || t > track.back().t) continue;
    auto it = std::lower_bound(track.begin(), track.end(), t,
                               [](const VehicleSample& s, double v) { return s.t < v; });
    if (it->t == t) {
      out.push_back({id, it->position});
      continue;
    }
    const VehicleSample& b = *it;
    const VehicleSample& a = *(it - 1);
    const double w = (t - a.t) / (b.t - a.t);
    out.push_back({id, a.position + w * (b.position - a.position)});
  }
  return out;
}

// ---------------------------------------------------------------- LosMap

void LosMap::set_pair(int site_a, int site_b, bool los) {
  pairs_[{std::min(site_a, site_b), std::max(site_a, site_b)}] = los;
}

std::optional<bool> LosMap::pair(int site_a, int site_b) const {
  if (site_a == site_b) return true;
  auto it = pairs_.find({std::min(site_a, site_b), std::max(site_a, site_b)});
  if (it == pairs_.end()) return std::nullopt;
  return it->second;
}

bool LosMap::clear(Vec2 a, Vec2 b) const {
  if (a == b) return true;
  for (const Polygon& poly : polygons_)
    if (segment_enters_interior(poly, a, b)) return false;
  return true;
}

// ---------------------------------------------------------------- Scenario

Scenario::Scenario(ZoneGrid grid, std::vector<GnbSite> sites, Trace trace, LosMap los)
    : grid_(std::move(grid)), sites_(std::move(sites)), trace_(std::move(trace)), los_(std::move(los)) {
  std::sort(sites_.begin(), sites_.end(),
            [](const GnbSite& a, const GnbSite& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    sites_[i].validate();
    if (i > 0 && sites_[i].id == sites_[i - 1].id)
      throw ValidationError("duplicate gnb id " + std::to_string(sites_[i].id));
  }
}

std::optional<std::size_t> Scenario::site_index(int id) const {
  for (std::size_t i = 0; i < sites_.size(); ++i)
    if (sites_[i].id == id) return i;
  return std::nullopt;
}

std::vector<ZoneId> Scenario::occupancy(double t) const {
  if (trace_.empty()) return {};
  if (t < trace_.start() || t > trace_.end())
    throw DomainError("occupancy: t=" + std::to_string(t) + " outside trace span [" +
                      std::to_string(trace_.start()) + ", " + std::to_string(trace_.end()) + "]");
  std::set<ZoneId> zones;
  for (const VehiclePosition& v : trace_.positions_at(t))
    if (auto z = grid_.zone_of(v.position)) zones.insert(*z);
  return {zones.begin(), zones.end()};
}

bool Scenario::site_los(std::size_t a, std::size_t b) const {
  if (auto p = los_.pair(sites_.at(a).id, sites_.at(b).id)) return *p;
  return is_los(sites_.at(a).position, sites_.at(b).position);
}

// ---------------------------------------------------------------- parsing helpers

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

struct LineCtx {
  const std::string& source;
  int line;
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source, line, what); }
};

double to_double(const std::string& tok, const LineCtx& ctx, const std::string& field) {
  if (tok.empty()) ctx.fail("empty value for " + field);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || errno == ERANGE || !std::isfinite(v))
    ctx.fail("invalid number '" + tok + "' for " + field);
  return v;
}

int to_int(const std::string& tok, const LineCtx& ctx, const std::string& field) {
  const double v = to_double(tok, ctx, field);
  if (v != std::floor(v) || std::abs(v) > 2e9) ctx.fail("expected integer for " + field + ", got '" + tok + "'");
  return static_cast<int>(v);
}

std::vector<double> to_doubles(const std::string& value, const LineCtx& ctx, const std::string& field) {
  std::vector<double> out;
  for (const std::string& tok : split(value, ',')) out.push_back(to_double(tok, ctx, field));
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Trace parse_trace_csv(const std::string& text, const std::string& source_name) {
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  bool header_seen = false;
  std::vector<VehicleSample> samples;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    LineCtx ctx{source_name, line_no};
    const auto cols = split(line, ',');
    if (!header_seen) {
      static const std::vector<std::string> expected{"t_s", "vehicle_id", "x_m", "y_m"};
      if (cols != expected) ctx.fail("expected header 't_s,vehicle_id,x_m,y_m'");
      header_seen = true;
      continue;
    }
    if (cols.size() != 4) ctx.fail("expected 4 columns, got " + std::to_string(cols.size()));
    samples.push_back({to_double(cols[0], ctx, "t_s"), to_int(cols[1], ctx, "vehicle_id"),
                       {to_double(cols[2], ctx, "x_m"), to_double(cols[3], ctx, "y_m")}});
  }
  if (!header_seen) throw ParseError(source_name, 0, "missing header row");
  return Trace(std::move(samples));
}

Trace load_trace_csv(const std::filesystem::path& path) {
  return parse_trace_csv(read_file(path), path.string());
}

Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir,
                        const std::string& source_name) {
  static const std::set<std::string> known{"area",     "radio", "gnbs",    "trace", "blockage",
                                           "los",      "limits", "channel", "cqi"};
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  std::string section;
  std::set<std::string> seen;

  std::optional<Vec2> origin;
  std::optional<double> width, height;
  double side = 10.0;
  std::vector<GnbSite> sites;
  std::optional<std::filesystem::path> trace_path;
  std::vector<Polygon> polygons;
  std::vector<std::tuple<int, int, bool, int>> los_rows;
  RadioParams radio;
  ChannelModelParams channel;
  CandidateLimits limits;
  CqiTable cqi;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const LineCtx ctx{source_name, line_no};

    if (line.front() == '[') {
      if (line.back() != ']') ctx.fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!known.count(section)) ctx.fail("unknown section [" + section + "]");
      if (seen.count(section)) {
        if (section == "area")
          throw ValidationError(source_name + ":" + std::to_string(line_no) +
                                ": overlapping zone definitions (second [area] section)");
        ctx.fail("duplicate section [" + section + "]");
      }
      seen.insert(section);
      continue;
    }
    if (section.empty()) ctx.fail("content before first section header");

    if (section == "gnbs") {
      const auto cols = split(line, ',');
      if (cols.size() != 8)
        ctx.fail("gnb row needs 8 fields (id, x, y, psi_deg, p_dbm, nt, b_max, rf_chains), got " +
                 std::to_string(cols.size()));
      GnbSite s;
      s.id = to_int(cols[0], ctx, "id");
      s.position = {to_double(cols[1], ctx, "x"), to_double(cols[2], ctx, "y")};
      s.psi_deg = to_double(cols[3], ctx, "psi_deg");
      s.p_dbm = to_double(cols[4], ctx, "p_dbm");
      s.nt = to_int(cols[5], ctx, "nt");
      s.max_beams = to_int(cols[6], ctx, "b_max");
      s.rf_chains = to_int(cols[7], ctx, "rf_chains");
      sites.push_back(s);
      continue;
    }
    if (section == "los") {
      const auto cols = split(line, ',');
      if (cols.size() != 3) ctx.fail("los row needs 3 fields (id_a, id_b, 0|1)");
      const int flag = to_int(cols[2], ctx, "los");
      if (flag != 0 && flag != 1) ctx.fail("los flag must be 0 or 1");
      los_rows.emplace_back(to_int(cols[0], ctx, "id_a"), to_int(cols[1], ctx, "id_b"), flag == 1, line_no);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) ctx.fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto unknown = [&] { ctx.fail("unknown key '" + key + "' in [" + section + "]"); };

    if (section == "area") {
      if (key == "origin") {
        const auto v = to_doubles(value, ctx, key);
        if (v.size() != 2) ctx.fail("origin needs 2 values");
        origin = Vec2{v[0], v[1]};
      } else if (key == "width_m") {
        width = to_double(value, ctx, key);
      } else if (key == "height_m") {
        height = to_double(value, ctx, key);
      } else if (key == "zone_side_m") {
        side = to_double(value, ctx, key);
      } else {
        unknown();
      }
    } else if (section == "trace") {
      if (key != "path") unknown();
      trace_path = value;
    } else if (section == "blockage") {
      if (key != "polygon") unknown();
      Polygon poly;
      for (const std::string& vtx : split(value, ',')) {
        std::istringstream vs(vtx);
        std::string xs, ys, extra;
        vs >> xs >> ys;
        if (ys.empty() || (vs >> extra)) ctx.fail("polygon vertex must be 'x y', got '" + vtx + "'");
        poly.push_back({to_double(xs, ctx, "vertex x"), to_double(ys, ctx, "vertex y")});
      }
      if (poly.size() < 3) ctx.fail("polygon needs at least 3 vertices");
      polygons.push_back(std::move(poly));
    } else if (section == "radio") {
      if (key == "profile") {
        if (value != "nr-fr2-52ghz") ctx.fail("unknown radio profile '" + value + "'");
        radio = RadioParams::nr_fr2_default();
      } else if (key == "carrier_ghz") {
        radio.carrier_ghz = to_double(value, ctx, key);
      } else if (key == "total_bandwidth_hz") {
        radio.total_bandwidth_hz = to_double(value, ctx, key);
      } else if (key == "rb_bandwidth_hz") {
        radio.rb_bandwidth_hz = to_double(value, ctx, key);
      } else if (key == "rb_count") {
        radio.rb_count = to_int(value, ctx, key);
      } else if (key == "slots_per_frame") {
        radio.slots_per_frame = to_int(value, ctx, key);
      } else if (key == "noise_dbm_per_hz") {
        radio.noise_dbm_per_hz = to_double(value, ctx, key);
      } else if (key == "rx_side") {
        radio.rx_side = to_int(value, ctx, key);
      } else {
        unknown();
      }
    } else if (section == "channel") {
      if (key == "los_cluster_mean") {
        channel.los_cluster_mean = to_double(value, ctx, key);
      } else if (key == "nlos_cluster_mean") {
        channel.nlos_cluster_mean = to_double(value, ctx, key);
      } else if (key == "cluster_floor") {
        channel.cluster_floor = to_int(value, ctx, key);
      } else if (key == "los_shadowing_db") {
        channel.los_shadowing_db = to_double(value, ctx, key);
      } else if (key == "nlos_shadowing_db") {
        channel.nlos_shadowing_db = to_double(value, ctx, key);
      } else if (key == "angle_spread_deg") {
        channel.angle_spread_deg = to_double(value, ctx, key);
      } else if (key == "range_m") {
        channel.range_m = to_double(value, ctx, key);
      } else if (key == "averaging_window") {
        channel.averaging_window = to_int(value, ctx, key);
      } else {
        unknown();
      }
    } else if (section == "limits") {
      if (key == "max_configs") {
        limits.max_configs = to_int(value, ctx, key);
      } else if (key == "widths_deg") {
        limits.widths_deg = to_doubles(value, ctx, key);
      } else if (key == "direction_quantum_deg") {
        limits.direction_quantum_deg = to_double(value, ctx, key);
      } else {
        unknown();
      }
    } else if (section == "cqi") {
      if (key != "se") unknown();
      const auto v = to_doubles(value, ctx, key);
      if (v.size() != cqi.se.size()) ctx.fail("cqi se needs 15 values");
      std::copy(v.begin(), v.end(), cqi.se.begin());
    }
  }

  if (!seen.count("area")) throw ParseError(source_name, 0, "missing [area] section");
  if (!width || !height) throw ParseError(source_name, 0, "[area] needs width_m and height_m");
  if (sites.empty()) throw ParseError(source_name, 0, "[gnbs] needs at least one row");

  Trace trace;
  if (trace_path) {
    const auto p = trace_path->is_absolute() ? *trace_path : base_dir / *trace_path;
    trace = load_trace_csv(p);
  }
  LosMap los(std::move(polygons));
  std::set<int> ids;
  for (const auto& s : sites) ids.insert(s.id);
  for (const auto& [a, b, flag, ln] : los_rows) {
    if (!ids.count(a) || !ids.count(b))
      throw ParseError(source_name, ln, "los row references unknown gnb id");
    los.set_pair(a, b, flag);
  }

  Scenario sc(ZoneGrid(origin.value_or(Vec2{}), *width, *height, side), std::move(sites),
              std::move(trace), std::move(los));
  radio.validate();
  channel.validate();
  limits.validate();
  cqi.validate();
  sc.radio = radio;
  sc.channel = channel;
  sc.limits = limits;
  sc.cqi = cqi;
  return sc;
}

Scenario load_scenario(const std::filesystem::path& config_path) {
  if (!std::filesystem::exists(config_path))
    throw Error("scenario file not found: " + config_path.string());
  return parse_scenario(read_file(config_path), config_path.parent_path(), config_path.string());
}

}  // namespace crabnet
