#include "crabnet/beam_config.hpp"

#include <algorithm>
#include <sstream>

namespace crabnet {

std::size_t BeamConfig::active_count() const {
  return static_cast<std::size_t>(
      std::count_if(beams.begin(), beams.end(), [](const Beam& b) { return !b.is_null(); }));
}

std::vector<Beam> BeamConfig::canonical() const {
  std::vector<Beam> out;
  for (const Beam& b : beams)
    if (!b.is_null()) out.push_back(b);
  std::sort(out.begin(), out.end(), [](const Beam& a, const Beam& b) {
    if (a.direction() != b.direction()) return a.direction() < b.direction();
    return a.hpbw() < b.hpbw();
  });
  return out;
}

std::string BeamConfig::label() const {
  const auto c = canonical();
  if (c.empty()) return "-";
  std::ostringstream os;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) os << '+';
    os << c[i].direction() << '/' << c[i].hpbw();
  }
  return os.str();
}

}  // namespace crabnet
