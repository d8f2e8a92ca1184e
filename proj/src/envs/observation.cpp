#include "openteam/envs/observation.hpp"

namespace openteam::envs {

Observation encode_obs(const LbfState& s) {
  Observation o;
  for (const auto& obj : s.objects) {
    if (obj.collected) {
      o.u.insert(o.u.end(), {kSentinel, kSentinel, kSentinel});
    } else {
      o.u.insert(o.u.end(), {double(obj.pos.row), double(obj.pos.col), double(obj.level)});
    }
  }
  for (const auto& a : s.agents) {
    o.ids.push_back(a.id);
    o.x.push_back({double(a.pos.row), double(a.pos.col), double(a.level)});
  }
  return o;
}

Observation encode_obs(const WolfState& s) {
  Observation o;
  for (const auto& p : s.prey) o.u.insert(o.u.end(), {double(p.row), double(p.col)});
  for (const auto& h : s.hunters) {
    o.ids.push_back(h.id);
    o.x.push_back({double(h.pos.row), double(h.pos.col)});
  }
  return o;
}

}  // namespace openteam::envs
