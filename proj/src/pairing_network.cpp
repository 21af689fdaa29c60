#include <algorithm>
#include <stdexcept>

#include "aircrew/pairing.hpp"

namespace aircrew {

namespace {

// Day offset of a leg inside the window, or -1 when outside.
int window_offset(const ProblemInstance& inst, const FlightLeg& l, int window_start) {
  const int off = (l.day() - window_start + 7) % 7;
  return off < inst.rules.max_pairing_days ? off : -1;
}

Minutes unrolled(Minutes t, int offset) { return offset * kDayMinutes + t % kDayMinutes; }

}  // namespace

PairingNetwork build_pricing_network(const ProblemInstance& inst, const std::vector<Connection>& connections,
                                     int window_start, const PricingDuals* duals) {
  PairingNetwork net;
  net.window_start = window_start;
  const int n_legs = static_cast<int>(inst.legs.size());
  std::vector<int> offset(n_legs, -1);
  for (const auto& l : inst.legs) {
    offset[l.id] = window_offset(inst, l, window_start);
    if (offset[l.id] >= 0) net.legs.push_back(l.id);
  }
  std::sort(net.legs.begin(), net.legs.end(), [&](int a, int b) {
    const Minutes ta = unrolled(inst.legs[a].dep_time, offset[a]);
    const Minutes tb = unrolled(inst.legs[b].dep_time, offset[b]);
    return ta != tb ? ta < tb : a < b;
  });
  std::vector<int> local(n_legs, -1);
  for (std::size_t i = 0; i < net.legs.size(); ++i) local[net.legs[i]] = static_cast<int>(i);

  std::vector<std::vector<int>> outgoing(n_legs);
  for (int c = 0; c < static_cast<int>(connections.size()); ++c)
    if (connections[c].crew_usable()) outgoing[connections[c].from_leg].push_back(c);

  net.graph = rcsp::RcspGraph<PairingResource>(static_cast<int>(net.legs.size()) + 2, 0, 1);
  auto add = [&](int from, int to, PricingArcKind kind, int leg, int conn) {
    net.graph.add_arc(from, to, PairingResource{});
    net.arc_info.push_back({kind, leg, conn});
  };
  for (int l : net.legs)
    if (inst.dep_airport(inst.legs[l]).is_base) add(0, 2 + local[l], PricingArcKind::Start, l, -1);
  for (int l : net.legs) {
    const FlightLeg& from = inst.legs[l];
    for (int c : outgoing[l]) {
      const Connection& con = connections[c];
      const int to = con.to_leg;
      if (local[to] < 0) continue;
      const Minutes gap = unrolled(inst.legs[to].dep_time, offset[to]) - unrolled(from.arr_time, offset[l]);
      if (gap != con.ground_minutes) continue;
      add(2 + local[l], 2 + local[to], con.midnights_crossed == 0 ? PricingArcKind::Day : PricingArcKind::Night, to, c);
    }
    if (inst.arr_airport(from).is_base) add(2 + local[l], 1, PricingArcKind::End, -1, -1);
  }
  net.graph.finalize();
  PricingDuals zero;
  zero.cover.assign(n_legs, 0.0);
  zero.connection_penalty.assign(connections.size(), 0.0);
  set_network_duals(net, inst, connections, duals ? *duals : zero);
  return net;
}

void set_network_duals(PairingNetwork& net, const ProblemInstance& inst, const std::vector<Connection>& connections,
                       const PricingDuals& duals) {
  const RulesConfig& r = inst.rules;
  const CostWeights& w = r.weights;
  const int f_max = r.flying_limit_max();
  const int offset = r.max_legs_per_duty - r.reduced_rest_max_legs;
  for (int a = 0; a < net.graph.num_arcs(); ++a) {
    const auto& info = net.arc_info[a];
    PairingResource q;
    if (info.kind != PricingArcKind::End) {
      const FlightLeg& leg = inst.legs[info.leg];
      const int f = leg.flying_minutes();
      const double penalty = info.connection >= 0 && !duals.connection_penalty.empty()
                                 ? duals.connection_penalty[info.connection]
                                 : 0.0;
      q.z = w.w_fly * f - duals.cover[info.leg] + penalty;
      if (info.kind == PricingArcKind::Start) {
        q = PairingResource::one_day(1, f + f_max - r.flying_limit_at(leg.dep_time), q.z + w.w_pairing);
      } else if (info.kind == PricingArcKind::Day) {
        q = PairingResource::one_day(1, f, q.z);
      } else {
        const Connection& c = connections[info.connection];
        q.core = PairingResource::Core::MultiDay;
        q.last_reduced = c.is_reduced_rest;
        q.last_legs = 1 + (c.is_reduced_rest ? offset : 0);
        q.last_flying = f + f_max - r.flying_limit_at(leg.dep_time);
        q.nights = c.midnights_crossed;
        q.night_conns = 1;
        q.z += w.w_hotel * c.midnights_crossed;
      }
    }
    net.graph.set_arc_resource(a, q);
  }
}

ConnectionIndex index_connections(const std::vector<Connection>& connections) {
  ConnectionIndex idx;
  for (int c = 0; c < static_cast<int>(connections.size()); ++c)
    idx.emplace(std::pair{connections[c].from_leg, connections[c].to_leg}, c);
  return idx;
}

Pairing make_pairing(const ProblemInstance& inst, const std::vector<Connection>& connections,
                     const ConnectionIndex& index, const std::vector<int>& legs) {
  if (legs.empty()) throw std::invalid_argument("empty pairing");
  Pairing p;
  p.legs = legs;
  p.duties.push_back({legs[0]});
  p.flying_minutes = inst.legs[legs[0]].flying_minutes();
  for (std::size_t i = 1; i < legs.size(); ++i) {
    auto it = index.find({legs[i - 1], legs[i]});
    if (it == index.end() || !connections[it->second].crew_usable())
      throw std::invalid_argument("legs " + std::to_string(legs[i - 1]) + " -> " + std::to_string(legs[i]) +
                                  " are not a crew connection");
    const Connection& c = connections[it->second];
    p.connections.push_back(it->second);
    if (c.is_short()) p.short_connections.push_back(it->second);
    if (c.midnights_crossed > 0) {
      p.nights += c.midnights_crossed;
      p.duties.push_back({});
    }
    p.duties.back().push_back(legs[i]);
    p.flying_minutes += inst.legs[legs[i]].flying_minutes();
  }
  std::sort(p.short_connections.begin(), p.short_connections.end());
  for (const auto& d : p.duties)
    if (static_cast<int>(d.size()) >= inst.rules.max_legs_per_duty) ++p.long_duties;
  p.is_long = p.nights >= kLongPairingNights;
  const auto& w = inst.rules.weights;
  p.cost = w.w_pairing + w.w_fly * p.flying_minutes + w.w_hotel * p.nights;
  return p;
}

bool is_legal_pairing(const ProblemInstance& inst, const std::vector<Connection>& connections, const Pairing& p) {
  if (p.artificial || p.legs.empty()) return false;
  if (!inst.dep_airport(inst.legs[p.legs.front()]).is_base) return false;
  if (!inst.arr_airport(inst.legs[p.legs.back()]).is_base) return false;
  if (p.nights > inst.rules.max_pairing_days - 1) return false;
  std::size_t pos = 0;
  for (std::size_t d = 0; d < p.duties.size(); ++d) {
    const auto& duty = p.duties[d];
    bool reduced = false;
    if (d > 0) reduced = connections[p.connections[pos - 1]].is_reduced_rest;
    const int cap = reduced ? inst.rules.reduced_rest_max_legs : inst.rules.max_legs_per_duty;
    if (static_cast<int>(duty.size()) > cap) return false;
    int flying = 0;
    for (int l : duty) flying += inst.legs[l].flying_minutes();
    if (flying > inst.rules.flying_limit_at(inst.legs[duty.front()].dep_time)) return false;
    pos += duty.size();
  }
  return true;
}

}  // namespace aircrew
