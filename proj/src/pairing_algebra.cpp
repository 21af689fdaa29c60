#include <algorithm>
#include <sstream>

#include "aircrew/pairing.hpp"

namespace aircrew {

using Core = PairingResource::Core;

std::string to_string(const PairingResource& r) {
  std::ostringstream out;
  switch (r.core) {
    case Core::Bottom: out << "bottom"; break;
    case Core::Top: out << "top"; break;
    case Core::OneDay: out << "(" << r.first_legs << "," << r.first_flying << ")"; break;
    case Core::MultiDay:
      out << "(" << r.first_legs << "," << r.first_flying << "," << r.last_legs << "," << r.last_flying
          << (r.last_reduced ? ",reduced" : "") << ",long_mid=" << r.long_middle << ")";
      break;
  }
  out << " z=" << r.z << " nights=" << r.nights << " night_conns=" << r.night_conns;
  return out.str();
}

PairingAlgebra::PairingAlgebra(const RulesConfig& rules, double alpha_dual, double beta_dual)
    : max_legs_(rules.max_legs_per_duty),
      reduced_legs_(rules.reduced_rest_max_legs),
      flying_max_(rules.flying_limit_max()),
      alpha_(rules.alpha),
      beta_(rules.beta),
      mu_(alpha_dual),
      nu_(beta_dual) {}

PairingResource PairingAlgebra::combine(const Resource& a, const Resource& b) const {
  Resource r;
  r.z = a.z + b.z;
  r.nights = a.nights + b.nights;
  r.night_conns = a.night_conns + b.night_conns;
  if (a.core == Core::Bottom || b.core == Core::Bottom) {
    r.core = Core::Bottom;
    return r;
  }
  if (a.core == Core::Top || b.core == Core::Top) {
    r.core = Core::Top;
    return r;
  }
  if (a.core == Core::OneDay && b.core == Core::OneDay) {
    r.first_legs = a.first_legs + b.first_legs;
    r.first_flying = a.first_flying + b.first_flying;
    return r;
  }
  r.core = Core::MultiDay;
  if (a.core == Core::OneDay) {
    r.first_legs = a.first_legs + b.first_legs;
    r.first_flying = a.first_flying + b.first_flying;
    r.last_legs = b.last_legs;
    r.last_flying = b.last_flying;
    r.last_reduced = b.last_reduced;
    r.long_middle = b.long_middle;
    return r;
  }
  if (b.core == Core::OneDay) {
    r.first_legs = a.first_legs;
    r.first_flying = a.first_flying;
    r.last_legs = a.last_legs + b.first_legs;
    r.last_flying = a.last_flying + b.first_flying;
    r.last_reduced = a.last_reduced;
    r.long_middle = a.long_middle;
    return r;
  }
  // Two multi-day pieces: a's last duty and b's first duty form a complete middle duty.
  if (a.last_legs + b.first_legs > max_legs_ || a.last_flying + b.first_flying > flying_max_) {
    r.core = Core::Top;
    return r;
  }
  const int middle_legs = a.last_legs - (a.last_reduced ? reduced_offset() : 0) + b.first_legs;
  r.first_legs = a.first_legs;
  r.first_flying = a.first_flying;
  r.last_legs = b.last_legs;
  r.last_flying = b.last_flying;
  r.last_reduced = b.last_reduced;
  r.long_middle = a.long_middle + b.long_middle + (is_long_duty(middle_legs) ? 1 : 0);
  return r;
}

namespace {

bool core_leq(const PairingResource& a, const PairingResource& b) {
  if (a.core == Core::Bottom || b.core == Core::Top) return true;
  if (a.core != b.core) return false;
  if (a.core == Core::OneDay) return a.first_legs <= b.first_legs && a.first_flying <= b.first_flying;
  return a.first_legs <= b.first_legs && a.first_flying <= b.first_flying && a.last_legs <= b.last_legs &&
         a.last_flying <= b.last_flying && a.last_reduced >= b.last_reduced && a.long_middle <= b.long_middle;
}

// Componentwise core meet (lower = true) or join inside one family.
PairingResource core_bound(const PairingResource& a, const PairingResource& b, bool lower) {
  PairingResource r;
  auto pick = [lower](int x, int y) { return lower ? std::min(x, y) : std::max(x, y); };
  if (a.core == b.core) {
    r.core = a.core;
    if (a.core == Core::OneDay || a.core == Core::MultiDay) {
      r.first_legs = pick(a.first_legs, b.first_legs);
      r.first_flying = pick(a.first_flying, b.first_flying);
    }
    if (a.core == Core::MultiDay) {
      r.last_legs = pick(a.last_legs, b.last_legs);
      r.last_flying = pick(a.last_flying, b.last_flying);
      r.last_reduced = lower ? (a.last_reduced || b.last_reduced) : (a.last_reduced && b.last_reduced);
      r.long_middle = pick(a.long_middle, b.long_middle);
    }
    return r;
  }
  const PairingResource* low = &a;
  const PairingResource* high = &b;
  if (core_leq(b, a)) std::swap(low, high);
  if (core_leq(*low, *high)) r = lower ? *low : *high;
  else r.core = lower ? Core::Bottom : Core::Top;
  return r;
}

}  // namespace

bool PairingAlgebra::leq(const Resource& a, const Resource& b) const {
  return core_leq(a, b) && a.z <= b.z && a.nights <= b.nights && a.night_conns >= b.night_conns;
}

PairingResource PairingAlgebra::meet(const Resource& a, const Resource& b) const {
  Resource r = core_bound(a, b, true);
  r.z = std::min(a.z, b.z);
  r.nights = std::min(a.nights, b.nights);
  r.night_conns = std::max(a.night_conns, b.night_conns);
  return r;
}

PairingResource PairingAlgebra::join(const Resource& a, const Resource& b) const {
  Resource r = core_bound(a, b, false);
  r.z = std::max(a.z, b.z);
  r.nights = std::max(a.nights, b.nights);
  r.night_conns = std::min(a.night_conns, b.night_conns);
  return r;
}

int PairingAlgebra::long_duties(const Resource& a) const {
  switch (a.core) {
    case Core::Bottom:
    case Core::Top: return 0;
    case Core::OneDay: return is_long_duty(a.first_legs) ? 1 : 0;
    case Core::MultiDay:
      return a.long_middle + (is_long_duty(a.first_legs) ? 1 : 0) +
             (is_long_duty(a.last_legs - (a.last_reduced ? reduced_offset() : 0)) ? 1 : 0);
  }
  return 0;
}

double PairingAlgebra::cost(const Resource& a) const {
  if (a.core == Core::Top) return rcsp::kInfCost;
  const double long_pairing = a.nights >= kLongPairingNights ? 1.0 : 0.0;
  const double duties = a.night_conns + 1;
  return a.z - mu_ * long_pairing - nu_ * (long_duties(a) - beta_ * duties) + mu_ * alpha_;
}

bool PairingAlgebra::infeasible(const Resource& a) const {
  switch (a.core) {
    case Core::Bottom: return false;
    case Core::Top: return true;
    case Core::OneDay: return a.first_legs > max_legs_ || a.first_flying > flying_max_;
    case Core::MultiDay:
      return a.first_legs > max_legs_ || a.first_flying > flying_max_ || a.last_legs > max_legs_ ||
             a.last_flying > flying_max_;
  }
  return true;
}

double PairingAlgebra::merge_penalty(const Resource& a, const Resource& b) const {
  return (core_leq(a, b) || core_leq(b, a) || a.core == b.core) ? 0.0 : 1.0;
}

PairingAlgebra make_algebra(const RulesConfig& rules, const PricingDuals& duals) {
  return PairingAlgebra(rules, duals.alpha_row, duals.beta_row);
}

}  // namespace aircrew
