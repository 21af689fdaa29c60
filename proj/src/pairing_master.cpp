#include <algorithm>
#include <cmath>

#include "aircrew/pairing.hpp"

namespace aircrew {

double cut_rhs(std::size_t size, double gamma) {
  return gamma >= 1.0 ? static_cast<double>(size) - 1.0 : gamma * static_cast<double>(size);
}

int cut_coefficient(const Cut& cut, const Pairing& p) {
  int n = 0;
  for (int c : p.short_connections)
    if (std::binary_search(cut.connections.begin(), cut.connections.end(), c)) ++n;
  return n;
}

double artificial_cost(const ProblemInstance& inst) {
  const auto& r = inst.rules;
  const auto& w = r.weights;
  // Upper bound on any legal pairing cost, scaled so one artificial column costs more
  // than a complete cover made of real pairings.
  const double max_pairing = w.w_pairing + w.w_fly * r.max_pairing_days * r.flying_limit_max() +
                             w.w_hotel * r.max_pairing_days + 1.0;
  return (static_cast<double>(inst.legs.size()) + 1.0) * max_pairing;
}

namespace {

double beta_coefficient(const Pairing& p, double beta) { return p.long_duties - beta * p.num_duties(); }

}  // namespace

MasterModel build_master(const std::vector<Pairing>& pool, const ProblemInstance& inst, const std::vector<Cut>& cuts) {
  MasterModel m;
  auto& lp = m.lp;
  const int n_legs = static_cast<int>(inst.legs.size());
  const double alpha = inst.rules.alpha;
  const double beta = inst.rules.beta;
  m.num_pool = static_cast<int>(pool.size());
  std::vector<std::vector<std::pair<int, double>>> cover(n_legs);
  std::vector<std::pair<int, double>> alpha_row, beta_row;
  std::vector<std::vector<std::pair<int, double>>> cut_rows(cuts.size());
  for (int j = 0; j < m.num_pool; ++j) {
    const Pairing& p = pool[j];
    lp.add_binary(p.cost, "y" + std::to_string(j));
    for (int l : p.legs) cover[l].emplace_back(j, 1.0);
    const double a = (p.is_long ? 1.0 : 0.0) - alpha;
    if (a != 0.0) alpha_row.emplace_back(j, a);
    const double b = beta_coefficient(p, beta);
    if (b != 0.0) beta_row.emplace_back(j, b);
    for (std::size_t s = 0; s < cuts.size(); ++s) {
      const int k = cut_coefficient(cuts[s], p);
      if (k != 0) cut_rows[s].emplace_back(j, k);
    }
  }
  const double big = artificial_cost(inst);
  for (int l = 0; l < n_legs; ++l) {
    const int j = lp.add_binary(big, "art" + std::to_string(l));
    cover[l].emplace_back(j, 1.0);
  }
  for (int l = 0; l < n_legs; ++l) lp.add_row(std::move(cover[l]), milp::Relation::Equal, 1.0, "cover_" + std::to_string(l));
  m.alpha_row = lp.add_row(std::move(alpha_row), milp::Relation::LessEq, 0.0, "long_pairings");
  m.beta_row = lp.add_row(std::move(beta_row), milp::Relation::LessEq, 0.0, "long_duties");
  m.first_cut_row = lp.num_rows();
  for (std::size_t s = 0; s < cuts.size(); ++s)
    lp.add_row(std::move(cut_rows[s]), milp::Relation::LessEq, cuts[s].rhs, "cut_" + std::to_string(s));
  return m;
}

double reduced_cost(const Pairing& p, const ProblemInstance& inst, const std::vector<Cut>& cuts,
                    const milp::LpSolution& lp, const MasterModel& model) {
  double rc = p.cost;
  for (int l : p.legs) rc -= lp.duals[l];
  rc -= lp.duals[model.alpha_row] * ((p.is_long ? 1.0 : 0.0) - inst.rules.alpha);
  rc -= lp.duals[model.beta_row] * beta_coefficient(p, inst.rules.beta);
  for (std::size_t s = 0; s < cuts.size(); ++s) rc -= lp.duals[model.first_cut_row + s] * cut_coefficient(cuts[s], p);
  return rc;
}

PricingDuals pricing_duals(const ProblemInstance& inst, const std::vector<Connection>& connections,
                           const std::vector<Cut>& cuts, const milp::LpSolution& lp, const MasterModel& model) {
  PricingDuals d;
  const int n_legs = static_cast<int>(inst.legs.size());
  d.cover.assign(lp.duals.begin(), lp.duals.begin() + n_legs);
  // Inequality duals are clipped to their sign so the pricing cost stays monotone.
  d.alpha_row = std::min(0.0, lp.duals[model.alpha_row]);
  d.beta_row = std::min(0.0, lp.duals[model.beta_row]);
  d.connection_penalty.assign(connections.size(), 0.0);
  for (std::size_t s = 0; s < cuts.size(); ++s) {
    const double pi = std::min(0.0, lp.duals[model.first_cut_row + s]);
    for (int c : cuts[s].connections) d.connection_penalty[c] -= pi;
  }
  return d;
}

}  // namespace aircrew
