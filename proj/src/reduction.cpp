#include "mnlmix/reduction.hpp"

#include <cmath>

namespace mnlmix {

double resultant_gate_W(const Polynomial<double>& q1, const Polynomial<double>& q2, double tau_lead) {
  const Polynomial<double> p = q1.unit_scaled().trimmed(tau_lead);
  const Polynomial<double> q = q2.unit_scaled().trimmed(tau_lead);
  if (p.is_zero() || q.is_zero()) return 0;
  if (p.degree() == 0) return std::pow(p.coeff(0), q.degree());
  if (q.degree() == 0) return std::pow(q.coeff(0), p.degree());
  return sylvester_resultant(p, q);
}

Polynomial<double> gate_cubic(const MixtureModel& model, int j) {
  const PairSystemInput<double> s = pair_system_input(model, full_slate(model.n()), 0, j, false);
  return deflated_cubic(s, model.b[0]);
}

Polynomial<double> gate_cubic_tilde(const MixtureModel& model, int j) {
  const PairSystemInput<double> s = pair_system_input(model, full_slate(model.n()), 0, j, true);
  return deflated_cubic_tilde(s, model.b[0]);
}

double r_n_value(const MixtureModel& model, const std::vector<std::pair<int, int>>& pairs) {
  double total = 0;
  for (const auto& [j, k] : pairs) {
    if (j < 1 || k < 1 || j >= model.n() || k >= model.n()) throw DomainError("gate pair out of range");
    const double w = resultant_gate_W(gate_cubic(model, j), gate_cubic(model, k));
    total += w * w;
  }
  return total;
}

}  // namespace mnlmix
