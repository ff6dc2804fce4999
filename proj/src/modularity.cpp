#include "sigcomm/modularity.hpp"

#include "sigcomm/error.hpp"

namespace sigcomm {

MixingMatrix mixing_matrix(const SignedGraph& g, const Clustering& c) {
  if (g.empty()) throw DataError("modularity is undefined for a graph without edges");
  if (c.n() != g.n()) throw DataError("clustering does not match the graph order");
  const double total = total_weight(g);
  MixingMatrix m{Eigen::MatrixXd::Zero(c.k(), c.k())};
  for (const auto& e : g.edges()) {
    if (e.sign < 0) throw DataError("mixing matrix needs an all-positive graph");
    const int a = c[e.i] - 1;
    const int b = c[e.j] - 1;
    if (a == b) {
      m.e(a, a) += e.weight;
    } else {
      m.e(a, b) += e.weight;
      m.e(b, a) += e.weight;
    }
  }
  m.e /= total;
  return m;
}

double modularity_from_marginals(const MixingMatrix& m) {
  const Eigen::VectorXd a = m.marginals();
  double q = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) q += m.e(i, i) - a(i) * a(i);
  return q;
}

double modularity_from_trace(const MixingMatrix& m) { return m.e.trace() - (m.e * m.e).sum(); }

double girvan_newman_modularity(const SignedGraph& g, const Clustering& c) {
  return modularity_from_marginals(mixing_matrix(g, c));
}

double signed_modularity(const SignedGraph& g, const Clustering& c, EdgeMass mass) {
  if (g.empty()) throw DataError("signed modularity is undefined for a graph without edges");
  const auto [pos, neg] = split_signs(g);
  const auto mass_of = [&](const SignedGraph& part) {
    return mass == EdgeMass::weight ? total_weight(part) : static_cast<double>(part.m());
  };
  const double m_pos = mass_of(pos);
  const double m_neg = mass_of(neg);
  const double q_pos = pos.empty() ? 0.0 : girvan_newman_modularity(pos, c);
  const double q_neg = neg.empty() ? 0.0 : girvan_newman_modularity(neg, c);
  return (m_pos * q_pos - m_neg * q_neg) / (m_pos + m_neg);
}

double signed_modularity_or_zero(const SignedGraph& g, const Clustering& c, EdgeMass mass) {
  return g.empty() ? 0.0 : signed_modularity(g, c, mass);
}

}  // namespace sigcomm
