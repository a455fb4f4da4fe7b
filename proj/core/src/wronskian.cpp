#include "chebmel/wronskian.hpp"

#include <cmath>

#include "chebmel/matrix.hpp"

namespace chebmel {

FunctionFamily::FunctionFamily(std::vector<SmoothFn> members, Interval domain,
                               std::vector<std::string> labels)
    : members_(std::move(members)),
      domain_(domain),
      labels_(std::move(labels)) {
  if (members_.empty()) throw UsageError("function family must be nonempty");
  for (const auto& m : members_)
    if (!m.valid()) throw UsageError("function family member is empty");
  if (labels_.empty()) {
    labels_.reserve(members_.size());
    for (std::size_t j = 0; j < members_.size(); ++j)
      labels_.push_back("f" + std::to_string(j));
  }
  if (labels_.size() != members_.size())
    throw UsageError("family labels must match member count");
}

FunctionFamily FunctionFamily::with_domain(const Interval& domain) const {
  return FunctionFamily(members_, domain, labels_);
}

FunctionFamily FunctionFamily::prefix(int k) const {
  if (k < 0 || k >= size()) throw UsageError("family prefix out of range");
  std::vector<SmoothFn> m(members_.begin(), members_.begin() + k + 1);
  std::vector<std::string> l(labels_.begin(), labels_.begin() + k + 1);
  return FunctionFamily(std::move(m), domain_, std::move(l));
}

KernelSpec::KernelSpec(SmoothFn g_fn, double a, Interval e, Interval u)
    : g(std::move(g_fn)), alpha(a), E(e), U(u) {
  // Positivity of 1 - y g(t) sampled on a construction grid.
  const int nt = 33, ny = 33;
  for (int i = 0; i <= nt; ++i) {
    const double t = E.lo + (E.hi - E.lo) * (i + 0.5) / (nt + 1);
    const double gt = g(t);
    for (int j = 0; j <= ny; ++j) {
      const double y = U.lo + (U.hi - U.lo) * (j + 0.5) / (ny + 1);
      if (1.0 - y * gt <= 0.0)
        throw DomainError("kernel base 1 - y g(t) nonpositive on the grid");
    }
  }
}

BivariateFn KernelSpec::kernel() const {
  return BivariateFn::power_kernel(g, alpha);
}

double wronskian_continuous(const FunctionFamily& fam, double t) {
  const int n = fam.size();
  if (n > kMaxFamilySize)
    throw UsageError("wronskian supports families of size <= 12");
  // Row i holds the i-th derivatives of all members. Each row is scaled by
  // its sup over the family before the determinant and rescaled after.
  RealMatrix w(n, n);
  for (int j = 0; j < n; ++j) {
    const Jet jet = fam.member(j).jet_at(t, n - 1);
    for (int i = 0; i < n; ++i) w.at(i, j) = jet.derivative(i);
  }
  double scale = 1.0;
  for (int i = 0; i < n; ++i) {
    double r = 0.0;
    for (int j = 0; j < n; ++j) r = std::max(r, std::abs(w.at(i, j)));
    if (r == 0.0) return 0.0;
    for (int j = 0; j < n; ++j) w.at(i, j) /= r;
    scale *= r;
  }
  return det(w) * scale;
}

double wronskian_discrete(const FunctionFamily& fam,
                          const std::vector<double>& nodes) {
  const int n = fam.size();
  if (n > kMaxFamilySize)
    throw UsageError("wronskian supports families of size <= 12");
  if (static_cast<int>(nodes.size()) != n)
    throw UsageError("discrete wronskian needs as many nodes as members");
  RealMatrix w(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      w.at(i, j) = fam.member(j)(nodes[static_cast<std::size_t>(i)]);
  return det(w);
}

double kernel_wronskian_closed(const KernelSpec& spec, double y,
                               const std::vector<double>& nodes) {
  if (nodes.empty()) throw UsageError("kernel wronskian needs >= 1 node");
  const int K = static_cast<int>(nodes.size()) - 1;

  std::vector<double> gv(nodes.size());
  double denom = 1.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    gv[i] = spec.g(nodes[i]);
    const double base = 1.0 - y * gv[i];
    if (base <= 0.0)
      throw DomainError("kernel base 1 - y g(t) nonpositive at a node");
    denom *= std::pow(base, spec.alpha + K);
  }

  double alpha_prod = 1.0;
  for (int i = 0; i < K; ++i)
    alpha_prod *= std::pow(spec.alpha + i, K - i);

  double vander = 1.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) vander *= gv[i] - gv[j];

  return alpha_prod / denom * vander;
}

}  // namespace chebmel
