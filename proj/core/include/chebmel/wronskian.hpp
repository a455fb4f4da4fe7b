#pragma once

#include <string>
#include <vector>

#include "chebmel/interval.hpp"
#include "chebmel/smooth_fn.hpp"

namespace chebmel {

inline constexpr int kMaxFamilySize = 12;

/// Ordered family of jet-evaluable scalar functions on a common domain.
/// Order matters: the Chebyshev notions below are properties of the order set.
class FunctionFamily {
 public:
  FunctionFamily() = default;
  FunctionFamily(std::vector<SmoothFn> members, Interval domain,
                 std::vector<std::string> labels = {});

  int size() const { return static_cast<int>(members_.size()); }
  const SmoothFn& member(int j) const {
    return members_[static_cast<std::size_t>(j)];
  }
  const std::vector<SmoothFn>& members() const { return members_; }
  const Interval& domain() const { return domain_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Same members restricted to another interval.
  FunctionFamily with_domain(const Interval& domain) const;
  /// The order set of the first k+1 members.
  FunctionFamily prefix(int k) const;

 private:
  std::vector<SmoothFn> members_;
  Interval domain_;
  std::vector<std::string> labels_;
};

/// Power kernel G(t, y) = (1 - y g(t))^(-alpha) on E x U. Positivity of the
/// base is checked on a construction grid.
struct KernelSpec {
  SmoothFn g;
  double alpha = 1.0;
  Interval E;
  Interval U;

  KernelSpec(SmoothFn g_fn, double a, Interval e, Interval u);
  BivariateFn kernel() const;
};

/// det(f_j^(i)(t)) of the whole family at t; derivatives come from jets.
double wronskian_continuous(const FunctionFamily& fam, double t);

/// det(f_j(t_i)) on a node tuple of the same length as the family.
double wronskian_discrete(const FunctionFamily& fam,
                          const std::vector<double>& nodes);

/// Closed form of D[G(.,y), d_y G(.,y), ..., d_y^K G(.,y); nodes] for the
/// power kernel: prod_{i<K}(alpha+i)^{K-i} / prod_i (1-y g(t_i))^(alpha+K)
/// times the Vandermonde factor prod_{j<i}(g(t_i)-g(t_j)).
double kernel_wronskian_closed(const KernelSpec& spec, double y,
                               const std::vector<double>& nodes);

}  // namespace chebmel
