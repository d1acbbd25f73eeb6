#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ocm {

using MultiIndex = std::vector<int>;

inline int order(const MultiIndex& alpha) {
    int s = 0;
    for (int a : alpha) s += a;
    return s;
}

/// alpha! = prod alpha_i!
double factorial(const MultiIndex& alpha);

std::string to_string(const MultiIndex& alpha);

/// All multi-indices alpha in n variables with |alpha| <= m, in lexicographic order.
/// For n = 2, m = 2: (0,0) (0,1) (0,2) (1,0) (1,1) (2,0).
class MultiIndexSet {
public:
    MultiIndexSet() = default;
    MultiIndexSet(int n, int m);

    int dimension() const { return n_; }
    int max_order() const { return m_; }
    std::size_t size() const { return alphas_.size(); }
    const MultiIndex& operator[](std::size_t i) const { return alphas_[i]; }
    const std::vector<MultiIndex>& all() const { return alphas_; }

    /// Position of alpha, or size() when alpha is not in the set.
    std::size_t index_of(const MultiIndex& alpha) const;

    /// Number of multi-indices of order <= m in n variables: C(n+m, n).
    static std::size_t count(int n, int m);

private:
    int n_ = 0;
    int m_ = 0;
    std::vector<MultiIndex> alphas_;
};

} // namespace ocm
