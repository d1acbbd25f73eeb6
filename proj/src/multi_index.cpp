#include "ocm/multi_index.hpp"

#include <algorithm>
#include <stdexcept>

namespace ocm {

double factorial(const MultiIndex& alpha) {
    double f = 1.0;
    for (int a : alpha)
        for (int k = 2; k <= a; ++k) f *= k;
    return f;
}

std::string to_string(const MultiIndex& alpha) {
    std::string s = "(";
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(alpha[i]);
    }
    return s + ")";
}

namespace {

void enumerate(int n, int budget, MultiIndex& cur, std::vector<MultiIndex>& out) {
    if (static_cast<int>(cur.size()) == n) {
        out.push_back(cur);
        return;
    }
    for (int a = 0; a <= budget; ++a) {
        cur.push_back(a);
        enumerate(n, budget - a, cur, out);
        cur.pop_back();
    }
}

} // namespace

MultiIndexSet::MultiIndexSet(int n, int m) : n_(n), m_(m) {
    if (n < 1) throw std::invalid_argument("MultiIndexSet: dimension must be >= 1");
    if (m < 0) throw std::invalid_argument("MultiIndexSet: order must be >= 0");
    MultiIndex cur;
    enumerate(n, m, cur, alphas_);
}

std::size_t MultiIndexSet::index_of(const MultiIndex& alpha) const {
    auto it = std::lower_bound(alphas_.begin(), alphas_.end(), alpha);
    if (it == alphas_.end() || *it != alpha) return alphas_.size();
    return static_cast<std::size_t>(it - alphas_.begin());
}

std::size_t MultiIndexSet::count(int n, int m) {
    // C(n + m, n)
    std::size_t c = 1;
    for (int i = 1; i <= n; ++i) c = c * static_cast<std::size_t>(m + i) / static_cast<std::size_t>(i);
    return c;
}

} // namespace ocm
