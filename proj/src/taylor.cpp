#include "ocm/taylor.hpp"

#include <array>
#include <stdexcept>

namespace ocm {

TaylorBasis::TaylorBasis(int n, int m) : alphas_(n, m) {
    const std::size_t A = alphas_.size();
    for (std::size_t b = 0; b < A; ++b) {
        const MultiIndex& beta = alphas_[b];
        for (std::size_t a = 0; a < A; ++a) {
            const MultiIndex& alpha = alphas_[a];
            MultiIndex gamma(alpha.size());
            double w = 1.0;
            bool ge = true;
            for (std::size_t d = 0; d < alpha.size(); ++d) {
                if (alpha[d] < beta[d]) {
                    ge = false;
                    break;
                }
                gamma[d] = alpha[d] - beta[d];
                for (int k = gamma[d] + 1; k <= alpha[d]; ++k) w *= k;
            }
            if (!ge) continue;
            terms_.push_back(Term{b, a, alphas_.index_of(gamma), w});
        }
    }
}

void TaylorBasis::monomials(std::span<const double> h, std::span<double> out) const {
    const int n = this->n();
    const int m = this->m();
    // powers[d][k] = h_d^k
    std::array<double, 16> small{};
    std::vector<double> big;
    double* pw = small.data();
    const std::size_t need = static_cast<std::size_t>(n) * static_cast<std::size_t>(m + 1);
    if (need > small.size()) {
        big.resize(need);
        pw = big.data();
    }
    for (int d = 0; d < n; ++d) {
        double* row = pw + static_cast<std::size_t>(d) * static_cast<std::size_t>(m + 1);
        row[0] = 1.0;
        for (int k = 1; k <= m; ++k) row[k] = row[k - 1] * h[static_cast<std::size_t>(d)];
    }
    for (std::size_t g = 0; g < alphas_.size(); ++g) {
        const MultiIndex& gamma = alphas_[g];
        double v = 1.0;
        for (int d = 0; d < n; ++d) v *= pw[static_cast<std::size_t>(d) * static_cast<std::size_t>(m + 1) + static_cast<std::size_t>(gamma[static_cast<std::size_t>(d)])];
        out[g] = v;
    }
}

void TaylorBasis::derivatives(std::span<const double> c, std::span<const double> monos, std::span<double> out) const {
    for (std::size_t b = 0; b < alphas_.size(); ++b) out[b] = 0.0;
    for (const Term& t : terms_) out[t.beta] += c[t.alpha] * t.weight * monos[t.gamma];
}

void TaylorPiece::jets(const TaylorBasis& basis, std::span<const double> x, std::span<double> out) const {
    const std::size_t A = basis.alphas().size();
    const std::size_t K = coeffs.size() / A;
    thread_local std::vector<double> h, monos;
    h.resize(center.size());
    monos.resize(A);
    for (std::size_t d = 0; d < h.size(); ++d) h[d] = x[d] - center[d];
    basis.monomials(h, monos);
    for (std::size_t j = 0; j < K; ++j)
        basis.derivatives(std::span<const double>(coeffs).subspan(j * A, A), monos, out.subspan(j * A, A));
}

void TaylorPiece::values(const TaylorBasis& basis, std::span<const double> x, std::span<double> out) const {
    const std::size_t A = basis.alphas().size();
    const std::size_t K = coeffs.size() / A;
    thread_local std::vector<double> h, monos;
    h.resize(center.size());
    monos.resize(A);
    for (std::size_t d = 0; d < h.size(); ++d) h[d] = x[d] - center[d];
    basis.monomials(h, monos);
    for (std::size_t j = 0; j < K; ++j) {
        double v = 0.0;
        for (std::size_t a = 0; a < A; ++a) v += coeffs[j * A + a] * monos[a];
        out[j] = v;
    }
}

TaylorPiece taylor_poly(const TaylorBasis& basis, const JetPoint& jet) {
    const auto& alphas = basis.alphas();
    const std::size_t A = alphas.size();
    if (jet.x0.size() != static_cast<std::size_t>(basis.n())) throw std::invalid_argument("taylor_poly: centre has wrong dimension");
    if (jet.xi.empty() || jet.xi.size() % A != 0) throw std::invalid_argument("taylor_poly: incomplete jet");
    TaylorPiece p{jet.x0, std::vector<double>(jet.xi.size())};
    for (std::size_t s = 0; s < jet.xi.size(); ++s) p.coeffs[s] = jet.xi[s] / factorial(alphas[s % A]);
    return p;
}

} // namespace ocm
