#include "ocm/grid_fn.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ocm {

Lattice::Lattice(std::vector<std::vector<double>> axes) : axes_(std::move(axes)) {
    if (axes_.empty()) throw std::invalid_argument("Lattice: need at least one axis");
    size_ = 1;
    for (const auto& ax : axes_) {
        if (ax.empty()) throw std::invalid_argument("Lattice: empty axis");
        for (std::size_t i = 1; i < ax.size(); ++i)
            if (!(ax[i] > ax[i - 1])) throw std::invalid_argument("Lattice: axis coordinates must be strictly increasing");
        size_ *= ax.size();
    }
}

Lattice Lattice::uniform(const Box& box, const std::vector<std::size_t>& nodes) {
    if (nodes.size() != box.dim()) throw std::invalid_argument("Lattice::uniform: one node count per axis");
    std::vector<std::vector<double>> axes(box.dim());
    for (std::size_t d = 0; d < box.dim(); ++d) {
        std::size_t k = nodes[d];
        if (k < 2) throw std::invalid_argument("Lattice::uniform: need >= 2 nodes per axis");
        for (std::size_t i = 0; i + 1 < k; ++i)
            axes[d].push_back(box.lower[d] + box.width(d) * static_cast<double>(i) / static_cast<double>(k - 1));
        axes[d].push_back(box.upper[d]);
    }
    return Lattice(std::move(axes));
}

std::vector<std::size_t> Lattice::multi_index(std::size_t node) const {
    std::vector<std::size_t> idx(dim());
    for (std::size_t d = dim(); d-- > 0;) {
        idx[d] = node % axes_[d].size();
        node /= axes_[d].size();
    }
    return idx;
}

std::size_t Lattice::node(std::span<const std::size_t> idx) const {
    std::size_t k = 0;
    for (std::size_t d = 0; d < dim(); ++d) k = k * axes_[d].size() + idx[d];
    return k;
}

Point Lattice::point(std::size_t node) const {
    auto idx = multi_index(node);
    Point x(dim());
    for (std::size_t d = 0; d < dim(); ++d) x[d] = axes_[d][idx[d]];
    return x;
}

std::vector<std::size_t> Lattice::stencil(std::size_t node) const {
    const auto base = multi_index(node);
    const std::size_t n = dim();
    std::vector<std::size_t> out;
    std::size_t combos = 1;
    for (std::size_t d = 0; d < n; ++d) combos *= 3;
    std::vector<std::size_t> idx(n);
    for (std::size_t c = 0; c < combos; ++c) {
        std::size_t rem = c;
        bool ok = true;
        bool self = true;
        for (std::size_t d = 0; d < n; ++d) {
            int off = static_cast<int>(rem % 3) - 1;
            rem /= 3;
            if (off != 0) self = false;
            long long v = static_cast<long long>(base[d]) + off;
            if (v < 0 || v >= static_cast<long long>(axes_[d].size())) {
                ok = false;
                break;
            }
            idx[d] = static_cast<std::size_t>(v);
        }
        if (ok && !self) out.push_back(this->node(idx));
    }
    std::sort(out.begin(), out.end());
    return out;
}

GridFn::GridFn(Lattice lattice, std::vector<ExtReal> values, std::vector<std::uint8_t> codim)
    : lattice_(std::move(lattice)), values_(std::move(values)), codim_(std::move(codim)) {
    if (values_.size() != lattice_.size()) throw std::invalid_argument("GridFn: values do not match the lattice");
    if (codim_.empty()) codim_.assign(values_.size(), 0);
    if (codim_.size() != values_.size()) throw std::invalid_argument("GridFn: mask does not match the lattice");
    for (auto c : codim_)
        if (c > lattice_.dim()) throw std::invalid_argument("GridFn: mask codimension exceeds the dimension");
}

GridFn GridFn::sample(const Lattice& lattice, const std::function<double(std::span<const double>)>& f) {
    std::vector<ExtReal> v;
    v.reserve(lattice.size());
    for (std::size_t i = 0; i < lattice.size(); ++i) {
        Point x = lattice.point(i);
        v.emplace_back(f(x));
    }
    return GridFn(lattice, std::move(v));
}

GridFn GridFn::constant(const Lattice& lattice, ExtReal v) {
    return GridFn(lattice, std::vector<ExtReal>(lattice.size(), v));
}

std::span<const ExtReal> GridFn::ghosts(std::size_t i) const {
    if (ghost_offsets_.empty()) return {};
    return std::span<const ExtReal>(ghost_values_.data() + ghost_offsets_[i], ghost_offsets_[i + 1] - ghost_offsets_[i]);
}

void GridFn::set_ghosts(const std::vector<std::vector<ExtReal>>& ghosts) {
    if (ghosts.empty()) {
        ghost_offsets_.clear();
        ghost_values_.clear();
        return;
    }
    if (ghosts.size() != values_.size()) throw std::invalid_argument("GridFn::set_ghosts: one list per node");
    ghost_offsets_.assign(values_.size() + 1, 0);
    ghost_values_.clear();
    for (std::size_t i = 0; i < ghosts.size(); ++i) {
        if (!ghosts[i].empty() && codim_[i] == 0)
            throw std::invalid_argument("GridFn::set_ghosts: ghosts only attach to skeleton nodes");
        ghost_values_.insert(ghost_values_.end(), ghosts[i].begin(), ghosts[i].end());
        ghost_offsets_[i + 1] = static_cast<std::uint32_t>(ghost_values_.size());
    }
}

GridFn GridFn::negated() const {
    GridFn g = *this;
    for (auto& v : g.values_) v = -v;
    for (auto& v : g.ghost_values_) v = -v;
    return g;
}

GridFn GridFn::with_values(std::vector<ExtReal> values) const {
    if (values.size() != values_.size()) throw std::invalid_argument("GridFn::with_values: size mismatch");
    GridFn g = *this;
    g.values_ = std::move(values);
    return g;
}

bool operator==(const GridFn& a, const GridFn& b) {
    return a.lattice_ == b.lattice_ && a.values_ == b.values_ && a.codim_ == b.codim_ &&
           a.ghost_offsets_ == b.ghost_offsets_ && a.ghost_values_ == b.ghost_values_;
}

void write_csv(std::ostream& os, const GridFn& f) {
    const Lattice& L = f.lattice();
    for (std::size_t d = 0; d < L.dim(); ++d) os << 'x' << (d + 1) << ',';
    os << "value,mask\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        Point x = L.point(i);
        for (double c : x) os << to_string(ExtReal(c)) << ',';
        os << to_string(f[i]) << ',' << static_cast<int>(f.codim(i)) << '\n';
    }
}

GridFn read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("GridFn CSV: missing header");
    std::size_t cols = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
    if (cols < 3) throw std::invalid_argument("GridFn CSV: header needs coordinates, value and mask");
    const std::size_t n = cols - 2;

    struct Row {
        Point x;
        ExtReal v;
        int mask;
    };
    std::vector<Row> rows;
    std::vector<std::vector<double>> coords(n);
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != cols) throw std::invalid_argument("GridFn CSV: wrong column count on line " + std::to_string(lineno));
        Row r;
        for (std::size_t d = 0; d < n; ++d) {
            ExtReal c = parse_ext_real(cells[d]);
            if (!c.is_finite()) throw std::invalid_argument("GridFn CSV: coordinates must be finite");
            r.x.push_back(c.value());
            coords[d].push_back(c.value());
        }
        r.v = parse_ext_real(cells[n]);
        r.mask = std::stoi(cells[n + 1]);
        if (r.mask < 0 || r.mask > static_cast<int>(n)) throw std::invalid_argument("GridFn CSV: bad mask value");
        rows.push_back(std::move(r));
    }
    for (auto& c : coords) {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
    }
    Lattice L(coords);
    if (rows.size() != L.size()) throw std::invalid_argument("GridFn CSV: rows do not form a full tensor lattice");
    std::vector<ExtReal> values(L.size());
    std::vector<std::uint8_t> mask(L.size());
    std::vector<bool> seen(L.size(), false);
    for (const auto& r : rows) {
        std::vector<std::size_t> idx(n);
        for (std::size_t d = 0; d < n; ++d)
            idx[d] = static_cast<std::size_t>(std::lower_bound(coords[d].begin(), coords[d].end(), r.x[d]) - coords[d].begin());
        std::size_t k = L.node(idx);
        if (seen[k]) throw std::invalid_argument("GridFn CSV: duplicate node");
        seen[k] = true;
        values[k] = r.v;
        mask[k] = static_cast<std::uint8_t>(r.mask);
    }
    return GridFn(std::move(L), std::move(values), std::move(mask));
}

} // namespace ocm
