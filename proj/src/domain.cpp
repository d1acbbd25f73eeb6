#include "ocm/domain.hpp"

#include "ocm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ocm {

namespace {

// Conformance slack for diameter comparisons: breakpoints are produced by
// division, so an exact-arithmetic width of delta may round a few ulps above it.
constexpr double kDiameterSlack = 1e-12;

bool conforms(double diameter, double delta) { return diameter <= delta * (1.0 + kDiameterSlack); }

// Intervals [b[i], b[i+1]] of a sorted breakpoint list that contain t.
void intervals_containing(const std::vector<double>& b, double t, std::vector<std::size_t>& out) {
    out.clear();
    if (b.size() < 2 || t < b.front() || t > b.back()) return;
    auto it = std::lower_bound(b.begin(), b.end(), t);
    std::size_t k = static_cast<std::size_t>(it - b.begin());
    if (it != b.end() && *it == t) {
        if (k > 0) out.push_back(k - 1);
        if (k + 1 < b.size()) out.push_back(k);
    } else {
        out.push_back(k - 1);
    }
}

double max_gap(const std::vector<double>& b) {
    double g = 0.0;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) g = std::max(g, b[i + 1] - b[i]);
    return g;
}

double tensor_diameter(const std::vector<std::vector<double>>& breaks) {
    double s = 0.0;
    for (const auto& b : breaks) {
        double g = max_gap(b);
        s += g * g;
    }
    return std::sqrt(s);
}

std::vector<double> split_axis(const std::vector<double>& b, std::size_t k) {
    std::vector<double> out;
    out.reserve((b.size() - 1) * k + 1);
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
        double lo = b[i];
        double w = b[i + 1] - b[i];
        for (std::size_t q = 0; q < k; ++q) out.push_back(lo + w * static_cast<double>(q) / static_cast<double>(k));
    }
    out.push_back(b.back());
    return out;
}

// Refine one cell's breakpoints to diameter <= delta.
std::vector<std::vector<double>> refine_cell(const std::vector<std::vector<double>>& breaks, double delta) {
    if (conforms(tensor_diameter(breaks), delta)) return breaks;
    const std::size_t n = breaks.size();
    const double root_n = std::sqrt(static_cast<double>(n));
    std::vector<std::size_t> k(n);
    for (std::size_t d = 0; d < n; ++d)
        k[d] = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(max_gap(breaks[d]) * root_n / delta)));
    for (;;) {
        std::vector<std::vector<double>> out(n);
        for (std::size_t d = 0; d < n; ++d) out[d] = split_axis(breaks[d], k[d]);
        if (conforms(tensor_diameter(out), delta)) return out;
        // Rounding pushed a piece over; bump the axis with the widest piece.
        std::size_t worst = 0;
        double worst_gap = -1.0;
        for (std::size_t d = 0; d < n; ++d) {
            double g = max_gap(out[d]);
            if (g > worst_gap) {
                worst_gap = g;
                worst = d;
            }
        }
        ++k[worst];
    }
}

} // namespace

// ---------------------------------------------------------------------------
// Box

double Box::diameter() const {
    double s = 0.0;
    for (std::size_t d = 0; d < dim(); ++d) s += width(d) * width(d);
    return std::sqrt(s);
}

double Box::volume() const {
    double v = 1.0;
    for (std::size_t d = 0; d < dim(); ++d) v *= width(d);
    return v;
}

Point Box::center() const {
    Point c(dim());
    for (std::size_t d = 0; d < dim(); ++d) c[d] = 0.5 * (lower[d] + upper[d]);
    return c;
}

bool Box::contains(std::span<const double> x) const {
    if (x.size() != dim()) return false;
    for (std::size_t d = 0; d < dim(); ++d)
        if (x[d] < lower[d] || x[d] > upper[d]) return false;
    return true;
}

Box Box::make(Point lower, Point upper) {
    if (lower.empty() || lower.size() != upper.size()) throw DomainError("box corners must have the same nonzero dimension");
    for (std::size_t d = 0; d < lower.size(); ++d) {
        if (!std::isfinite(lower[d]) || !std::isfinite(upper[d])) throw DomainError("box corners must be finite");
        if (lower[d] > upper[d])
            throw DomainError("degenerate box: lower[" + std::to_string(d) + "] > upper[" + std::to_string(d) + "]");
    }
    return Box{std::move(lower), std::move(upper)};
}

// ---------------------------------------------------------------------------
// CellPartition

CellPartition::CellPartition(Box bounds, std::vector<std::size_t> cells_per_axis, std::vector<Box> cells,
                             std::vector<std::vector<std::vector<double>>> breaks)
    : bounds_(std::move(bounds)), cells_per_axis_(std::move(cells_per_axis)), cells_(std::move(cells)),
      breaks_(std::move(breaks)) {
    const std::size_t n = bounds_.dim();
    cell_breaks_.resize(n);
    for (std::size_t d = 0; d < n; ++d) {
        std::size_t k = cells_per_axis_[d];
        auto& b = cell_breaks_[d];
        for (std::size_t i = 0; i < k; ++i)
            b.push_back(bounds_.lower[d] + bounds_.width(d) * static_cast<double>(i) / static_cast<double>(k));
        b.push_back(bounds_.upper[d]);
    }
    offsets_.assign(cells_.size() + 1, 0);
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        std::size_t count = 1;
        for (const auto& ax : breaks_[c]) count *= ax.size() - 1;
        offsets_[c + 1] = offsets_[c] + count;
    }
}

std::vector<std::size_t> CellPartition::splits(std::size_t c) const {
    std::vector<std::size_t> k;
    for (const auto& ax : breaks_[c]) k.push_back(ax.size() - 1);
    return k;
}

std::size_t CellPartition::cell_of_subcell(std::size_t s) const {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), s);
    return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

Box CellPartition::subcell(std::size_t s) const {
    std::size_t c = cell_of_subcell(s);
    std::size_t local = s - offsets_[c];
    const auto& br = breaks_[c];
    const std::size_t n = br.size();
    Box b{Point(n), Point(n)};
    // Row-major: the last axis varies fastest.
    for (std::size_t d = n; d-- > 0;) {
        std::size_t k = br[d].size() - 1;
        std::size_t i = local % k;
        local /= k;
        b.lower[d] = br[d][i];
        b.upper[d] = br[d][i + 1];
    }
    return b;
}

Point CellPartition::subcell_center(std::size_t s) const { return subcell(s).center(); }

std::vector<Box> CellPartition::subcells_of(std::size_t c) const {
    std::vector<Box> out;
    for (std::size_t s = offsets_[c]; s < offsets_[c + 1]; ++s) out.push_back(subcell(s));
    return out;
}

std::vector<std::size_t> CellPartition::cell_candidates(std::span<const double> x) const {
    const std::size_t n = dim();
    std::vector<std::vector<std::size_t>> per_axis(n);
    for (std::size_t d = 0; d < n; ++d) {
        intervals_containing(cell_breaks_[d], x[d], per_axis[d]);
        if (per_axis[d].empty()) return {};
    }
    std::vector<std::size_t> out{0};
    for (std::size_t d = 0; d < n; ++d) {
        std::vector<std::size_t> next;
        for (std::size_t base : out)
            for (std::size_t i : per_axis[d]) next.push_back(base * cells_per_axis_[d] + i);
        out.swap(next);
    }
    return out;
}

std::optional<std::size_t> CellPartition::locate(std::span<const double> x) const {
    if (x.size() != dim() || !bounds_.contains(x)) return std::nullopt;
    const std::size_t n = dim();
    std::size_t c = 0;
    std::vector<std::size_t> tmp;
    for (std::size_t d = 0; d < n; ++d) {
        intervals_containing(cell_breaks_[d], x[d], tmp);
        c = c * cells_per_axis_[d] + tmp.front();
    }
    const auto& br = breaks_[c];
    std::size_t local = 0;
    for (std::size_t d = 0; d < n; ++d) {
        intervals_containing(br[d], x[d], tmp);
        if (tmp.empty()) return std::nullopt;  // unreachable for consistent geometry
        local = local * (br[d].size() - 1) + tmp.front();
    }
    return offsets_[c] + local;
}

std::vector<std::size_t> CellPartition::subcells_touching(std::span<const double> x) const {
    std::vector<std::size_t> out;
    if (x.size() != dim() || !bounds_.contains(x)) return out;
    const std::size_t n = dim();
    std::vector<std::size_t> tmp;
    for (std::size_t c : cell_candidates(x)) {
        const auto& br = breaks_[c];
        std::vector<std::size_t> locals{0};
        for (std::size_t d = 0; d < n; ++d) {
            intervals_containing(br[d], x[d], tmp);
            std::vector<std::size_t> next;
            for (std::size_t base : locals)
                for (std::size_t i : tmp) next.push_back(base * (br[d].size() - 1) + i);
            locals.swap(next);
        }
        for (std::size_t l : locals) out.push_back(offsets_[c] + l);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::size_t CellPartition::skeleton_codim(std::span<const double> x) const {
    if (x.size() != dim() || !bounds_.contains(x)) return 0;
    std::size_t best = 0;
    for (std::size_t c : cell_candidates(x)) {
        std::size_t k = 0;
        for (std::size_t d = 0; d < dim(); ++d)
            if (std::binary_search(breaks_[c][d].begin(), breaks_[c][d].end(), x[d])) ++k;
        best = std::max(best, k);
    }
    return best;
}

bool CellPartition::on_skeleton(std::span<const double> x) const { return skeleton_codim(x) > 0; }

double CellPartition::max_subcell_diameter() const {
    double m = 0.0;
    for (const auto& br : breaks_) m = std::max(m, tensor_diameter(br));
    return m;
}

CellPartition build_partition(const Box& bounds, const std::vector<std::size_t>& cells_per_axis) {
    Box b = Box::make(bounds.lower, bounds.upper);
    const std::size_t n = b.dim();
    if (cells_per_axis.size() != n) throw DomainError("cells_per_axis must have one entry per axis");
    for (std::size_t k : cells_per_axis)
        if (k < 1) throw DomainError("cells_per_axis entries must be >= 1");

    std::vector<std::vector<double>> axis_breaks(n);
    for (std::size_t d = 0; d < n; ++d) {
        for (std::size_t i = 0; i < cells_per_axis[d]; ++i)
            axis_breaks[d].push_back(b.lower[d] + b.width(d) * static_cast<double>(i) /
                                                      static_cast<double>(cells_per_axis[d]));
        axis_breaks[d].push_back(b.upper[d]);
    }

    std::size_t total = 1;
    for (std::size_t k : cells_per_axis) total *= k;
    std::vector<Box> cells;
    std::vector<std::vector<std::vector<double>>> breaks;
    cells.reserve(total);
    breaks.reserve(total);
    for (std::size_t c = 0; c < total; ++c) {
        std::size_t rem = c;
        Box cell{Point(n), Point(n)};
        for (std::size_t d = n; d-- > 0;) {
            std::size_t i = rem % cells_per_axis[d];
            rem /= cells_per_axis[d];
            cell.lower[d] = axis_breaks[d][i];
            cell.upper[d] = axis_breaks[d][i + 1];
        }
        std::vector<std::vector<double>> br(n);
        for (std::size_t d = 0; d < n; ++d) br[d] = {cell.lower[d], cell.upper[d]};
        cells.push_back(std::move(cell));
        breaks.push_back(std::move(br));
    }
    return CellPartition(std::move(b), cells_per_axis, std::move(cells), std::move(breaks));
}

CellPartition subdivide(const CellPartition& p, double delta) {
    if (!(delta > 0.0)) throw DomainError("subdivide: delta must be > 0");
    std::vector<Box> cells;
    std::vector<std::vector<std::vector<double>>> breaks;
    for (std::size_t c = 0; c < p.cell_count(); ++c) {
        cells.push_back(p.cell(c));
        breaks.push_back(refine_cell(p.breakpoints(c), delta));
    }
    return CellPartition(p.bounds(), p.cells_per_axis(), std::move(cells), std::move(breaks));
}

CellPartition subdivide_cell(const CellPartition& p, std::size_t target, double delta) {
    if (!(delta > 0.0)) throw DomainError("subdivide: delta must be > 0");
    std::vector<Box> cells;
    std::vector<std::vector<std::vector<double>>> breaks;
    for (std::size_t c = 0; c < p.cell_count(); ++c) {
        cells.push_back(p.cell(c));
        breaks.push_back(c == target ? refine_cell(p.breakpoints(c), delta) : p.breakpoints(c));
    }
    return CellPartition(p.bounds(), p.cells_per_axis(), std::move(cells), std::move(breaks));
}

// ---------------------------------------------------------------------------
// Skeleton

Skeleton::Skeleton(const CellPartition& p) : geometry_(p) {
    const std::size_t n = p.dim();
    for (std::size_t c = 0; c < p.cell_count(); ++c) {
        const Box& cell = p.cell(c);
        for (std::size_t d = 0; d < n; ++d) {
            for (double v : p.breakpoints(c)[d]) {
                Box extent = cell;
                extent.lower[d] = v;
                extent.upper[d] = v;
                faces_.push_back(Face{d, v, std::move(extent)});
            }
        }
    }
}

bool Skeleton::contains(std::span<const double> x) const { return geometry_.on_skeleton(x); }

std::size_t Skeleton::codim(std::span<const double> x) const { return geometry_.skeleton_codim(x); }

Skeleton skeleton_of(const CellPartition& p) { return Skeleton(p); }

// ---------------------------------------------------------------------------
// Sampling

SampleStream::SampleStream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
}

double SampleStream::next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::vector<Point> sample_points(const CellPartition& p, std::size_t per_cell, double margin, std::uint64_t seed) {
    if (per_cell < 1) throw DomainError("sample_points: per_cell must be >= 1");
    if (!(margin > 0.0 && margin < 0.5)) throw DomainError("sample_points: margin must lie in (0, 0.5)");
    const std::size_t n = p.dim();
    std::vector<Point> out;
    out.reserve(p.subcell_count() * per_cell);
    SampleStream rng(seed, 0);
    for (std::size_t s = 0; s < p.subcell_count(); ++s) {
        Box b = p.subcell(s);
        for (std::size_t k = 0; k < per_cell; ++k) {
            Point x(n);
            for (std::size_t d = 0; d < n; ++d) {
                double w = b.width(d);
                double lo = b.lower[d] + margin * w;
                double hi = b.upper[d] - margin * w;
                double t = lo + (hi - lo) * rng.next();
                x[d] = std::clamp(t, lo, hi);
            }
            out.push_back(std::move(x));
        }
    }
    return out;
}

} // namespace ocm
