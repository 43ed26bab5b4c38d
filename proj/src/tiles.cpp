#include "tilebasis/tiles.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "tilebasis/report.hpp"

namespace tilebasis
{

static_assert(sizeof(long) == 8, "LatticePoint conversions assume LP64");

//------------------------------------------------------------------------------
// Lattice
//------------------------------------------------------------------------------

namespace
{

// Gauss-Jordan over Q.  Returns det(M); fills inverse when det != 0.
Rational invert(const std::vector<RationalVector>& m, std::vector<RationalVector>& inverse)
{
    const std::size_t n = m.size();
    std::vector<RationalVector> a = m;
    inverse.assign(n, RationalVector(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        inverse[i][i] = 1;

    Rational det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0)
            ++pivot;
        if (pivot == n)
            return Rational(0);
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            std::swap(inverse[pivot], inverse[col]);
            det = -det;
        }
        const Rational p = a[col][col];
        det *= p;
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] /= p;
            inverse[col][j] /= p;
        }
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col] == 0)
                continue;
            const Rational f = a[row][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[row][j] -= f * a[col][j];
                inverse[row][j] -= f * inverse[col][j];
            }
        }
    }
    return det;
}

}  // namespace

Lattice::Lattice(std::vector<RationalVector> rows) : rows_(std::move(rows))
{
    if (rows_.empty())
        throw std::invalid_argument("lattice: empty basis matrix");
    for (const auto& row : rows_)
        if (row.size() != rows_.size())
            throw std::invalid_argument("lattice: basis matrix must be square");
    Rational det = invert(rows_, inverse_);
    if (det == 0)
        throw std::invalid_argument("lattice: basis matrix is singular");
    det_abs_ = abs(det);
}

Lattice Lattice::identity(std::size_t dimension)
{
    std::vector<RationalVector> rows(dimension, RationalVector(dimension, Rational(0)));
    for (std::size_t i = 0; i < dimension; ++i)
        rows[i][i] = 1;
    return Lattice(std::move(rows));
}

std::vector<RationalVector> Lattice::dual_basis() const
{
    const std::size_t n = dimension();
    std::vector<RationalVector> out(n, RationalVector(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out[i][j] = inverse_[j][i];
    return out;
}

//------------------------------------------------------------------------------
// Box
//------------------------------------------------------------------------------

Box::Box(RationalVector lo_, RationalVector hi_) : lo(std::move(lo_)), hi(std::move(hi_))
{
    if (lo.empty() || lo.size() != hi.size())
        throw std::invalid_argument("box: lo/hi dimension mismatch");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!(lo[i] < hi[i]))
            throw std::invalid_argument("box: empty extent in coordinate " + std::to_string(i) +
                                        " (" + tilebasis::to_string(lo[i]) + " >= " +
                                        tilebasis::to_string(hi[i]) + ")");
}

Box Box::interval(const Rational& lo, const Rational& hi) { return Box({lo}, {hi}); }

Rational Box::volume() const
{
    Rational v = 1;
    for (std::size_t i = 0; i < lo.size(); ++i)
        v *= hi[i] - lo[i];
    return v;
}

bool Box::contains(const RationalVector& point) const
{
    if (point.size() != lo.size())
        return false;
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (point[i] < lo[i] || !(point[i] < hi[i]))
            return false;
    return true;
}

bool Box::overlaps(const Box& other) const
{
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!(lo[i] < other.hi[i] && other.lo[i] < hi[i]))
            return false;
    return true;
}

std::string Box::to_string() const
{
    std::string out;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (i)
            out += " x ";
        out += "[" + tilebasis::to_string(lo[i]) + ", " + tilebasis::to_string(hi[i]) + ")";
    }
    return out;
}

//------------------------------------------------------------------------------
// GeneratorSpec
//------------------------------------------------------------------------------

std::int64_t GeneratorSpec::param(std::string_view key) const
{
    auto it = params.find(std::string(key));
    if (it == params.end())
        throw std::invalid_argument("generator '" + name + "': missing parameter '" + std::string(key) + "'");
    return it->second;
}

std::int64_t GeneratorSpec::param_or(std::string_view key, std::int64_t fallback) const
{
    auto it = params.find(std::string(key));
    return it == params.end() ? fallback : it->second;
}

std::string GeneratorSpec::describe() const
{
    std::string out = name;
    for (const auto& [key, value] : params)
        out += " " + key + "=" + std::to_string(value);
    return out;
}

//------------------------------------------------------------------------------
// MultiTile
//------------------------------------------------------------------------------

namespace
{

void check_disjoint(const std::vector<Box>& boxes)
{
    if (boxes.front().dimension() == 1) {
        std::vector<std::size_t> order(boxes.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return boxes[a].lo[0] < boxes[b].lo[0]; });
        for (std::size_t i = 1; i < order.size(); ++i) {
            const Box& prev = boxes[order[i - 1]];
            const Box& next = boxes[order[i]];
            if (next.lo[0] < prev.hi[0])
                throw std::invalid_argument("multitile: boxes overlap: " + prev.to_string() + " and " +
                                            next.to_string());
        }
        return;
    }
    for (std::size_t i = 0; i < boxes.size(); ++i)
        for (std::size_t j = i + 1; j < boxes.size(); ++j)
            if (boxes[i].overlaps(boxes[j]))
                throw std::invalid_argument("multitile: boxes overlap: " + boxes[i].to_string() + " and " +
                                            boxes[j].to_string());
}

}  // namespace

MultiTile::MultiTile(std::vector<Box> boxes) : boxes_(std::move(boxes))
{
    if (boxes_.empty())
        throw std::invalid_argument("multitile: no boxes");
    dimension_ = boxes_.front().dimension();
    for (const auto& b : boxes_)
        if (b.dimension() != dimension_)
            throw std::invalid_argument("multitile: boxes of mixed dimension");
    check_disjoint(boxes_);
}

MultiTile::MultiTile(std::vector<Box> boxes, GeneratorSpec generator, int truncation_level)
    : MultiTile(std::move(boxes))
{
    if (truncation_level < 0)
        throw std::invalid_argument("multitile: negative truncation level");
    generator_ = std::move(generator);
    truncation_level_ = truncation_level;
}

Rational MultiTile::measure() const
{
    Rational total = 0;
    for (const auto& b : boxes_)
        total += b.volume();
    return total;
}

std::string MultiTile::canonical_text() const
{
    std::string out = "dim " + std::to_string(dimension_) + "\n";
    if (generator_)
        out += "generator " + generator_->describe() + " J=" + std::to_string(truncation_level_) + "\n";
    // sorted, so the text does not depend on input order
    std::vector<const Box*> order;
    for (const auto& b : boxes_)
        order.push_back(&b);
    std::sort(order.begin(), order.end(), [](const Box* x, const Box* y) {
        return x->lo != y->lo ? x->lo < y->lo : x->hi < y->hi;
    });
    for (const Box* bp : order) {
        const Box& b = *bp;
        out += "box";
        for (std::size_t i = 0; i < dimension_; ++i)
            out += " " + tilebasis::to_string(b.lo[i]) + " " + tilebasis::to_string(b.hi[i]);
        out += "\n";
    }
    return out;
}

std::uint64_t MultiTile::hash() const { return fnv1a64(canonical_text()); }

MultiTile MultiTile::translated(const LatticePoint& shift) const
{
    if (shift.size() != dimension_)
        throw std::invalid_argument("translate: dimension mismatch");
    std::vector<Box> moved;
    moved.reserve(boxes_.size());
    for (const auto& b : boxes_) {
        RationalVector lo = b.lo, hi = b.hi;
        for (std::size_t i = 0; i < dimension_; ++i) {
            lo[i] += to_integer(shift[i]);
            hi[i] += to_integer(shift[i]);
        }
        moved.emplace_back(std::move(lo), std::move(hi));
    }
    return MultiTile(std::move(moved));
}

//------------------------------------------------------------------------------
// Pattern / PatternSet / DifferenceSet
//------------------------------------------------------------------------------

Pattern::Pattern(std::vector<LatticePoint> points) : points_(std::move(points))
{
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i].size() != points_.front().size() || points_[i].empty())
            throw std::invalid_argument("pattern: points of mixed dimension");
        if (i > 0 && !(points_[i - 1] < points_[i]))
            throw std::invalid_argument("pattern: points not strictly increasing");
    }
}

Pattern Pattern::from_unsorted(std::vector<LatticePoint> points)
{
    std::sort(points.begin(), points.end());
    return Pattern(std::move(points));
}

Pattern Pattern::of(std::initializer_list<std::int64_t> values)
{
    std::vector<LatticePoint> pts;
    for (auto v : values)
        pts.push_back({v});
    return Pattern(std::move(pts));
}

Pattern Pattern::translated(const LatticePoint& shift) const
{
    std::vector<LatticePoint> pts = points_;
    for (auto& p : pts) {
        if (p.size() != shift.size())
            throw std::invalid_argument("pattern translate: dimension mismatch");
        for (std::size_t i = 0; i < p.size(); ++i)
            p[i] += shift[i];
    }
    return Pattern(std::move(pts));
}

std::string Pattern::to_string() const
{
    std::string out = "(";
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (i)
            out += ",";
        out += tilebasis::to_string(points_[i]);
    }
    return out + ")";
}

PatternSet::PatternSet(std::vector<PatternCell> entries) : entries_(std::move(entries))
{
    if (entries_.empty())
        throw std::invalid_argument("pattern set: empty");
    order_ = entries_.front().pattern.size();
    dimension_ = entries_.front().pattern.dimension();
    if (order_ == 0)
        throw std::invalid_argument("pattern set: empty pattern");
    Rational total = 0;
    for (const auto& e : entries_) {
        if (e.pattern.size() != order_ || e.pattern.dimension() != dimension_)
            throw std::invalid_argument("pattern set: patterns of different order or dimension");
        if (!(e.measure > 0))
            throw std::invalid_argument("pattern set: non-positive cell measure for " + e.pattern.to_string());
        total += e.measure;
    }
    if (total != 1)
        throw std::invalid_argument("pattern set: cell measures sum to " + tilebasis::to_string(total) +
                                    ", not 1");
    std::vector<const Pattern*> sorted;
    for (const auto& e : entries_)
        sorted.push_back(&e.pattern);
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return *a < *b; });
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (*sorted[i] == *sorted[i - 1])
            throw std::invalid_argument("pattern set: duplicate pattern " + sorted[i]->to_string());
}

PatternSet PatternSet::uniform(std::vector<Pattern> patterns)
{
    std::vector<PatternCell> entries;
    const Rational share(1, static_cast<unsigned long>(patterns.size() ? patterns.size() : 1));
    for (auto& p : patterns)
        entries.push_back({std::move(p), share, {}});
    return PatternSet(std::move(entries));
}

std::vector<Pattern> PatternSet::patterns() const
{
    std::vector<Pattern> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_)
        out.push_back(e.pattern);
    return out;
}

std::optional<std::size_t> PatternSet::locate(const RationalVector& omega) const
{
    for (std::size_t i = 0; i < entries_.size(); ++i)
        for (const auto& cell : entries_[i].cells)
            if (cell.contains(omega))
                return i;
    return std::nullopt;
}

DifferenceSet::DifferenceSet(std::vector<LatticePoint> elements)
{
    elements_.reserve(2 * elements.size());
    for (auto& y : elements) {
        if (std::all_of(y.begin(), y.end(), [](auto v) { return v == 0; }))
            throw std::invalid_argument("difference set: zero vector is not allowed");
        LatticePoint neg = y;
        for (auto& v : neg)
            v = -v;
        elements_.push_back(std::move(neg));
        elements_.push_back(std::move(y));
    }
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
}

bool DifferenceSet::contains(const LatticePoint& y) const
{
    return std::binary_search(elements_.begin(), elements_.end(), y);
}

NotAMultiTile::NotAMultiTile(Witness first, Witness second)
    : std::runtime_error("not a multi-tile: multiplicity " + std::to_string(first.multiplicity) + " on " +
                         first.cell.to_string() + " but " + std::to_string(second.multiplicity) + " on " +
                         second.cell.to_string()),
      first_(std::move(first)),
      second_(std::move(second))
{
}

//------------------------------------------------------------------------------
// normalize
//------------------------------------------------------------------------------

MultiTile normalize(const Lattice& lattice, const std::vector<Box>& raw_boxes)
{
    const std::size_t d = lattice.dimension();
    const auto& inv = lattice.inverse();

    // Each output coordinate r takes input coordinate source[r], scaled.
    std::vector<std::size_t> source(d);
    std::vector<bool> used(d, false);
    for (std::size_t r = 0; r < d; ++r) {
        std::size_t nonzero = 0;
        for (std::size_t c = 0; c < d; ++c)
            if (inv[r][c] != 0) {
                ++nonzero;
                source[r] = c;
            }
        if (nonzero != 1 || used[source[r]])
            throw std::invalid_argument("normalize: boxes are not axis-aligned in the lattice frame "
                                        "(inverse basis matrix is not monomial)");
        used[source[r]] = true;
    }

    std::vector<Box> boxes;
    boxes.reserve(raw_boxes.size());
    for (const auto& raw : raw_boxes) {
        if (raw.dimension() != d)
            throw std::invalid_argument("normalize: box dimension does not match lattice");
        RationalVector lo(d), hi(d);
        for (std::size_t r = 0; r < d; ++r) {
            const Rational& s = inv[r][source[r]];
            Rational a = s * raw.lo[source[r]];
            Rational b = s * raw.hi[source[r]];
            // A negative scale flips [lo,hi) to (b,a]; the boundary has measure zero.
            lo[r] = s > 0 ? a : b;
            hi[r] = s > 0 ? b : a;
        }
        boxes.emplace_back(std::move(lo), std::move(hi));
    }
    return MultiTile(std::move(boxes));
}

//------------------------------------------------------------------------------
// Arrangement of P into elementary cells
//------------------------------------------------------------------------------

namespace
{

struct Arrangement
{
    std::size_t dimension = 0;
    std::vector<RationalVector> breaks;          // per dimension, sorted, includes 0 and 1
    std::vector<std::vector<LatticePoint>> fibers;  // per elementary cell (row-major)

    std::size_t cell_count() const { return fibers.size(); }

    std::vector<std::size_t> unflatten(std::size_t flat) const
    {
        std::vector<std::size_t> idx(dimension);
        for (std::size_t i = dimension; i-- > 0;) {
            const std::size_t n = breaks[i].size() - 1;
            idx[i] = flat % n;
            flat /= n;
        }
        return idx;
    }

    Box cell_box(std::size_t flat) const
    {
        auto idx = unflatten(flat);
        RationalVector lo(dimension), hi(dimension);
        for (std::size_t i = 0; i < dimension; ++i) {
            lo[i] = breaks[i][idx[i]];
            hi[i] = breaks[i][idx[i] + 1];
        }
        return Box(std::move(lo), std::move(hi));
    }
};

struct Piece
{
    LatticePoint lattice_point;
    RationalVector lo, hi;  // inside [0,1]^d
};

constexpr std::size_t kMaxPieces = 50'000'000;

// Splits each box along the integer grid.  A piece with lattice point m and
// fractional extent [lo,hi) covers omega in P exactly when omega + m lies in
// the box.
std::vector<Piece> split_into_pieces(const MultiTile& tile)
{
    const std::size_t d = tile.dimension();
    std::vector<Piece> pieces;
    for (const auto& box : tile.boxes()) {
        std::vector<Integer> first(d), last(d);
        std::size_t count = 1;
        for (std::size_t i = 0; i < d; ++i) {
            first[i] = floor_of(box.lo[i]);
            last[i] = ceil_of(box.hi[i]) - 1;
            Integer span = last[i] - first[i] + 1;
            if (span > Integer(static_cast<long>(kMaxPieces)))
                throw std::length_error("box spans too many unit cells: " + box.to_string());
            count *= span.get_ui();
            if (count > kMaxPieces)
                throw std::length_error("tile spans too many unit cells");
        }
        std::vector<Integer> m = first;
        for (std::size_t n = 0; n < count; ++n) {
            Piece piece;
            piece.lattice_point.resize(d);
            piece.lo.resize(d);
            piece.hi.resize(d);
            for (std::size_t i = 0; i < d; ++i) {
                piece.lattice_point[i] = to_int64(m[i]);
                Rational lo = box.lo[i] - m[i];
                Rational hi = box.hi[i] - m[i];
                piece.lo[i] = lo > 0 ? lo : Rational(0);
                piece.hi[i] = hi < 1 ? hi : Rational(1);
            }
            pieces.push_back(std::move(piece));
            // odometer increment, last coordinate fastest
            for (std::size_t i = d; i-- > 0;) {
                if (m[i] < last[i]) {
                    ++m[i];
                    break;
                }
                m[i] = first[i];
            }
        }
        if (pieces.size() > kMaxPieces)
            throw std::length_error("tile spans too many unit cells");
    }
    return pieces;
}

Arrangement build_arrangement(const MultiTile& tile)
{
    const std::size_t d = tile.dimension();
    auto pieces = split_into_pieces(tile);

    Arrangement arr;
    arr.dimension = d;
    arr.breaks.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        auto& br = arr.breaks[i];
        br.reserve(2 * pieces.size() + 2);
        br.emplace_back(0);
        br.emplace_back(1);
        for (const auto& p : pieces) {
            br.push_back(p.lo[i]);
            br.push_back(p.hi[i]);
        }
        std::sort(br.begin(), br.end());
        br.erase(std::unique(br.begin(), br.end()), br.end());
    }

    std::size_t cells = 1;
    for (std::size_t i = 0; i < d; ++i)
        cells *= arr.breaks[i].size() - 1;
    if (cells > kMaxPieces)
        throw std::length_error("arrangement has too many cells");
    arr.fibers.resize(cells);

    std::vector<std::size_t> begin(d), end(d), idx(d);
    for (const auto& p : pieces) {
        for (std::size_t i = 0; i < d; ++i) {
            const auto& br = arr.breaks[i];
            begin[i] = static_cast<std::size_t>(std::lower_bound(br.begin(), br.end(), p.lo[i]) - br.begin());
            end[i] = static_cast<std::size_t>(std::lower_bound(br.begin(), br.end(), p.hi[i]) - br.begin());
        }
        idx = begin;
        while (true) {
            std::size_t flat = 0;
            for (std::size_t i = 0; i < d; ++i)
                flat = flat * (arr.breaks[i].size() - 1) + idx[i];
            arr.fibers[flat].push_back(p.lattice_point);
            std::size_t i = d;
            while (i-- > 0) {
                if (++idx[i] < end[i])
                    break;
                idx[i] = begin[i];
            }
            if (i == static_cast<std::size_t>(-1))
                break;
        }
    }
    for (auto& f : arr.fibers)
        std::sort(f.begin(), f.end());
    return arr;
}

std::size_t check_constant_multiplicity(const Arrangement& arr)
{
    const std::size_t k = arr.fibers.front().size();
    for (std::size_t c = 1; c < arr.cell_count(); ++c)
        if (arr.fibers[c].size() != k)
            throw NotAMultiTile({arr.cell_box(0), k}, {arr.cell_box(c), arr.fibers[c].size()});
    if (k == 0)
        throw NotAMultiTile({arr.cell_box(0), 0}, {arr.cell_box(0), 0});
    return k;
}

}  // namespace

std::size_t verify_k_tile(const MultiTile& tile)
{
    return check_constant_multiplicity(build_arrangement(tile));
}

PatternSet pattern_cells(const MultiTile& tile)
{
    const Arrangement arr = build_arrangement(tile);
    check_constant_multiplicity(arr);

    std::map<Pattern, PatternCell> grouped;
    for (std::size_t c = 0; c < arr.cell_count(); ++c) {
        Pattern pattern(arr.fibers[c]);
        Box cell = arr.cell_box(c);
        auto [it, inserted] = grouped.try_emplace(pattern, PatternCell{pattern, Rational(0), {}});
        auto& entry = it->second;
        entry.measure += cell.volume();
        // Row-major order makes 1-D neighbours consecutive; merge them.
        if (arr.dimension == 1 && !entry.cells.empty() && entry.cells.back().hi[0] == cell.lo[0])
            entry.cells.back().hi[0] = cell.hi[0];
        else
            entry.cells.push_back(std::move(cell));
    }

    std::vector<PatternCell> entries;
    entries.reserve(grouped.size());
    for (auto& [_, entry] : grouped)
        entries.push_back(std::move(entry));
    return PatternSet(std::move(entries));
}

DifferenceSet difference_set(std::span<const Pattern> patterns)
{
    std::vector<LatticePoint> diffs;
    for (const auto& t : patterns)
        for (std::size_t i = 0; i < t.size(); ++i)
            for (std::size_t j = i + 1; j < t.size(); ++j) {
                LatticePoint y(t[i].size());
                for (std::size_t c = 0; c < y.size(); ++c)
                    y[c] = t[j][c] - t[i][c];
                diffs.push_back(std::move(y));
            }
    return DifferenceSet(std::move(diffs));
}

DifferenceSet difference_set(const PatternSet& patterns)
{
    auto list = patterns.patterns();
    return difference_set(std::span<const Pattern>(list));
}

}  // namespace tilebasis
