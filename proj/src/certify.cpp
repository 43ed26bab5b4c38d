#include "tilebasis/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tilebasis/gallery.hpp"
#include "tilebasis/report.hpp"

namespace tilebasis
{

//------------------------------------------------------------------------------
// Target matrix and epsilon(k)
//------------------------------------------------------------------------------

Integer integer_determinant(std::vector<std::vector<Integer>> m)
{
    const std::size_t n = m.size();
    if (n == 0)
        return 1;
    for (const auto& row : m)
        if (row.size() != n)
            throw std::invalid_argument("integer_determinant: matrix is not square");
    Integer previous = 1;
    int sign = 1;
    for (std::size_t p = 0; p + 1 < n; ++p) {
        if (m[p][p] == 0) {
            std::size_t swap = p + 1;
            while (swap < n && m[swap][p] == 0)
                ++swap;
            if (swap == n)
                return 0;
            std::swap(m[p], m[swap]);
            sign = -sign;
        }
        for (std::size_t i = p + 1; i < n; ++i) {
            for (std::size_t j = p + 1; j < n; ++j) {
                Integer v = m[i][j] * m[p][p] - m[i][p] * m[p][j];
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), previous.get_mpz_t());
                m[i][j] = v;
            }
            m[i][p] = 0;
        }
        previous = m[p][p];
    }
    Integer det = sign * m[n - 1][n - 1];
    return abs(det);
}

TargetMatrix target_matrix(int k)
{
    if (k < 1)
        throw std::out_of_range("target_matrix: k must be >= 1");
    TargetMatrix out;
    std::vector<std::vector<Integer>> exact;
    for (int i = 1; i <= k; ++i) {
        std::vector<int> row;
        for (int j = 1; j <= k; ++j)
            row.push_back(j <= k + 1 - i ? 1 : -1);
        exact.emplace_back(row.begin(), row.end());
        out.entries.push_back(std::move(row));
    }
    out.delta = integer_determinant(std::move(exact));
    return out;
}

double epsilon_for_k(int k)
{
    const Integer delta = target_matrix(k).delta;
    Integer factorial = 1;
    for (int i = 2; i <= k; ++i)
        factorial *= i;
    auto ok = [&](long m) {
        const Rational base = ratio(10000 + m, 10000);
        Rational power = 1;
        for (int i = 0; i < k; ++i)
            power *= base;
        return Rational(factorial) * (power - 1) < Rational(delta, 2);
    };
    long lo = 0, hi = 10000;  // ok(lo) holds, ok(hi) fails for every k
    while (hi - lo > 1) {
        long mid = (lo + hi) / 2;
        (ok(mid) ? lo : hi) = mid;
    }
    return static_cast<double>(lo) / 10000.0;
}

//------------------------------------------------------------------------------
// Kronecker search
//------------------------------------------------------------------------------

void check_kronecker_hypotheses(std::span<const Pattern> patterns)
{
    if (patterns.empty())
        throw HypothesisError("empty pattern set");
    const std::size_t k = patterns.front().size();
    std::set<std::int64_t> seen;
    for (const auto& t : patterns) {
        if (t.dimension() != 1)
            throw HypothesisError("Kronecker certificates need one-dimensional patterns");
        if (t.size() != k)
            throw HypothesisError("patterns of different sizes");
        if (t[0][0] != 0)
            throw HypothesisError("pattern " + t.to_string() + " does not start at 0");
        for (std::size_t i = 1; i < k; ++i)
            if (!seen.insert(t[i][0]).second)
                throw HypothesisError("patterns share the nonzero point " + std::to_string(t[i][0]));
    }
}

namespace
{

struct Constraint
{
    Integer lambda;
    Rational phase;  // 0 for target +1, 1/2 for target -1
};

struct Interval
{
    Rational lo, hi;
};

// Is there g in [0,1] with dist(g*lambda - phase, Z) <= eta for every
// constraint?  Depth-first over the admissible residue windows, lambdas
// ascending; returns the first surviving interval.
std::optional<Interval> feasible(const std::vector<Constraint>& cs, const Rational& eta, std::size_t budget,
                                 std::size_t& nodes)
{
    struct Frame
    {
        Interval range;
        Integer m, m_end;
    };
    if (cs.empty())
        return Interval{Rational(0), Rational(0)};
    std::vector<Frame> stack;
    std::size_t used = 0;
    auto open = [&](const Interval& range, std::size_t level) {
        const auto& c = cs[level];
        Frame f{range, ceil_of(range.lo * c.lambda - c.phase - eta), floor_of(range.hi * c.lambda - c.phase + eta)};
        return f;
    };
    stack.push_back(open(Interval{Rational(0), Rational(1)}, 0));
    while (!stack.empty()) {
        ++nodes;
        if (++used > budget)
            return std::nullopt;
        Frame& top = stack.back();
        if (top.m > top.m_end) {
            stack.pop_back();
            continue;
        }
        const std::size_t level = stack.size() - 1;
        const auto& c = cs[level];
        Rational lo = (Rational(top.m) + c.phase - eta) / Rational(c.lambda);
        Rational hi = (Rational(top.m) + c.phase + eta) / Rational(c.lambda);
        top.m += 1;
        Interval next{std::max(lo, top.range.lo), std::min(hi, top.range.hi)};
        if (next.lo > next.hi)
            continue;
        if (level + 1 == cs.size())
            return next;
        stack.push_back(open(next, level + 1));
    }
    return std::nullopt;
}

// Simplest rational (smallest denominator) in [a, b], 0 <= a <= b.
Rational simplest_between(Rational a, Rational b)
{
    Integer c = ceil_of(a);
    if (Rational(c) <= b)
        return Rational(c);
    Integer n = floor_of(a);
    Rational inner = simplest_between(1 / (b - Rational(n)), 1 / (a - Rational(n)));
    Rational out = Rational(n) + 1 / inner;
    out.canonicalize();
    return out;
}

double column_deviation(const std::vector<Constraint>& cs, const Rational& g)
{
    double worst = 0.0;
    for (const auto& c : cs)
        worst = std::max(worst, unit_gap(g * Rational(c.lambda) - c.phase));
    return worst;
}

}  // namespace

KroneckerReport kronecker_shift_search(std::span<const Pattern> patterns, double eps_target,
                                       const KroneckerOptions& options)
{
    check_kronecker_hypotheses(patterns);
    KroneckerReport out;
    out.k = static_cast<int>(patterns.front().size());
    out.target = target_matrix(out.k);
    out.epsilon_target = eps_target;
    for (const auto& t : patterns)
        for (std::size_t i = 1; i < t.size(); ++i)
            out.S.push_back(t[i][0]);
    std::sort(out.S.begin(), out.S.end());

    out.g.assign(static_cast<std::size_t>(out.k), Rational(0));
    out.column_epsilon.assign(static_cast<std::size_t>(out.k), 0.0);
    for (int j = 1; j < out.k; ++j) {
        std::vector<Constraint> cs;
        for (const auto& t : patterns)
            for (std::size_t i = 1; i < t.size(); ++i)
                cs.push_back({to_integer(t[i][0]),
                              out.target.entries[i][static_cast<std::size_t>(j)] > 0 ? Rational(0) : Rational(1, 2)});
        std::sort(cs.begin(), cs.end(), [](const Constraint& a, const Constraint& b) { return a.lambda < b.lambda; });

        // Bisection on the phase tolerance; eta = 1/2 is always feasible.
        Rational lo(0), hi(1, 2);
        std::optional<Interval> best = feasible(cs, lo, options.node_budget, out.nodes);
        if (best) {
            hi = lo;
        } else {
            best = feasible(cs, hi, options.node_budget, out.nodes);
            for (int step = 0; step < options.tolerance_steps; ++step) {
                Rational mid = (lo + hi) / 2;
                if (auto found = feasible(cs, mid, options.node_budget, out.nodes)) {
                    hi = mid;
                    best = found;
                } else {
                    lo = mid;
                }
            }
        }
        if (!best)
            throw std::logic_error("kronecker_shift_search: tolerance 1/2 reported infeasible");
        Rational g = fractional_part(simplest_between(best->lo, best->hi));
        out.g[static_cast<std::size_t>(j)] = g;
        out.column_epsilon[static_cast<std::size_t>(j)] = column_deviation(cs, g);
    }
    out.epsilon_achieved = *std::max_element(out.column_epsilon.begin(), out.column_epsilon.end());
    out.success = out.epsilon_achieved <= eps_target;
    std::ostringstream msg;
    msg << "achieved eps " << format_real(out.epsilon_achieved) << (out.success ? " <= " : " > ") << "target "
        << format_real(eps_target) << " over |S|=" << out.S.size();
    out.message = msg.str();
    return out;
}

ShiftVector kronecker_shift(const KroneckerReport& report)
{
    std::vector<RationalVector> a;
    for (const auto& g : report.g)
        a.push_back({g});
    return ShiftVector(std::move(a));
}

//------------------------------------------------------------------------------
// Certificates
//------------------------------------------------------------------------------

std::string to_string(CertificateKind kind)
{
    switch (kind) {
    case CertificateKind::kronecker:
        return "kronecker";
    case CertificateKind::admissible:
        return "admissible";
    case CertificateKind::vandermonde_gap:
        return "vandermonde_gap";
    case CertificateKind::finite_exact:
        return "finite_exact";
    }
    return "?";
}

CertificateKind parse_certificate_kind(std::string_view text)
{
    for (auto kind : {CertificateKind::kronecker, CertificateKind::admissible, CertificateKind::vandermonde_gap,
                      CertificateKind::finite_exact})
        if (text == to_string(kind))
            return kind;
    throw std::invalid_argument("unknown certificate kind '" + std::string(text) + "'");
}

std::string Certificate::to_text() const
{
    std::string out = "certificate tilebasis\n";
    out += "kind " + to_string(kind) + "\n";
    out += "bound_A " + format_real(bound_A, 17) + "\n";
    out += "witness " + witness.to_string() + "\n";
    out += "validity " + std::string(all_levels ? "all_levels" : "proved_at_level") + "\n";
    out += "probed_level " + std::to_string(probed_level) + "\n";
    if (!validity_note.empty())
        out += "note " + validity_note + "\n";
    for (const auto& [key, value] : evidence)
        out += "evidence." + key + " " + value + "\n";
    out += "scope_hash fnv1a64:" + hex64(scope_hash) + "\n";
    out += "scope\n" + scope_section;
    out += "end_certificate\n";
    return out;
}

Certificate Certificate::parse(std::string_view text)
{
    Certificate out;
    std::istringstream in{std::string(text)};
    std::string line;
    bool header = false, in_scope = false, closed = false;
    bool have_kind = false, have_bound = false, have_witness = false, have_hash = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (in_scope) {
            if (line == "end_certificate") {
                closed = true;
                break;
            }
            out.scope_section += line + "\n";
            continue;
        }
        if (line.empty() || line[0] == '#')
            continue;
        auto space = line.find(' ');
        std::string key = line.substr(0, space);
        std::string value = space == std::string::npos ? "" : line.substr(space + 1);
        if (!header) {
            if (line != "certificate tilebasis")
                throw std::invalid_argument("certificate: missing 'certificate tilebasis' header");
            header = true;
        } else if (key == "kind") {
            out.kind = parse_certificate_kind(value);
            have_kind = true;
        } else if (key == "bound_A") {
            out.bound_A = std::stod(value);
            have_bound = true;
        } else if (key == "witness") {
            out.witness = ShiftVector::parse(value);
            have_witness = true;
        } else if (key == "validity") {
            if (value != "all_levels" && value != "proved_at_level")
                throw std::invalid_argument("certificate: bad validity '" + value + "'");
            out.all_levels = value == "all_levels";
        } else if (key == "probed_level") {
            out.probed_level = std::stoi(value);
        } else if (key == "note") {
            out.validity_note = value;
        } else if (key.rfind("evidence.", 0) == 0) {
            out.evidence.emplace_back(key.substr(9), value);
        } else if (key == "scope_hash") {
            if (value.rfind("fnv1a64:", 0) != 0)
                throw std::invalid_argument("certificate: scope_hash must be fnv1a64:<hex>");
            out.scope_hash = std::stoull(value.substr(8), nullptr, 16);
            have_hash = true;
        } else if (key == "scope") {
            in_scope = true;
        } else {
            throw std::invalid_argument("certificate: unknown key '" + key + "'");
        }
    }
    if (!closed || !have_kind || !have_bound || !have_witness || !have_hash)
        throw std::invalid_argument("certificate: incomplete block");
    return out;
}

PatternSet pattern_set_at(const MultiTile& tile, int level)
{
    if (tile.generator())
        return gallery::closed_form_pattern_set(*tile.generator(), level);
    return pattern_cells(tile);
}

PatternSet pattern_set_of(const TileDescription& description)
{
    if (description.generator)
        return gallery::closed_form_pattern_set(*description.generator, description.level);
    return pattern_cells(to_multitile(description));
}

namespace
{

bool level_independent(const MultiTile& tile)
{
    if (!tile.generator())
        return true;
    const auto& name = tile.generator()->name;
    return name == "interval_ktile" || name == "split_two_tile";
}

std::string scope_section_of(const MultiTile& tile, int level)
{
    if (tile.generator())
        return "tile scope\n  dim 1\n  generator " + tile.generator()->describe() + " J=" + std::to_string(level) +
               "\nend\n";
    return write_tile_section("scope", tile, true);
}

Certificate make_certificate(CertificateKind kind, const MultiTile& tile, int level, double bound,
                             ShiftVector witness)
{
    Certificate c;
    c.kind = kind;
    c.bound_A = bound;
    c.witness = std::move(witness);
    c.probed_level = tile.generator() ? level : 0;
    c.scope_section = scope_section_of(tile, c.probed_level);
    c.scope_hash = fnv1a64(c.scope_section);
    if (level_independent(tile)) {
        c.all_levels = true;
        c.validity_note = "pattern set does not depend on the truncation level";
    } else {
        c.validity_note = "proved at level " + std::to_string(level);
    }
    return c;
}

}  // namespace

CertifyOutcome kronecker_certificate(const MultiTile& tile, int probe_level, const CertifyOptions& options)
{
    CertifyOutcome out;
    auto ps = pattern_set_at(tile, probe_level);
    const auto patterns = ps.patterns();
    const int k = static_cast<int>(ps.order());

    if (k == 1) {
        auto c = make_certificate(CertificateKind::kronecker, tile, probe_level, 1.0,
                                  ShiftVector(std::vector<RationalVector>{RationalVector(ps.dimension(), Rational(0))}));
        c.all_levels = true;
        c.validity_note = "k = 1: every fiber matrix is the scalar 1";
        out.certificate = std::move(c);
        out.message = "trivial certificate";
        return out;
    }

    KroneckerReport report;
    try {
        report = kronecker_shift_search(patterns, epsilon_for_k(k), options.kronecker);
    } catch (const HypothesisError& e) {
        out.message = std::string("hypothesis failure: ") + e.what();
        return out;
    }
    out.kronecker = report;
    if (!report.success) {
        out.message = "search failure: " + report.message;
        return out;
    }

    const ShiftVector a = kronecker_shift(report);
    const double half_delta = report.target.delta.get_d() / 2.0;
    const double eps = det_gap(ps, a);
    if (eps < half_delta - 1e-9) {
        out.message = "internal check failed: min |det| " + format_real(eps) + " < delta/2";
        return out;
    }
    const double k2 = static_cast<double>(k) * k;
    auto c = make_certificate(CertificateKind::kronecker, tile, probe_level,
                              lower_bound_from_det(half_delta, k2, static_cast<std::size_t>(k)), a);
    c.evidence = {
        {"delta", to_string(report.target.delta)},
        {"epsilon_k", format_real(report.epsilon_target)},
        {"epsilon_achieved", format_real(report.epsilon_achieved)},
        {"min_abs_det", format_real(eps)},
        {"S_size", std::to_string(report.S.size())},
    };
    if (tile.generator() && tile.generator()->name == "lacunary") {
        const auto q = tile.generator()->param("q");
        c.evidence.emplace_back("lacunary_q", std::to_string(q));
        c.evidence.emplace_back("declared_q_threshold", std::to_string(options.lacunary_ratio_threshold));
        if (q >= options.lacunary_ratio_threshold) {
            c.all_levels = true;
            c.validity_note = "asserted for all levels: lacunary ratio q=" + std::to_string(q) +
                              " meets the declared threshold " + std::to_string(options.lacunary_ratio_threshold) +
                              "; proved at level " + std::to_string(probe_level);
        }
    }
    out.certificate = std::move(c);
    out.message = report.message;
    return out;
}

CertifyOutcome admissible_certificate(const MultiTile& tile, int probe_level, const CertifyOptions& options)
{
    CertifyOutcome out;
    auto ps = pattern_set_at(tile, probe_level);
    const auto patterns = ps.patterns();
    auto pair = admissibility_search(patterns, options.admissible_n_max, default_v_candidates(ps.dimension()));
    if (!pair) {
        out.message = "no admissible (v, n) with n <= " + std::to_string(options.admissible_n_max) +
                      " and v entries in [-3, 3]";
        return out;
    }
    auto result = admissible_result(ps, *pair);
    const std::size_t k = ps.order();
    const double k2 = static_cast<double>(k) * static_cast<double>(k);
    auto c = make_certificate(CertificateKind::admissible, tile, probe_level,
                              lower_bound_from_det(*result.diagnostics.det_lower_bound, k2, k), result.a);
    c.evidence = {{"v", to_string(pair->v, ',')},
                  {"n", std::to_string(pair->n)},
                  {"gap", format_real(*result.diagnostics.gap)}};
    out.certificate = std::move(c);
    out.message = "admissible with n=" + std::to_string(pair->n);
    return out;
}

CertifyOutcome vandermonde_certificate(const MultiTile& tile, int probe_level, const CertifyOptions& options)
{
    CertifyOutcome out;
    auto ps = pattern_set_at(tile, probe_level);
    auto result = vandermonde_search(ps, options.grid_n);
    const double gap = *result.diagnostics.gap;
    if (!(gap > 0) || result.objective <= kSingularTolerance) {
        out.message = "every grid point annihilates some difference (gap " + format_real(gap) + ")";
        return out;
    }
    const std::size_t k = ps.order();
    const double k2 = static_cast<double>(k) * static_cast<double>(k);
    auto c = make_certificate(CertificateKind::vandermonde_gap, tile, probe_level,
                              lower_bound_from_det(*result.diagnostics.det_lower_bound, k2, k), result.a);
    c.evidence = {{"x", to_string(*result.diagnostics.step, ',')}, {"gap", format_real(gap)}};
    out.certificate = std::move(c);
    out.message = "gap " + format_real(gap);
    return out;
}

CertifyOutcome finite_exact_certificate(const MultiTile& tile, const ShiftVector& witness)
{
    CertifyOutcome out;
    if (!level_independent(tile)) {
        out.message = "finite_exact needs a pattern set that does not depend on the truncation level";
        return out;
    }
    auto ps = pattern_cells(tile);
    auto rb = riesz_bounds(ps, witness);
    if (rb.singular()) {
        out.message = "singular at pattern " + rb.lower_attained_at.to_string();
        return out;
    }
    auto c = make_certificate(CertificateKind::finite_exact, tile, 0, rb.A, witness);
    std::string list;
    for (const auto& t : ps.patterns())
        list += (list.empty() ? "" : " ") + t.to_string();
    c.evidence = {{"patterns", list}, {"B", format_real(rb.B)}};
    out.certificate = std::move(c);
    out.message = "exhaustive over " + std::to_string(ps.size()) + " patterns";
    return out;
}

VerifyOutcome verify_certificate(const Certificate& certificate)
{
    VerifyOutcome out;
    if (fnv1a64(certificate.scope_section) != certificate.scope_hash) {
        out.message = "scope hash mismatch";
        return out;
    }
    auto sections = parse_tile_file(certificate.scope_section);
    if (sections.size() != 1) {
        out.message = "scope must hold exactly one tile section";
        return out;
    }
    PatternSet ps = pattern_set_of(sections.front());
    if (ps.order() != certificate.witness.order()) {
        out.message = "witness has " + std::to_string(certificate.witness.order()) + " shifts for order " +
                      std::to_string(ps.order());
        return out;
    }
    out.recomputed_A = riesz_bounds(ps, certificate.witness).A;
    out.valid = out.recomputed_A >= certificate.bound_A - 1e-9;
    out.message = "recomputed A " + format_real(out.recomputed_A) + (out.valid ? " >= " : " < ") + "bound " +
                  format_real(certificate.bound_A);
    return out;
}

//------------------------------------------------------------------------------
// Annihilator gaps
//------------------------------------------------------------------------------

double annihilator_gap(const DifferenceSet& Y, const RationalVector& x)
{
    return vandermonde_objective(Y, x);
}

std::vector<double> prefix_gaps(std::span<const std::int64_t> Y, const Rational& x,
                                std::span<const std::size_t> prefix_lengths)
{
    std::vector<double> out;
    out.reserve(prefix_lengths.size());
    const Rational f = fractional_part(x);
    std::size_t next = 0;
    auto emit_until = [&](std::size_t done, const auto& gap_now) {
        while (next < prefix_lengths.size() && prefix_lengths[next] <= done) {
            out.push_back(gap_now());
            ++next;
        }
    };

    if (mpz_sizeinbase(f.get_den_mpz_t(), 2) <= 31) {
        // p, q < 2^31: products of residues fit in 64 bits.
        const auto q = static_cast<std::uint64_t>(f.get_den().get_ui());
        const auto p = static_cast<std::uint64_t>(f.get_num().get_ui());
        std::uint64_t best = q;  // min over y of q * dist(x y, Z)
        auto gap_now = [&] { return best >= q ? 2.0 : unit_gap(ratio(static_cast<std::int64_t>(best),
                                                                      static_cast<std::int64_t>(q))); };
        emit_until(0, gap_now);
        for (std::size_t i = 0; i < Y.size(); ++i) {
            std::int64_t y = Y[i] % static_cast<std::int64_t>(q);
            if (y < 0)
                y += static_cast<std::int64_t>(q);
            std::uint64_t r = (p * static_cast<std::uint64_t>(y)) % q;
            best = std::min(best, std::min(r, q - r));
            emit_until(i + 1, gap_now);
        }
        emit_until(std::numeric_limits<std::size_t>::max(), gap_now);
    } else {
        Rational best(1);
        auto gap_now = [&] { return best >= 1 ? 2.0 : unit_gap(best); };
        emit_until(0, gap_now);
        for (std::size_t i = 0; i < Y.size(); ++i) {
            Rational d = distance_to_integer(f * Rational(to_integer(Y[i])));
            if (d < best)
                best = d;
            emit_until(i + 1, gap_now);
        }
        emit_until(std::numeric_limits<std::size_t>::max(), gap_now);
    }
    return out;
}

double annihilator_gap(std::span<const std::int64_t> Y, const Rational& x)
{
    const std::size_t all[] = {Y.size()};
    return prefix_gaps(Y, x, all).front();
}

//------------------------------------------------------------------------------
// Two-tile test
//------------------------------------------------------------------------------

std::string to_string(TwoTileVerdict verdict)
{
    switch (verdict) {
    case TwoTileVerdict::certified_candidate:
        return "certified_candidate";
    case TwoTileVerdict::obstructed:
        return "obstructed";
    case TwoTileVerdict::inconclusive:
        return "inconclusive";
    }
    return "?";
}

TwoTileReport two_tile_test(const MultiTile& tile, int x_grid, const std::vector<int>& schedule,
                            const TwoTileOptions& options)
{
    if (x_grid < 1)
        throw std::invalid_argument("two_tile_test: x_grid must be positive");
    if (schedule.empty() || !std::is_sorted(schedule.begin(), schedule.end()) || schedule.front() < 0)
        throw std::invalid_argument("two_tile_test: schedule must be nonempty and ascending");
    if (tile.dimension() != 1)
        throw std::invalid_argument("two_tile_test: one-dimensional tiles only");

    TwoTileReport out;
    out.schedule = schedule;

    // Differences in block order, so Y at level J is a prefix.
    std::vector<std::int64_t> Y;
    std::vector<std::size_t> prefix;
    if (level_independent(tile)) {
        auto ps = pattern_cells(tile);
        if (ps.order() != 2)
            throw std::invalid_argument("two_tile_test: tile is a " + std::to_string(ps.order()) + "-tile, not a 2-tile");
        for (const auto& t : ps.patterns())
            Y.push_back(t[1][0] - t[0][0]);
        prefix.assign(schedule.size(), Y.size());
    } else {
        if (schedule.front() < 1)
            throw std::invalid_argument("two_tile_test: generator levels must be >= 1");
        auto patterns = gallery::block_patterns(*tile.generator(), schedule.back());
        if (patterns.front().size() != 2)
            throw std::invalid_argument("two_tile_test: generator yields " + std::to_string(patterns.front().size()) +
                                        "-point fibers, not a 2-tile");
        for (const auto& t : patterns)
            Y.push_back(t[1][0] - t[0][0]);
        for (int J : schedule)
            prefix.push_back(static_cast<std::size_t>(J));
    }

    std::set<Rational> xs;
    for (int i = 0; i < x_grid; ++i)
        xs.insert(ratio(i, x_grid));
    for (int q = 1; q <= options.max_denominator; ++q)
        for (int p = 0; p < q; ++p)
            xs.insert(ratio(p, q));

    const bool structural_known = tile.generator() && !level_independent(tile);
    double best_final = -1.0;
    for (const auto& x : xs) {
        GapTrajectory tr;
        tr.x = x;
        tr.gaps = prefix_gaps(Y, x, prefix);
        tr.decayed = tr.gaps.back() < options.decay_threshold;
        if (structural_known)
            if (auto s = gallery::structural_annihilator(*tile.generator(), x)) {
                tr.structural_element = s->element;
                tr.structural_block = s->block_index;
            }
        if (tr.decayed) {
            ++out.decayed;
        } else if (tr.structural_element) {
            ++out.structural;
        } else {
            ++out.survivors;
            if (tr.gaps.back() > best_final) {
                best_final = tr.gaps.back();
                out.witness = x;
            }
        }
        out.trajectories.push_back(std::move(tr));
    }
    if (out.survivors == 0)
        out.verdict = TwoTileVerdict::obstructed;
    else if (best_final >= options.survive_threshold)
        out.verdict = TwoTileVerdict::certified_candidate;
    else
        out.verdict = TwoTileVerdict::inconclusive;
    return out;
}

}  // namespace tilebasis
