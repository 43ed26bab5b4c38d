#include "tilebasis/gallery.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace tilebasis::gallery
{

namespace
{

Rational pow2_neg(int e)
{
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(e));
    return Rational(Integer(1), den);
}

Integer ipow(std::int64_t base, int e)
{
    Integer out;
    mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
    return out;
}

void require_params(const GeneratorSpec& spec, std::initializer_list<const char*> allowed)
{
    for (const auto& [key, _] : spec.params) {
        bool ok = false;
        for (const char* a : allowed)
            ok = ok || key == a;
        if (!ok)
            throw std::invalid_argument("generator '" + spec.name + "': unknown parameter '" + key + "'");
    }
}

int narrow_int(std::int64_t v, const char* what)
{
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw std::out_of_range(std::string(what) + " out of range");
    return static_cast<int>(v);
}

GeneratorSpec make_spec(std::string name, std::map<std::string, std::int64_t> params)
{
    return GeneratorSpec{std::move(name), std::move(params)};
}

// Unit-cell block: [n + 1 - 2^{-(j-1)}, n + 1 - 2^{-j}) sits in the cell of
// lattice point n with fractional extent [1 - 2^{-(j-1)}, 1 - 2^{-j}).
Box block_interval(const Integer& n, int j)
{
    Rational base(n + 1);
    return Box::interval(base - pow2_neg(j - 1), base - pow2_neg(j));
}

Box cap_interval(const Integer& n, int level)
{
    Rational base(n + 1);
    return Box::interval(base - pow2_neg(level), base);
}

}  // namespace

//------------------------------------------------------------------------------
// Sequences
//------------------------------------------------------------------------------

std::vector<Integer> lacunary_sequence(int k, int q, int count, bool divisible)
{
    if (k < 1 || q < 3)
        throw std::out_of_range("lacunary: requires k >= 1 and q >= 3");
    std::vector<Integer> n;
    if (count <= 0)
        return n;
    n.emplace_back(1);
    const Integer qk = ipow(q, k);
    for (int j = 1; j < count; ++j) {
        Integer bound = qk * (n.back() + 1);  // n_{j+1} > bound
        Integer next = bound + 1;
        if (divisible) {
            const Integer step(j + 1);
            Integer quotient;
            mpz_fdiv_q(quotient.get_mpz_t(), bound.get_mpz_t(), step.get_mpz_t());
            next = (quotient + 1) * step;
        }
        n.push_back(next);
    }
    return n;
}

std::vector<std::int64_t> factorial_odd_sequence(std::size_t count)
{
    std::vector<std::int64_t> out;
    out.reserve(count);
    std::int64_t odd = 3;
    std::int64_t fact = 2;
    std::int64_t m = 2;
    bool fact_exhausted = false;
    while (out.size() < count) {
        if (!fact_exhausted && fact < odd) {
            out.push_back(fact);
            ++m;
            if (fact > std::numeric_limits<std::int64_t>::max() / m)
                fact_exhausted = true;
            else
                fact *= m;
        } else {
            // m! is even for m >= 2, so the two streams never coincide.
            out.push_back(odd);
            odd += 2;
        }
    }
    return out;
}

//------------------------------------------------------------------------------
// Constructors
//------------------------------------------------------------------------------

MultiTile interval_ktile(int k)
{
    if (k < 1)
        throw std::out_of_range("interval_ktile: k must be >= 1");
    return MultiTile({Box::interval(0, k)}, make_spec("interval_ktile", {{"k", k}}), 0);
}

MultiTile split_two_tile()
{
    return MultiTile({Box::interval(0, 1), Box::interval(Rational(3, 2), Rational(5, 2))},
                     make_spec("split_two_tile", {}), 0);
}

MultiTile lacunary(int k, int q, int level, bool divisible, int bit_budget)
{
    if (k < 1 || q < 3)
        throw std::out_of_range("lacunary: requires k >= 1 and q >= 3");
    if (level < 0)
        throw std::out_of_range("lacunary: negative truncation level");
    if (bit_budget < 2 || bit_budget > 62)
        throw std::out_of_range("lacunary: bit budget must lie in [2, 62]");

    auto n = lacunary_sequence(k, q, level, divisible);
    if (level > 0) {
        Integer top = ipow(q, k - 1) * n.back() + 1;
        if (mpz_sizeinbase(top.get_mpz_t(), 2) > static_cast<std::size_t>(bit_budget))
            throw std::out_of_range("lacunary: block " + std::to_string(level) + " endpoint " + top.get_str() +
                                    " exceeds the " + std::to_string(bit_budget) + "-bit budget");
    }

    std::vector<Box> boxes{Box::interval(0, 1)};
    for (int j = 1; j <= level; ++j)
        for (int i = 0; i < k; ++i)
            boxes.push_back(block_interval(ipow(q, i) * n[j - 1], j));
    if (level > 0)
        for (int i = 0; i < k; ++i)
            boxes.push_back(cap_interval(ipow(q, i) * n[level - 1], level));

    GeneratorSpec spec = make_spec("lacunary", {{"k", k}, {"q", q}, {"divisible", divisible ? 1 : 0}});
    if (bit_budget != kDefaultBitBudget)
        spec.params["bits"] = bit_budget;
    return MultiTile(std::move(boxes), std::move(spec), level);
}

MultiTile factorial_odd(int level)
{
    if (level < 0)
        throw std::out_of_range("factorial_odd: negative truncation level");
    auto n = factorial_odd_sequence(static_cast<std::size_t>(level));
    std::vector<Box> boxes{Box::interval(0, 1)};
    for (int j = 1; j <= level; ++j)
        boxes.push_back(block_interval(to_integer(n[j - 1]), j));
    if (level > 0)
        boxes.push_back(cap_interval(to_integer(n[level - 1]), level));
    return MultiTile(std::move(boxes), make_spec("factorial_odd", {}), level);
}

void validate(const GeneratorSpec& spec)
{
    if (spec.name == "interval_ktile") {
        require_params(spec, {"k"});
        if (spec.param("k") < 1)
            throw std::out_of_range("interval_ktile: k must be >= 1");
    } else if (spec.name == "split_two_tile") {
        require_params(spec, {});
    } else if (spec.name == "lacunary") {
        require_params(spec, {"k", "q", "divisible", "bits"});
        if (spec.param("k") < 1 || spec.param("q") < 3)
            throw std::out_of_range("lacunary: requires k >= 1 and q >= 3");
        auto flag = spec.param_or("divisible", 0);
        if (flag != 0 && flag != 1)
            throw std::out_of_range("lacunary: divisible must be 0 or 1");
    } else if (spec.name == "factorial_odd") {
        require_params(spec, {});
    } else {
        throw std::invalid_argument("unknown generator '" + spec.name + "'");
    }
}

MultiTile materialize(const GeneratorSpec& spec, int level)
{
    validate(spec);
    if (spec.name == "interval_ktile")
        return interval_ktile(narrow_int(spec.param("k"), "k"));
    if (spec.name == "split_two_tile")
        return split_two_tile();
    if (spec.name == "lacunary")
        return lacunary(narrow_int(spec.param("k"), "k"), narrow_int(spec.param("q"), "q"), level,
                        spec.param_or("divisible", 0) != 0,
                        narrow_int(spec.param_or("bits", kDefaultBitBudget), "bits"));
    return factorial_odd(level);
}

//------------------------------------------------------------------------------
// Closed forms
//------------------------------------------------------------------------------

std::vector<Pattern> block_patterns(const GeneratorSpec& spec, int level)
{
    validate(spec);
    if (level < 0)
        throw std::out_of_range("negative truncation level");
    if (spec.name == "interval_ktile" || spec.name == "split_two_tile")
        return pattern_cells(materialize(spec, level)).patterns();
    if (level == 0)
        return {Pattern::of({0})};

    std::vector<Pattern> out;
    out.reserve(static_cast<std::size_t>(level));
    if (spec.name == "factorial_odd") {
        for (auto n : factorial_odd_sequence(static_cast<std::size_t>(level)))
            out.push_back(Pattern::of({0, n}));
        return out;
    }

    // lacunary: materialising checks the bit budget.
    const int k = narrow_int(spec.param("k"), "k");
    const int q = narrow_int(spec.param("q"), "q");
    auto n = lacunary_sequence(k, q, level, spec.param_or("divisible", 0) != 0);
    Integer top = ipow(q, k - 1) * n.back() + 1;
    if (mpz_sizeinbase(top.get_mpz_t(), 2) > static_cast<std::size_t>(spec.param_or("bits", kDefaultBitBudget)))
        throw std::out_of_range("lacunary: block endpoint exceeds the bit budget");
    for (const auto& nj : n) {
        std::vector<LatticePoint> pts{{0}};
        for (int i = 0; i < k; ++i)
            pts.push_back({to_int64(ipow(q, i) * nj)});
        out.emplace_back(std::move(pts));
    }
    return out;
}

PatternSet closed_form_pattern_set(const GeneratorSpec& spec, int level)
{
    if (spec.name == "interval_ktile" || spec.name == "split_two_tile" || level == 0)
        return pattern_cells(materialize(spec, level));
    auto patterns = block_patterns(spec, level);
    std::vector<PatternCell> entries;
    entries.reserve(patterns.size());
    for (int j = 1; j <= level; ++j) {
        Rational lo = 1 - pow2_neg(j - 1);
        Rational hi = j == level ? Rational(1) : Rational(1 - pow2_neg(j));
        entries.push_back({patterns[j - 1], hi - lo, {Box::interval(lo, hi)}});
    }
    std::sort(entries.begin(), entries.end(),
              [](const PatternCell& a, const PatternCell& b) { return a.pattern < b.pattern; });
    return PatternSet(std::move(entries));
}

std::optional<StructuralAnnihilator> structural_annihilator(const GeneratorSpec& spec, const Rational& x)
{
    validate(spec);
    if (spec.name != "factorial_odd")
        return std::nullopt;

    // Y = +-{n_j}.  x*y is an integer iff den(x) divides y.
    const Integer q = x.get_den();
    std::optional<StructuralAnnihilator> best;
    auto index_of = [](const Integer& n) {
        // odd numbers in [3, n] plus factorials m! <= n (m >= 2)
        Integer odds;
        mpz_fdiv_q_ui(odds.get_mpz_t(), Integer(n - 1).get_mpz_t(), 2);
        Integer count = odds;
        Integer f = 2;
        unsigned long m = 2;
        while (f <= n) {
            ++count;
            ++m;
            f *= m;
        }
        return count;
    };
    auto consider = [&](const Integer& n, std::string reason) {
        if (!best || n < best->element)
            best = StructuralAnnihilator{n, index_of(n), std::move(reason)};
    };

    if (q == 1)
        consider(Integer(2), "x is an integer; every element annihilates it");
    else if (mpz_odd_p(q.get_mpz_t()))
        consider(q, "odd element " + q.get_str() + " is a multiple of den(x)");

    // Smallest m with q | m!; m <= q always works.
    Integer f = 2;
    for (unsigned long m = 2;; ++m) {
        if (m > 2)
            f *= m;
        if (mpz_divisible_p(f.get_mpz_t(), q.get_mpz_t())) {
            consider(f, std::to_string(m) + "! is a multiple of den(x)");
            break;
        }
    }
    return best;
}

}  // namespace tilebasis::gallery

namespace tilebasis
{

MultiTile extend_truncation(const MultiTile& tile, int level)
{
    if (!tile.generator())
        throw std::invalid_argument("extend_truncation: tile has no generator");
    if (level < tile.truncation_level())
        throw std::out_of_range("extend_truncation: level " + std::to_string(level) + " is below current level " +
                                std::to_string(tile.truncation_level()));
    return gallery::materialize(*tile.generator(), level);
}

}  // namespace tilebasis
