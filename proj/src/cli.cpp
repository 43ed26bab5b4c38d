#include "tilebasis/cli.hpp"

#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "tilebasis/certify.hpp"
#include "tilebasis/gallery.hpp"
#include "tilebasis/report.hpp"
#include "tilebasis/search.hpp"
#include "tilebasis/synthesis.hpp"
#include "tilebasis/tile_file.hpp"

namespace tilebasis::cli
{

namespace
{

class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct InputFlags
{
    std::string path;
    std::string gen;
    int level = 1;
    std::string tile;
    std::string format = "tsv";
};

struct ShiftFlags
{
    std::string shifts;
    std::string x;
};

struct Loaded
{
    std::vector<TileDescription> tiles;
    std::string hash;
    std::string source;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// "--gen 'lacunary k=2 q=41 divisible=1'"
GeneratorSpec parse_generator(const std::string& text)
{
    std::istringstream in(text);
    GeneratorSpec spec;
    if (!(in >> spec.name))
        throw UsageError("--gen needs a generator name");
    std::string word;
    while (in >> word) {
        auto eq = word.find('=');
        if (eq == std::string::npos || eq == 0)
            throw UsageError("--gen: expected key=value, got '" + word + "'");
        try {
            spec.params[word.substr(0, eq)] = std::stoll(word.substr(eq + 1));
        } catch (const std::exception&) {
            throw UsageError("--gen: '" + word + "' is not an integer parameter");
        }
    }
    gallery::validate(spec);
    return spec;
}

Loaded load(const InputFlags& flags)
{
    Loaded out;
    if (!flags.path.empty() && !flags.gen.empty())
        throw UsageError("give a tile file or --gen, not both");
    if (!flags.gen.empty()) {
        if (flags.level < 0)
            throw UsageError("--J must be >= 0");
        TileDescription d;
        d.name = "gen";
        d.dimension = 1;
        d.generator = parse_generator(flags.gen);
        d.level = flags.level;
        out.source = "generator " + d.generator->describe() + " J=" + std::to_string(d.level);
        out.hash = hex64(fnv1a64(out.source));
        out.tiles.push_back(std::move(d));
        return out;
    }
    if (flags.path.empty())
        throw UsageError("missing input: a tile file or --gen");
    std::string text = read_file(flags.path);
    out.source = flags.path;
    out.hash = hex64(fnv1a64(text));
    out.tiles = parse_tile_file(text);
    if (out.tiles.empty())
        throw UsageError("'" + flags.path + "' holds no tile sections");
    if (!flags.tile.empty()) {
        std::erase_if(out.tiles, [&](const TileDescription& t) { return t.name != flags.tile; });
        if (out.tiles.empty())
            throw UsageError("no tile named '" + flags.tile + "'");
    }
    return out;
}

const TileDescription& single(const Loaded& loaded)
{
    return loaded.tiles.front();
}

// A generator tile at level 0 carries the generator; closed forms supply the
// pattern sets at any level without materialising the boxes.
MultiTile anchor(const TileDescription& d)
{
    if (d.generator)
        return gallery::materialize(*d.generator, 0);
    return to_multitile(d);
}

ShiftVector resolve_shifts(const ShiftFlags& flags, std::size_t k)
{
    if (!flags.shifts.empty() && !flags.x.empty())
        throw UsageError("give --shifts or --x, not both");
    if (!flags.shifts.empty()) {
        auto a = ShiftVector::parse(flags.shifts);
        if (a.order() != k)
            throw UsageError("--shifts has " + std::to_string(a.order()) + " entries; the tile has k=" +
                             std::to_string(k));
        return a;
    }
    if (!flags.x.empty()) {
        RationalVector x;
        std::stringstream in(flags.x);
        std::string part;
        while (std::getline(in, part, ','))
            x.push_back(parse_rational(part));
        return progression_shift(x, k);
    }
    throw UsageError("shifts required: --shifts 'a1;a2;...' or --x X (a = (X, 2X, ..., kX))");
}

Report start(const std::string& command, const InputFlags& in, const Loaded& loaded)
{
    Report r;
    r.header.command = command;
    r.header.config.emplace_back("input", loaded.source);
    if (!in.tile.empty())
        r.header.config.emplace_back("tile", in.tile);
    r.header.config.emplace_back("format", in.format);
    r.header.input_hash = loaded.hash;
    return r;
}

void emit(std::ostream& out, const Report& r, const InputFlags& in)
{
    out << r.render(in.format == "human");
}

std::string join(const std::vector<double>& values)
{
    std::string s;
    for (double v : values)
        s += (s.empty() ? "" : ",") + format_real(v);
    return s;
}

void add_input_options(CLI::App* cmd, InputFlags& in)
{
    cmd->add_option("tile-file", in.path, "tile description file");
    cmd->add_option("--gen", in.gen, "generator instead of a file, e.g. 'lacunary k=2 q=41'");
    cmd->add_option("--J", in.level, "truncation level for --gen")->capture_default_str();
    cmd->add_option("--tile", in.tile, "select a section by name");
    cmd->add_option("--format", in.format, "tsv or human")
        ->check(CLI::IsMember({"tsv", "human"}))
        ->capture_default_str();
}

void add_shift_options(CLI::App* cmd, ShiftFlags& s)
{
    cmd->add_option("--shifts", s.shifts, "shift vector 'a1;a2;...' (coordinates joined by ',')");
    cmd->add_option("--x", s.x, "progression step: a = (x, 2x, ..., kx)");
}

//------------------------------------------------------------------------------
// Commands
//------------------------------------------------------------------------------

int cmd_verify(const InputFlags& in, std::ostream& out)
{
    auto loaded = load(in);
    Report r = start("verify", in, loaded);
    ReportBlock tiles{"tiles", {"tile", "status", "k", "patterns", "measure"}, {}};
    ReportBlock cells{"pattern_measures", {"tile", "pattern", "measure"}, {}};
    ReportBlock failures{"witnesses", {"tile", "cell", "multiplicity"}, {}};
    int code = kExitOk;
    for (const auto& d : loaded.tiles) {
        try {
            MultiTile tile = to_multitile(d);
            const std::size_t k = verify_k_tile(tile);
            auto ps = pattern_cells(tile);
            tiles.rows.push_back({d.name, "multi-tile", std::to_string(k), std::to_string(ps.size()),
                                  to_string(tile.measure())});
            for (const auto& e : ps.entries())
                cells.rows.push_back({d.name, e.pattern.to_string(), to_string(e.measure)});
        } catch (const NotAMultiTile& e) {
            tiles.rows.push_back({d.name, "not-a-multi-tile", "-", "-", "-"});
            for (const auto* w : {&e.first(), &e.second()})
                failures.rows.push_back({d.name, w->cell.to_string(), std::to_string(w->multiplicity)});
            code = kExitStructural;
        }
    }
    r.add("tiles", std::to_string(loaded.tiles.size()));
    r.add("status", code == kExitOk ? "ok" : "not-a-multi-tile");
    r.blocks = {tiles, cells};
    if (!failures.rows.empty())
        r.blocks.push_back(failures);
    emit(out, r, in);
    return code;
}

int cmd_patterns(const InputFlags& in, std::ostream& out)
{
    auto loaded = load(in);
    Report r = start("patterns", in, loaded);
    ReportBlock block{"patterns", {"tile", "pattern", "measure", "cells"}, {}};
    ReportBlock diffs{"difference_set", {"tile", "size", "elements"}, {}};
    for (const auto& d : loaded.tiles) {
        auto ps = pattern_set_of(d);
        for (const auto& e : ps.entries()) {
            std::string cs;
            for (const auto& b : e.cells)
                cs += (cs.empty() ? "" : " ") + b.to_string();
            block.rows.push_back({d.name, e.pattern.to_string(), to_string(e.measure), cs});
        }
        auto Y = difference_set(ps);
        std::string ys;
        std::size_t shown = 0;
        for (const auto& y : Y.elements()) {
            if (shown++ == 64) {
                ys += " ...";
                break;
            }
            ys += (ys.empty() ? "" : " ") + to_string(y);
        }
        diffs.rows.push_back({d.name, std::to_string(Y.size()), ys});
    }
    r.add("tiles", std::to_string(loaded.tiles.size()));
    r.blocks = {block, diffs};
    emit(out, r, in);
    return kExitOk;
}

int cmd_bounds(const InputFlags& in, const ShiftFlags& sf, std::ostream& out)
{
    auto loaded = load(in);
    const auto& d = single(loaded);
    auto ps = pattern_set_of(d);
    auto a = resolve_shifts(sf, ps.order());
    Report r = start("bounds", in, loaded);
    r.header.config.emplace_back("shifts", a.to_string());

    auto patterns = ps.patterns();
    auto rows = fiber_rows(patterns, a);
    auto rb = riesz_bounds(ps, a);
    const double eps = det_gap(ps, a);
    const double a_cert = lower_bound_from_det(eps, rb.B, ps.order());
    ReportBlock block{"fibers", {"pattern", "abs_det", "rho_min", "rho_max"}, {}};
    for (const auto& row : rows)
        block.rows.push_back(
            {row.pattern.to_string(), format_real(row.abs_det), format_real(row.rho_min), format_real(row.rho_max)});
    r.add("k", std::to_string(ps.order()));
    r.add("patterns", std::to_string(ps.size()));
    r.add("A", format_real(rb.A));
    r.add("B", format_real(rb.B));
    r.add("eps", format_real(eps));
    r.add("A_cert", format_real(a_cert));
    r.add("A_attained_at", rb.lower_attained_at.to_string());
    r.add("B_attained_at", rb.upper_attained_at.to_string());
    r.add("status", rb.singular() ? "singular" : "riesz");
    r.blocks = {block};
    emit(out, r, in);
    return rb.singular() ? kExitStructural : kExitOk;
}

struct SearchFlags
{
    std::string method = "vandermonde";
    int grid = 0;
    std::int64_t n_max = 64;
    int restarts = 8;
    int iters = 4000;
    std::uint64_t seed = 1;
};

int cmd_search(const InputFlags& in, const SearchFlags& sf, std::ostream& out)
{
    auto loaded = load(in);
    auto ps = pattern_set_of(single(loaded));
    const SearchMethod method = parse_search_method(sf.method);
    const int grid = sf.grid > 0 ? sf.grid : (ps.dimension() == 1 ? kDefaultGridN : kDefaultGridNMultiDim);

    Report r = start("search", in, loaded);
    r.header.config.emplace_back("method", sf.method);
    std::optional<SearchResult> result;
    switch (method) {
    case SearchMethod::vandermonde:
        r.header.config.emplace_back("grid", std::to_string(grid));
        result = vandermonde_search(ps, grid);
        break;
    case SearchMethod::admissible: {
        r.header.config.emplace_back("n_max", std::to_string(sf.n_max));
        r.header.config.emplace_back("v_candidates", "unit vectors, then entries in [-3,3]");
        auto patterns = ps.patterns();
        if (auto pair = admissibility_search(patterns, sf.n_max, default_v_candidates(ps.dimension())))
            result = admissible_result(ps, *pair);
        break;
    }
    case SearchMethod::optimizer: {
        r.header.config.emplace_back("restarts", std::to_string(sf.restarts));
        r.header.config.emplace_back("iters", std::to_string(sf.iters));
        r.header.config.emplace_back("seed", std::to_string(sf.seed));
        OptimizerOptions o;
        o.restarts = sf.restarts;
        o.iters = sf.iters;
        o.seed = sf.seed;
        result = optimize_shifts(ps, o);
        break;
    }
    }
    r.add("method", sf.method);
    if (!result) {
        r.add("status", "not-found");
        emit(out, r, in);
        return kExitSearchFailure;
    }
    const auto& diag = result->diagnostics;
    r.add("a", result->a.to_string());
    r.add("objective", format_real(result->objective));
    if (diag.step)
        r.add("x", to_string(*diag.step, ','));
    if (diag.admissible_v)
        r.add("v", to_string(*diag.admissible_v, ','));
    if (diag.admissible_n)
        r.add("n", std::to_string(*diag.admissible_n));
    if (diag.gap)
        r.add("gap", format_real(*diag.gap));
    if (diag.det_lower_bound)
        r.add("det_lower_bound", format_real(*diag.det_lower_bound));
    r.add("evaluations", std::to_string(diag.evaluations));
    if (!diag.trace.empty())
        r.add("trace", join(diag.trace));
    if (!diag.budget.empty())
        r.add("budget", diag.budget);
    const bool ok = result->objective > kSingularTolerance;
    r.add("status", ok ? "riesz" : "singular");
    r.add("certificate", ok ? "run 'certify --kind " +
                                  std::string(method == SearchMethod::vandermonde  ? "vandermonde"
                                              : method == SearchMethod::admissible ? "admissible"
                                                                                   : "finite") +
                                  "' to emit one"
                            : "none");
    emit(out, r, in);
    return ok ? kExitOk : kExitSearchFailure;
}

struct CertifyFlags
{
    std::string kind;
    int probe = -1;
    std::string schedule = "1,2,4,8,16,32,64";
    int x_grid = 4096;
    int max_den = 32;
    double decay = 0.05;
    double survive = 0.5;
    int q_threshold = 27;
    std::string out_path;
    bool trajectories = false;
    ShiftFlags shifts;
};

std::vector<int> parse_schedule(const std::string& text)
{
    std::vector<int> out;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) {
        try {
            out.push_back(std::stoi(part));
        } catch (const std::exception&) {
            throw UsageError("--schedule: '" + part + "' is not an integer");
        }
    }
    if (out.empty() || !std::is_sorted(out.begin(), out.end()))
        throw UsageError("--schedule must be a nonempty ascending list");
    return out;
}

int cmd_certify(const InputFlags& in, const CertifyFlags& cf, std::ostream& out)
{
    auto loaded = load(in);
    const auto& d = single(loaded);
    MultiTile tile = anchor(d);
    const int probe = cf.probe >= 0 ? cf.probe : d.level;
    Report r = start("certify", in, loaded);
    r.header.config.emplace_back("kind", cf.kind);

    if (cf.kind == "two-tile") {
        auto schedule = parse_schedule(cf.schedule);
        r.header.config.emplace_back("schedule", cf.schedule);
        r.header.config.emplace_back("x_grid", std::to_string(cf.x_grid));
        r.header.config.emplace_back("max_denominator", std::to_string(cf.max_den));
        r.header.config.emplace_back("decay_threshold", format_real(cf.decay));
        r.header.config.emplace_back("survive_threshold", format_real(cf.survive));
        TwoTileOptions o;
        o.max_denominator = cf.max_den;
        o.decay_threshold = cf.decay;
        o.survive_threshold = cf.survive;
        auto rep = two_tile_test(tile, cf.x_grid, schedule, o);
        r.add("verdict", to_string(rep.verdict));
        r.add("x_tested", std::to_string(rep.trajectories.size()));
        r.add("decayed", std::to_string(rep.decayed));
        r.add("structural", std::to_string(rep.structural));
        r.add("survivors", std::to_string(rep.survivors));
        if (rep.witness)
            r.add("witness_x", to_string(*rep.witness));
        r.add("validity", tile.generator() && d.generator && d.generator->name != "interval_ktile" &&
                                  d.generator->name != "split_two_tile"
                              ? "numerical evidence over the schedule"
                              : "exact (pattern set independent of level)");
        std::vector<std::string> cols{"x"};
        for (int J : schedule)
            cols.push_back("gap_J" + std::to_string(J));
        cols.insert(cols.end(), {"class", "annihilator", "block"});
        ReportBlock block{"trajectories", cols, {}};
        for (const auto& tr : rep.trajectories) {
            const char* cls = tr.decayed ? "decayed" : tr.structural_element ? "structural" : "survives";
            if (!cf.trajectories && tr.decayed)
                continue;
            std::vector<std::string> row{to_string(tr.x)};
            for (double g : tr.gaps)
                row.push_back(format_real(g));
            row.push_back(cls);
            row.push_back(tr.structural_element ? to_string(*tr.structural_element) : "-");
            row.push_back(tr.structural_block ? to_string(*tr.structural_block) : "-");
            block.rows.push_back(std::move(row));
        }
        r.blocks = {block};
        emit(out, r, in);
        return rep.verdict == TwoTileVerdict::certified_candidate ? kExitOk : kExitSearchFailure;
    }

    CertifyOptions o;
    o.lacunary_ratio_threshold = cf.q_threshold;
    r.header.config.emplace_back("probe_level", std::to_string(probe));
    CertifyOutcome outcome;
    if (cf.kind == "kronecker") {
        r.header.config.emplace_back("q_threshold", std::to_string(cf.q_threshold));
        outcome = kronecker_certificate(tile, probe, o);
    } else if (cf.kind == "admissible") {
        outcome = admissible_certificate(tile, probe, o);
    } else if (cf.kind == "vandermonde") {
        outcome = vandermonde_certificate(tile, probe, o);
    } else if (cf.kind == "finite") {
        auto ps = pattern_cells(tile);
        auto a = resolve_shifts(cf.shifts, ps.order());
        r.header.config.emplace_back("shifts", a.to_string());
        outcome = finite_exact_certificate(tile, a);
    } else {
        throw UsageError("unknown --kind '" + cf.kind + "'");
    }

    r.add("status", outcome.certificate ? "certified" : "failed");
    r.add("message", outcome.message);
    if (outcome.kronecker) {
        const auto& kr = *outcome.kronecker;
        r.add("epsilon_target", format_real(kr.epsilon_target));
        r.add("epsilon_achieved", format_real(kr.epsilon_achieved));
        std::string gs;
        for (const auto& g : kr.g)
            gs += (gs.empty() ? "" : ";") + to_string(g);
        r.add("g", gs);
        r.add("column_epsilon", join(kr.column_epsilon));
        r.add("nodes", std::to_string(kr.nodes));
    }
    if (outcome.certificate) {
        const auto& c = *outcome.certificate;
        r.add("bound_A", format_real(c.bound_A));
        r.add("validity", c.all_levels ? "all_levels" : "proved_at_level");
        r.add("note", c.validity_note);
        if (!cf.out_path.empty()) {
            std::ofstream file(cf.out_path, std::ios::binary);
            if (!file)
                throw UsageError("cannot write '" + cf.out_path + "'");
            file << c.to_text();
            r.add("written", cf.out_path);
        }
    }
    emit(out, r, in);
    if (outcome.certificate && cf.out_path.empty())
        out << outcome.certificate->to_text();
    return outcome.certificate ? kExitOk : kExitSearchFailure;
}

int cmd_verify_cert(const std::string& path, const std::string& format, std::ostream& out)
{
    std::string text = read_file(path);
    Certificate c;
    try {
        c = Certificate::parse(text);
    } catch (const std::exception& e) {
        throw UsageError(std::string("malformed certificate: ") + e.what());
    }
    auto v = verify_certificate(c);
    Report r;
    r.header.command = "verify-cert";
    r.header.config = {{"certificate", path}, {"format", format}};
    r.header.input_hash = hex64(fnv1a64(text));
    r.add("kind", to_string(c.kind));
    r.add("bound_A", format_real(c.bound_A));
    r.add("recomputed_A", format_real(v.recomputed_A));
    r.add("validity", c.all_levels ? "all_levels" : "proved_at_level");
    r.add("probed_level", std::to_string(c.probed_level));
    r.add("status", v.valid ? "valid" : "invalid");
    r.add("message", v.message);
    out << r.render(format == "human");
    return v.valid ? kExitOk : kExitSearchFailure;
}

struct RoundtripFlags
{
    ShiftFlags shifts;
    int N = 8;
    int grid = 256;
    int trials = 50;
    std::uint64_t seed = 1;
};

int cmd_roundtrip(const InputFlags& in, const RoundtripFlags& rf, std::ostream& out)
{
    if (rf.grid <= 2 * rf.N)
        throw UsageError("--grid must exceed 2N for exact quadrature (got grid=" + std::to_string(rf.grid) +
                         ", N=" + std::to_string(rf.N) + ")");
    auto loaded = load(in);
    auto ps = pattern_set_of(single(loaded));
    auto a = resolve_shifts(rf.shifts, ps.order());
    Report r = start("roundtrip", in, loaded);
    r.header.config.emplace_back("shifts", a.to_string());
    r.header.config.emplace_back("N", std::to_string(rf.N));
    r.header.config.emplace_back("grid", std::to_string(rf.grid));
    r.header.config.emplace_back("trials", std::to_string(rf.trials));
    r.header.config.emplace_back("seed", std::to_string(rf.seed));
    auto rep = round_trip(ps, a, rf.N, rf.grid, rf.trials, rf.seed);
    r.add("A", format_real(rep.bounds.A));
    r.add("B", format_real(rep.bounds.B));
    r.add("max_relative_error", format_real(rep.max_relative_error));
    r.add("max_parseval_error", format_real(rep.max_parseval_error));
    r.add("ratio_min", format_real(rep.ratios.r_min));
    r.add("ratio_max", format_real(rep.ratios.r_max));
    r.add("status", "ok");
    emit(out, r, in);
    return kExitOk;
}

struct GalleryFlags
{
    std::string name;
    int k = 2;
    int q = 3;
    int level = 1;
    bool divisible = false;
    int bits = gallery::kDefaultBitBudget;
    bool boxes = false;
};

int cmd_gallery(const GalleryFlags& g, std::ostream& out)
{
    MultiTile tile = [&] {
        if (g.name == "interval_ktile")
            return gallery::interval_ktile(g.k);
        if (g.name == "split_two_tile")
            return gallery::split_two_tile();
        if (g.name == "lacunary")
            return gallery::lacunary(g.k, g.q, g.level, g.divisible, g.bits);
        if (g.name == "factorial_odd")
            return gallery::factorial_odd(g.level);
        throw UsageError("unknown generator '" + g.name +
                         "' (interval_ktile, split_two_tile, lacunary, factorial_odd)");
    }();
    out << "# tilebasis " TILEBASIS_VERSION "\n";
    out << write_tile_section(g.name, tile, g.boxes);
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Structured Riesz bases of exponentials on multi-tiles"};
    app.name("tilebasis");
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(TILEBASIS_VERSION));

    InputFlags in;
    ShiftFlags shifts;
    SearchFlags search;
    CertifyFlags certify;
    RoundtripFlags roundtrip;
    GalleryFlags gal;
    std::string cert_path;

    auto* verify = app.add_subcommand("verify", "check the k-tile property and report pattern measures");
    add_input_options(verify, in);
    auto* patterns = app.add_subcommand("patterns", "list patterns, cells and the difference set");
    add_input_options(patterns, in);
    auto* bounds = app.add_subcommand("bounds", "Riesz bounds, determinant gap and A_cert for given shifts");
    add_input_options(bounds, in);
    add_shift_options(bounds, shifts);

    auto* search_cmd = app.add_subcommand("search", "search for shifts");
    add_input_options(search_cmd, in);
    search_cmd->add_option("--method", search.method, "vandermonde, admissible or optimizer")
        ->check(CLI::IsMember({"vandermonde", "admissible", "optimizer"}))
        ->capture_default_str();
    search_cmd->add_option("--grid", search.grid, "Vandermonde grid side (default 4096 in d=1, 64 otherwise)");
    search_cmd->add_option("--n-max", search.n_max, "largest modulus for admissibility")->capture_default_str();
    search_cmd->add_option("--restarts", search.restarts, "optimizer restarts")->capture_default_str();
    search_cmd->add_option("--iters", search.iters, "optimizer polls per phase")->capture_default_str();
    search_cmd->add_option("--seed", search.seed, "optimizer seed")->capture_default_str();

    auto* certify_cmd = app.add_subcommand("certify", "emit a certificate or an obstruction report");
    add_input_options(certify_cmd, in);
    certify_cmd->add_option("--kind", certify.kind, "kronecker, admissible, vandermonde, finite or two-tile")
        ->required()
        ->check(CLI::IsMember({"kronecker", "admissible", "vandermonde", "finite", "two-tile"}));
    certify_cmd->add_option("--probe", certify.probe, "truncation level to probe (default: the input level)");
    certify_cmd->add_option("--schedule", certify.schedule, "two-tile: ascending levels")->capture_default_str();
    certify_cmd->add_option("--x-grid", certify.x_grid, "two-tile: x grid side")->capture_default_str();
    certify_cmd->add_option("--max-den", certify.max_den, "two-tile: extra rationals p/q, q <= this")
        ->capture_default_str();
    certify_cmd->add_option("--decay", certify.decay, "two-tile: decay threshold")->capture_default_str();
    certify_cmd->add_option("--survive", certify.survive, "two-tile: survivor threshold")->capture_default_str();
    certify_cmd->add_option("--q-threshold", certify.q_threshold, "declared lacunary ratio for all-level validity")
        ->capture_default_str();
    certify_cmd->add_flag("--trajectories", certify.trajectories, "two-tile: print decayed x as well");
    certify_cmd->add_option("--out", certify.out_path, "write the certificate block to a file");
    add_shift_options(certify_cmd, certify.shifts);

    auto* verify_cert = app.add_subcommand("verify-cert", "re-check a serialized certificate");
    verify_cert->add_option("certificate", cert_path, "certificate file")->required();
    verify_cert->add_option("--format", in.format, "tsv or human")
        ->check(CLI::IsMember({"tsv", "human"}))
        ->capture_default_str();

    auto* roundtrip_cmd = app.add_subcommand("roundtrip", "synthesis/analysis round trip and frame ratios");
    add_input_options(roundtrip_cmd, in);
    add_shift_options(roundtrip_cmd, roundtrip.shifts);
    roundtrip_cmd->add_option("--N", roundtrip.N, "coefficient range [-N, N]^d")->capture_default_str();
    roundtrip_cmd->add_option("--grid", roundtrip.grid, "samples per unit per dimension (> 2N)")
        ->capture_default_str();
    roundtrip_cmd->add_option("--trials", roundtrip.trials, "random coefficient arrays")->capture_default_str();
    roundtrip_cmd->add_option("--seed", roundtrip.seed, "random seed")->capture_default_str();

    auto* gallery_cmd = app.add_subcommand("gallery", "print a gallery tile as a tile-file section");
    gallery_cmd->add_option("name", gal.name, "interval_ktile, split_two_tile, lacunary or factorial_odd")
        ->required();
    gallery_cmd->add_option("--k", gal.k, "order")->capture_default_str();
    gallery_cmd->add_option("--q", gal.q, "lacunary ratio")->capture_default_str();
    gallery_cmd->add_option("--J", gal.level, "truncation level")->capture_default_str();
    gallery_cmd->add_flag("--divisible", gal.divisible, "lacunary: n_j divisible by j");
    gallery_cmd->add_option("--bits", gal.bits, "lacunary bit budget")->capture_default_str();
    gallery_cmd->add_flag("--boxes", gal.boxes, "write boxes instead of the generator line");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*verify)
            return cmd_verify(in, out);
        if (*patterns)
            return cmd_patterns(in, out);
        if (*bounds)
            return cmd_bounds(in, shifts, out);
        if (*search_cmd)
            return cmd_search(in, search, out);
        if (*certify_cmd)
            return cmd_certify(in, certify, out);
        if (*verify_cert)
            return cmd_verify_cert(cert_path, in.format, out);
        if (*roundtrip_cmd)
            return cmd_roundtrip(in, roundtrip, out);
        if (*gallery_cmd)
            return cmd_gallery(gal, out);
    } catch (const NotAMultiTile& e) {
        err << "tilebasis: " << e.what() << "\n";
        return kExitStructural;
    } catch (const SingularFiber& e) {
        err << "tilebasis: " << e.what() << "\n";
        return kExitStructural;
    } catch (const UsageError& e) {
        err << "tilebasis: " << e.what() << "\n";
        return kExitUsage;
    } catch (const TileFileError& e) {
        err << "tilebasis: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "tilebasis: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace tilebasis::cli
