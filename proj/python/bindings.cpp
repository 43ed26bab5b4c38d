#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tilebasis/certify.hpp"
#include "tilebasis/cli.hpp"
#include "tilebasis/gallery.hpp"
#include "tilebasis/search.hpp"
#include "tilebasis/synthesis.hpp"
#include "tilebasis/tile_file.hpp"

namespace py = pybind11;
using namespace tilebasis;

namespace
{

// Rationals cross the boundary as canonical strings; the Python side turns
// them into fractions.Fraction.
Rational to_rational(const py::handle& h)
{
    if (py::isinstance<py::int_>(h))
        return Rational(py::cast<long>(h));
    if (py::isinstance<py::str>(h))
        return parse_rational(py::cast<std::string>(h));
    if (py::hasattr(h, "numerator") && py::hasattr(h, "denominator"))
        return ratio(py::cast<std::int64_t>(h.attr("numerator")), py::cast<std::int64_t>(h.attr("denominator")));
    if (py::isinstance<py::float_>(h))
        return from_double(py::cast<double>(h));
    throw py::type_error("expected int, str, Fraction or float");
}

RationalVector to_rational_vector(const py::handle& h)
{
    RationalVector out;
    if (py::isinstance<py::list>(h) || py::isinstance<py::tuple>(h)) {
        for (auto item : h)
            out.push_back(to_rational(item));
    } else {
        out.push_back(to_rational(h));
    }
    return out;
}

ShiftVector to_shifts(const py::handle& h)
{
    if (py::isinstance<ShiftVector>(h))
        return py::cast<ShiftVector>(h);
    if (py::isinstance<py::str>(h))
        return ShiftVector::parse(py::cast<std::string>(h));
    std::vector<RationalVector> rows;
    for (auto item : h)
        rows.push_back(to_rational_vector(item));
    return ShiftVector(std::move(rows));
}

std::vector<std::string> strings(const RationalVector& v)
{
    std::vector<std::string> out;
    for (const auto& x : v)
        out.push_back(to_string(x));
    return out;
}

py::dict report_dict(const KroneckerReport& r)
{
    py::dict d;
    d["S"] = r.S;
    d["k"] = r.k;
    std::vector<std::string> g;
    for (const auto& x : r.g)
        g.push_back(to_string(x));
    d["g"] = g;
    d["column_epsilon"] = r.column_epsilon;
    d["epsilon_achieved"] = r.epsilon_achieved;
    d["epsilon_target"] = r.epsilon_target;
    d["success"] = r.success;
    d["nodes"] = r.nodes;
    d["message"] = r.message;
    return d;
}

}  // namespace

PYBIND11_MODULE(_tilebasis, m)
{
    m.doc() = "Structured Riesz bases of exponentials on multi-tiles";
    m.attr("__version__") = TILEBASIS_VERSION;

    py::register_exception<NotAMultiTile>(m, "NotAMultiTile");
    py::register_exception<SingularFiber>(m, "SingularFiber");
    py::register_exception<HypothesisError>(m, "HypothesisError");
    py::register_exception<TileFileError>(m, "TileFileError", PyExc_ValueError);

    py::class_<Pattern>(m, "Pattern")
        .def(py::init([](const std::vector<std::int64_t>& values) {
                 std::vector<LatticePoint> pts;
                 for (auto v : values)
                     pts.push_back({v});
                 return Pattern::from_unsorted(std::move(pts));
             }),
             py::arg("points"))
        .def_property_readonly("points", &Pattern::points)
        .def_property_readonly("size", &Pattern::size)
        .def("__repr__", &Pattern::to_string)
        .def("__eq__", [](const Pattern& a, const Pattern& b) { return a == b; });

    py::class_<ShiftVector>(m, "ShiftVector")
        .def(py::init([](const py::object& o) { return to_shifts(o); }), py::arg("shifts"))
        .def_static("parse", &ShiftVector::parse)
        .def_static("arithmetic", [](const py::object& x, std::size_t k) {
            return ShiftVector::arithmetic(to_rational_vector(x), k);
        })
        .def_property_readonly("order", &ShiftVector::order)
        .def("__str__", &ShiftVector::to_string)
        .def("__repr__", [](const ShiftVector& a) { return "ShiftVector('" + a.to_string() + "')"; });

    py::class_<MultiTile>(m, "MultiTile")
        .def(py::init([](const std::vector<std::pair<py::object, py::object>>& intervals) {
                 std::vector<Box> boxes;
                 for (const auto& [lo, hi] : intervals)
                     boxes.push_back(Box(to_rational_vector(lo), to_rational_vector(hi)));
                 return MultiTile(std::move(boxes));
             }),
             py::arg("boxes"), "boxes as (lo, hi) pairs; scalars for d = 1, sequences otherwise")
        .def_property_readonly("dimension", &MultiTile::dimension)
        .def_property_readonly("truncation_level", &MultiTile::truncation_level)
        .def_property_readonly("measure", [](const MultiTile& t) { return to_string(t.measure()); })
        .def_property_readonly("boxes",
                               [](const MultiTile& t) {
                                   std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> out;
                                   for (const auto& b : t.boxes())
                                       out.emplace_back(strings(b.lo), strings(b.hi));
                                   return out;
                               })
        .def("__repr__", [](const MultiTile& t) { return write_tile_section("tile", t); });

    py::class_<PatternSet>(m, "PatternSet")
        .def_property_readonly("order", &PatternSet::order)
        .def_property_readonly("dimension", &PatternSet::dimension)
        .def("patterns", &PatternSet::patterns)
        .def("measures",
             [](const PatternSet& ps) {
                 std::vector<std::string> out;
                 for (const auto& e : ps.entries())
                     out.push_back(to_string(e.measure));
                 return out;
             })
        .def("__len__", &PatternSet::size);

    py::class_<RieszBounds>(m, "RieszBounds")
        .def_readonly("A", &RieszBounds::A)
        .def_readonly("B", &RieszBounds::B)
        .def_property_readonly("singular", &RieszBounds::singular)
        .def("__repr__", [](const RieszBounds& b) {
            std::ostringstream s;
            s << "RieszBounds(A=" << b.A << ", B=" << b.B << ")";
            return s.str();
        });

    // Tiles.
    m.def("read_tiles", [](const std::string& text) {
        std::vector<MultiTile> out;
        for (const auto& d : parse_tile_file(text))
            out.push_back(to_multitile(d));
        return out;
    }, py::arg("text"), "parse tile-file text into multi-tiles");
    m.def("verify_k_tile", &verify_k_tile, py::arg("tile"));
    m.def("pattern_cells", &pattern_cells, py::arg("tile"));
    m.def("pattern_set", [](const MultiTile& t, std::optional<int> level) {
        return pattern_set_at(t, level.value_or(t.truncation_level()));
    }, py::arg("tile"), py::arg("level") = py::none(), "closed form for generator tiles");

    // Gallery.
    m.def("interval_ktile", &gallery::interval_ktile, py::arg("k"));
    m.def("split_two_tile", &gallery::split_two_tile);
    m.def("lacunary", &gallery::lacunary, py::arg("k"), py::arg("q"), py::arg("level"),
          py::arg("divisible") = false, py::arg("bit_budget") = gallery::kDefaultBitBudget);
    m.def("factorial_odd", &gallery::factorial_odd, py::arg("level"));

    // Fibers.
    m.def("riesz_bounds", [](const PatternSet& ps, const py::object& a) { return riesz_bounds(ps, to_shifts(a)); },
          py::arg("patterns"), py::arg("shifts"));
    m.def("det_gap", [](const PatternSet& ps, const py::object& a) { return det_gap(ps, to_shifts(a)); },
          py::arg("patterns"), py::arg("shifts"));
    m.def("lower_bound_from_det", &lower_bound_from_det, py::arg("eps"), py::arg("B"), py::arg("k"));
    m.def("fiber_matrix", [](const Pattern& p, const py::object& a) {
        auto E = fiber_matrix(p, to_shifts(a)).entries;
        std::vector<std::vector<std::complex<double>>> out(E.rows(), std::vector<std::complex<double>>(E.cols()));
        for (Eigen::Index r = 0; r < E.rows(); ++r)
            for (Eigen::Index c = 0; c < E.cols(); ++c)
                out[r][c] = E(r, c);
        return out;
    }, py::arg("pattern"), py::arg("shifts"));

    // Search.
    m.def("search", [](const PatternSet& ps, const std::string& method, int grid, std::int64_t n_max, int restarts,
                       int iters, std::uint64_t seed) -> py::object {
        std::optional<SearchResult> r;
        switch (parse_search_method(method)) {
        case SearchMethod::vandermonde:
            r = vandermonde_search(ps, grid);
            break;
        case SearchMethod::admissible: {
            auto pats = ps.patterns();
            if (auto pair = admissibility_search(pats, n_max, default_v_candidates(ps.dimension())))
                r = admissible_result(ps, *pair);
            break;
        }
        case SearchMethod::optimizer:
            r = optimize_shifts(ps, OptimizerOptions{restarts, iters, seed});
            break;
        }
        if (!r)
            return py::none();
        py::dict d;
        d["a"] = r->a;
        d["objective"] = r->objective;
        d["method"] = to_string(r->method);
        d["evaluations"] = r->diagnostics.evaluations;
        if (r->diagnostics.step)
            d["x"] = strings(*r->diagnostics.step);
        if (r->diagnostics.gap)
            d["gap"] = *r->diagnostics.gap;
        if (r->diagnostics.admissible_n)
            d["n"] = *r->diagnostics.admissible_n;
        if (r->diagnostics.admissible_v)
            d["v"] = strings(*r->diagnostics.admissible_v);
        return d;
    }, py::arg("patterns"), py::arg("method") = "vandermonde", py::arg("grid") = kDefaultGridN,
       py::arg("n_max") = 64, py::arg("restarts") = 8, py::arg("iters") = 4000, py::arg("seed") = 1);

    // Certificates.
    m.def("epsilon_for_k", &epsilon_for_k, py::arg("k"));
    m.def("kronecker_certificate", [](const MultiTile& t, int level, int q_threshold) {
        CertifyOptions o;
        o.lacunary_ratio_threshold = q_threshold;
        auto out = kronecker_certificate(t, level, o);
        py::dict d;
        d["certified"] = out.certificate.has_value();
        d["message"] = out.message;
        if (out.certificate) {
            d["bound_A"] = out.certificate->bound_A;
            d["witness"] = out.certificate->witness;
            d["all_levels"] = out.certificate->all_levels;
            d["text"] = out.certificate->to_text();
        }
        if (out.kronecker)
            d["kronecker"] = report_dict(*out.kronecker);
        return d;
    }, py::arg("tile"), py::arg("level"), py::arg("q_threshold") = 27);
    m.def("verify_certificate", [](const std::string& text) {
        auto v = verify_certificate(Certificate::parse(text));
        return py::make_tuple(v.valid, v.recomputed_A, v.message);
    }, py::arg("text"));
    m.def("annihilator_gap", [](const std::vector<std::int64_t>& Y, const py::object& x) {
        return annihilator_gap(std::span<const std::int64_t>(Y), to_rational(x));
    }, py::arg("Y"), py::arg("x"));
    m.def("two_tile_test", [](const MultiTile& t, int x_grid, const std::vector<int>& schedule, int max_den) {
        TwoTileOptions o;
        o.max_denominator = max_den;
        auto r = two_tile_test(t, x_grid, schedule, o);
        py::dict d;
        d["verdict"] = to_string(r.verdict);
        d["decayed"] = r.decayed;
        d["structural"] = r.structural;
        d["survivors"] = r.survivors;
        d["x_tested"] = r.trajectories.size();
        if (r.witness)
            d["witness"] = to_string(*r.witness);
        return d;
    }, py::arg("tile"), py::arg("x_grid"), py::arg("schedule"), py::arg("max_denominator") = 32);

    // Synthesis.
    m.def("round_trip", [](const PatternSet& ps, const py::object& a, int N, int grid, int trials,
                           std::uint64_t seed) {
        auto r = round_trip(ps, to_shifts(a), N, grid, trials, seed);
        py::dict d;
        d["max_relative_error"] = r.max_relative_error;
        d["max_parseval_error"] = r.max_parseval_error;
        d["ratio_min"] = r.ratios.r_min;
        d["ratio_max"] = r.ratios.r_max;
        d["A"] = r.bounds.A;
        d["B"] = r.bounds.B;
        return d;
    }, py::arg("patterns"), py::arg("shifts"), py::arg("N") = 8, py::arg("grid") = 256, py::arg("trials") = 50,
       py::arg("seed") = 1);

    // The command line, in-process.
    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"), "returns (exit_code, stdout, stderr)");
}
