#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tilebasis/cli.hpp"

using namespace tilebasis;

namespace
{

struct Run
{
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name)
{
    return std::string(TILEBASIS_TEST_DATA) + "/" + name;
}

bool has_line(const std::string& text, const std::string& line)
{
    std::istringstream in(text);
    std::string l;
    while (std::getline(in, l))
        if (l == line)
            return true;
    return false;
}

}  // namespace

TEST_SUITE("cli")
{
    TEST_CASE("verify")
    {
        auto ok = run({"verify", data("split.tile")});
        CHECK(ok.code == cli::kExitOk);
        CHECK(has_line(ok.out, "split\tmulti-tile\t2\t2\t2"));

        auto bad = run({"verify", data("half_overlap.tile")});
        CHECK(bad.code == cli::kExitStructural);

        auto unit = run({"verify", data("unit.tile"), "--tile", "unit"});
        CHECK(unit.code == cli::kExitOk);
        CHECK(has_line(unit.out, "unit\tmulti-tile\t1\t1\t1"));

        auto scaled = run({"verify", data("scaled.tile")});
        CHECK(scaled.code == cli::kExitOk);
        CHECK(has_line(scaled.out, "scaled\tmulti-tile\t2\t1\t2"));
    }

    TEST_CASE("usage errors")
    {
        CHECK(run({}).code == cli::kExitUsage);
        CHECK(run({"frobnicate"}).code == cli::kExitUsage);
        CHECK(run({"verify"}).code == cli::kExitUsage);
        CHECK(run({"verify", "/nonexistent/file.tile"}).code == cli::kExitUsage);
        CHECK(run({"bounds", data("split.tile")}).code == cli::kExitUsage);
        CHECK(run({"bounds", data("split.tile"), "--shifts", "0;1/2;1/3"}).code == cli::kExitUsage);
        CHECK(run({"roundtrip", data("split.tile"), "--x", "1/3", "--grid", "16"}).code == cli::kExitUsage);
        CHECK(run({"verify", "--gen", "lacunary k=2 q=2"}).code == cli::kExitUsage);
        CHECK(run({"--help"}).code == cli::kExitOk);
    }

    TEST_CASE("bounds")
    {
        auto r = run({"bounds", data("unit.tile"), "--tile", "interval2", "--shifts", "0;1/2"});
        CHECK(r.code == cli::kExitOk);
        CHECK(has_line(r.out, "A\t2"));
        CHECK(has_line(r.out, "eps\t2"));
        CHECK(has_line(r.out, "A_cert\t2"));

        auto s = run({"bounds", data("split.tile"), "--shifts", "0;1/2"});
        CHECK(s.code == cli::kExitStructural);
        CHECK(has_line(s.out, "status\tsingular"));

        auto t = run({"bounds", data("split.tile"), "--x", "1/3"});
        CHECK(t.code == cli::kExitOk);
        CHECK(has_line(t.out, "A\t1"));
        CHECK(has_line(t.out, "B\t3"));
    }

    TEST_CASE("search")
    {
        auto v = run({"search", data("split.tile")});
        CHECK(v.code == cli::kExitOk);
        CHECK(has_line(v.out, "x\t1/3"));
        auto a = run({"search", data("split.tile"), "--method", "admissible"});
        CHECK(a.code == cli::kExitOk);
        CHECK(has_line(a.out, "n\t3"));
        auto none = run({"search", "--gen", "lacunary k=2 q=3 divisible=1", "--J", "6", "--method", "admissible",
                         "--n-max", "6"});
        CHECK(none.code == cli::kExitSearchFailure);
        auto o = run({"search", data("unit.tile"), "--tile", "interval2", "--method", "optimizer", "--restarts",
                      "2", "--iters", "300"});
        CHECK(o.code == cli::kExitOk);
        CHECK(has_line(o.out, "# config.seed: 1"));
    }

    TEST_CASE("certify and verify-cert")
    {
        const auto path = std::filesystem::temp_directory_path() / "tilebasis_cli_test.cert";
        auto c = run({"certify", data("split.tile"), "--kind", "finite", "--x", "1/3", "--out", path.string()});
        CHECK(c.code == cli::kExitOk);
        CHECK(has_line(c.out, "status\tcertified"));
        auto v = run({"verify-cert", path.string()});
        CHECK(v.code == cli::kExitOk);
        CHECK(has_line(v.out, "status\tvalid"));

        {
            std::ofstream broken(path);
            broken << "certificate tilebasis\nkind finite_exact\n";
        }
        CHECK(run({"verify-cert", path.string()}).code == cli::kExitUsage);
        std::filesystem::remove(path);

        auto fail = run({"certify", "--gen", "factorial_odd", "--J", "8", "--kind", "kronecker"});
        CHECK(fail.code == cli::kExitSearchFailure);
        CHECK(has_line(fail.out, "status\tfailed"));

        auto two = run({"certify", data("split.tile"), "--kind", "two-tile", "--x-grid", "32"});
        CHECK(two.code == cli::kExitOk);
        CHECK(has_line(two.out, "verdict\tcertified_candidate"));
    }

    TEST_CASE("roundtrip")
    {
        auto r = run({"roundtrip", data("split.tile"), "--x", "1/3", "--trials", "5"});
        CHECK(r.code == cli::kExitOk);
        CHECK(has_line(r.out, "status\tok"));
        auto s = run({"roundtrip", data("split.tile"), "--shifts", "0;0", "--trials", "1"});
        CHECK(s.code == cli::kExitStructural);
    }

    TEST_CASE("gallery output parses back")
    {
        auto g = run({"gallery", "lacunary", "--k", "2", "--q", "3", "--J", "2"});
        CHECK(g.code == cli::kExitOk);
        const auto path = std::filesystem::temp_directory_path() / "tilebasis_cli_gallery.tile";
        {
            std::ofstream f(path);
            f << g.out;
        }
        auto v = run({"verify", path.string()});
        CHECK(v.code == cli::kExitOk);
        auto b = run({"gallery", "split_two_tile", "--boxes"});
        CHECK(b.out.find("box 3/2 5/2") != std::string::npos);
        std::filesystem::remove(path);
        CHECK(run({"gallery", "nope"}).code == cli::kExitUsage);
    }

    TEST_CASE("identical invocations give identical bytes")
    {
        std::vector<std::string> args{"search", data("split.tile"), "--method", "optimizer", "--restarts", "2",
                                      "--iters", "200", "--seed", "9"};
        CHECK(run(args).out == run(args).out);
        auto h = run({"patterns", data("split.tile"), "--format", "human"});
        CHECK(h.code == cli::kExitOk);
        CHECK(h.out == run({"patterns", data("split.tile"), "--format", "human"}).out);
    }
}
