#include <doctest.h>

#include "anisotl/cli.hpp"
#include "anisotl/io.hpp"
#include "helpers.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace anisotl;
using namespace testutil;
namespace fs = std::filesystem;

namespace {

struct temp_dir {
    fs::path path;
    temp_dir() {
        path = fs::temp_directory_path() / ("anisotl_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~temp_dir() { fs::remove_all(path); }
    std::string file(const std::string& name, const io::json& j) {
        std::string p = (path / name).string();
        io::save_json_file(p, j);
        return p;
    }
};

io::json run(const std::vector<std::string>& args, int expect_code) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    INFO("stderr: ", err.str());
    INFO("stdout: ", out.str());
    CHECK(code == expect_code);
    if (out.str().empty()) return io::json();
    return io::json::parse(out.str());
}

io::json diag2_json(const std::string& a, const std::string& b) {
    io::json rows = io::json::array();
    rows.push_back(io::json::array({a, "0"}));
    rows.push_back(io::json::array({"0", b}));
    return io::json{{"dim", 2}, {"mode", "rational"}, {"entries", rows}};
}

io::json float2_json(double a00, double a01, double a10, double a11) {
    io::json rows = io::json::array();
    rows.push_back(io::json::array({a00, a01}));
    rows.push_back(io::json::array({a10, a11}));
    return io::json{{"dim", 2}, {"mode", "float"}, {"entries", rows}};
}

io::json space_json(const io::json& m, double alpha, const std::string& p,
                    const std::string& q) {
    return io::json{{"matrix", m}, {"alpha", alpha}, {"p", p}, {"q", q}};
}

} // namespace

TEST_SUITE("json io") {
    TEST_CASE("matrix round trip, both modes") {
        auto m = io::matrix_from_json(diag2_json("2", "-2"));
        CHECK(m.is_rational());
        CHECK(m.abs_det_exact() == 4);
        auto j = io::matrix_to_json(m);
        CHECK(j == diag2_json("2", "-2"));

        io::json fj = float2_json(2.0, -0.5, 0.5, 2.0);
        auto f = io::matrix_from_json(fj);
        CHECK_FALSE(f.is_rational());
        CHECK(io::matrix_to_json(f) == fj);
    }

    TEST_CASE("invalid matrices are rejected") {
        CHECK_THROWS_AS(io::matrix_from_json(io::json{{"dim", 2}}), std::invalid_argument);
        // non-expansive
        CHECK_THROWS_AS(io::matrix_from_json(diag2_json("2", "1/2")), not_expansive_error);
        // rational mode with numeric entries
        io::json bad = float2_json(2, 0, 0, 2);
        bad["mode"] = "rational";
        CHECK_THROWS_AS(io::matrix_from_json(bad), std::invalid_argument);
    }

    TEST_CASE("space and sequence round trip") {
        auto s = io::space_from_json(space_json(diag2_json("2", "2"), 0.5, "1/2", "inf"));
        CHECK(s.alpha == 0.5);
        CHECK(s.p == exponent::of(1, 2));
        CHECK(s.q.is_inf());

        io::json entries = io::json::array();
        entries.push_back(io::json{{"j", 2}, {"k", io::json::array({0, 0})}, {"re", 3.0}, {"im", 4.0}});
        entries.push_back(io::json{{"j", 0}, {"k", io::json::array({1, -1})}, {"re", 1.0}});
        io::json seq{{"entries", entries}};
        auto c = io::sequence_from_json(seq);
        CHECK(c.atoms().size() == 2);
        CHECK(c.value_at(2, {0, 0}) == doctest::Approx(5.0)); // modulus of 3+4i
        auto c2 = io::sequence_from_json(io::sequence_to_json(c));
        CHECK(c2.value_at(2, {0, 0}) == doctest::Approx(5.0));
        CHECK(c2.value_at(0, {1, -1}) == doctest::Approx(1.0));

        io::json mixed_dims = io::json::array();
        mixed_dims.push_back(io::json{{"j", 0}, {"k", io::json::array({0, 0})}, {"re", 1.0}});
        mixed_dims.push_back(io::json{{"j", 0}, {"k", io::json::array({1})}, {"re", 1.0}});
        CHECK_THROWS_AS(io::sequence_from_json(io::json{{"entries", mixed_dims}}),
                        std::invalid_argument);
    }

    TEST_CASE("region literals") {
        auto b = io::parse_region_literal("box:0,0,1,2");
        CHECK(b.contains({0.5, 1.5}));
        auto ball = io::parse_region_literal("ball:1,1,0.5");
        CHECK(ball.contains({1.1, 1.1}));
        CHECK_THROWS_AS(io::parse_region_literal("blob:1,2"), std::invalid_argument);
    }
}

TEST_SUITE("cli") {
    TEST_CASE("expansive command") {
        temp_dir tmp;
        auto mfile = tmp.file("m.json", diag2_json("2", "-2"));
        auto rep = run({"expansive", "--matrix", mfile}, 0);
        CHECK(rep["results"]["status"] == "expansive");
        CHECK(rep["command"] == "expansive");

        auto bad = tmp.file("bad.json", diag2_json("2", "1/2"));
        auto rep2 = run({"expansive", "--matrix", bad}, 0);
        CHECK(rep2["results"]["status"] == "not_expansive");
    }

    TEST_CASE("orbit command with the oracle") {
        temp_dir tmp;
        auto a = tmp.file("a.json", diag2_json("2", "2"));
        auto b = tmp.file("b.json", diag2_json("2", "-2"));
        auto rep = run({"orbit", "--matrix-a", a, "--matrix-b", b, "--mmax", "16", "--jrange",
                        "32"},
                       0);
        CHECK(rep["results"]["verdict"]["finite"] == true);
        CHECK(rep["results"]["verdict"]["period"] == 2);
        CHECK(rep["results"]["brute_force_count"] == 2);
        CHECK(rep["results"]["decomposition"]["class_count"] == 2);
    }

    TEST_CASE("classify command") {
        temp_dir tmp;
        auto sa = tmp.file("sa.json", space_json(diag2_json("2", "2"), 0.0, "1", "2"));
        auto sb = tmp.file("sb.json", space_json(diag2_json("2", "-2"), 0.0, "1", "2"));
        auto rep = run({"classify", "--space-a", sa, "--space-b", sb, "--mmax", "64"}, 0);
        CHECK(rep["results"]["verdict"] == "Equal");
        std::string reason = rep["results"]["reason"];
        CHECK(reason.find("orbit finite, period 2") != std::string::npos);
    }

    TEST_CASE("classify can report Unknown with exit code 2") {
        temp_dir tmp;
        io::json rot = float2_json(2 * std::cos(1.0), -2 * std::sin(1.0), 2 * std::sin(1.0),
                                   2 * std::cos(1.0));
        io::json id = float2_json(2.0, 0.0, 0.0, 2.0);
        auto sa = tmp.file("sa.json", space_json(id, 0.0, "1", "2"));
        auto sb = tmp.file("sb.json", space_json(rot, 0.0, "1", "2"));
        auto rep = run({"classify", "--space-a", sa, "--space-b", sb, "--mmax", "8",
                        "--mmax-insufficient"},
                       2);
        CHECK(rep["results"]["verdict"] == "Unknown");
    }

    TEST_CASE("norm command evaluates the delta example") {
        temp_dir tmp;
        auto sp = tmp.file("s.json", space_json(diag2_json("2", "2"), 0.0, "1", "2"));
        io::json entries = io::json::array();
        entries.push_back(io::json{{"j", 2}, {"k", io::json::array({0, 0})}, {"re", 1.0}, {"im", 0.0}});
        auto sq = tmp.file("c.json", io::json{{"entries", entries}});
        auto rep = run({"norm", "--space", sp, "--seq", sq, "--method", "exact"}, 0);
        CHECK(rep["results"]["value"].get<double>() == doctest::Approx(4.0).epsilon(1e-12));
        CHECK(rep["results"]["method"] == "exact-2d-overlay");
    }

    TEST_CASE("manifest reproducibility: identical numeric results") {
        temp_dir tmp;
        auto sp = tmp.file("s.json", space_json(diag2_json("2", "2"), 0.0, "1", "2"));
        io::json entries = io::json::array();
        entries.push_back(io::json{{"j", 0}, {"k", io::json::array({0, 0})}, {"re", 1.0}});
        entries.push_back(io::json{{"j", 1}, {"k", io::json::array({0, 0})}, {"re", 0.5}});
        auto sq = tmp.file("c.json", io::json{{"entries", entries}});
        std::vector<std::string> args{"norm", "--space", sp,        "--seq",  sq,
                                      "--method", "mc",  "--samples", "50000", "--seed", "7"};
        auto r1 = run(args, 0);
        auto r2 = run(args, 0);
        CHECK(r1["results"] == r2["results"]);
    }

    TEST_CASE("witness and verify commands") {
        temp_dir tmp;
        auto sp = tmp.file("s.json", space_json(diag2_json("2", "2"), 0.0, "1", "2"));
        auto rep = run({"witness", "--family", "delta", "--j0", "2", "--space", sp}, 0);
        CHECK(rep["results"]["predicted"].get<double>() == doctest::Approx(4.0));
        CHECK(rep["results"]["sequence"]["entries"].size() == 1);

        auto rep2 = run({"verify", "--family", "delta", "--space", sp, "--sizes", "-1,0,1"}, 0);
        CHECK(rep2["results"]["slope"].get<double>() ==
              doctest::Approx(-std::log(4.0) * (0.5 - 1.0)).epsilon(1e-9));

        std::string csv = (tmp.path / "out.csv").string();
        auto rep3 = run({"verify", "--family", "multiscale", "--space", sp, "--sizes", "2,4",
                         "--samples", "40000", "--seed", "0", "--out", csv},
                        0);
        CHECK(fs::exists(csv));
        std::ifstream in(csv);
        std::string header;
        std::getline(in, header);
        CHECK(header == "size,measured,error,predicted,ratio");

        // csv on stdout via --format
        std::ostringstream sout, serr;
        int code = run_cli({"verify", "--family", "multiscale", "--space", sp, "--sizes", "2,4",
                            "--samples", "40000", "--seed", "0", "--format", "csv"},
                           sout, serr);
        CHECK(code == 0);
        CHECK(sout.str().rfind("size,measured", 0) == 0);
    }

    TEST_CASE("verify case1 end to end at small size") {
        temp_dir tmp;
        io::json rot = float2_json(2 * std::cos(1.0), -2 * std::sin(1.0), 2 * std::sin(1.0),
                                   2 * std::cos(1.0));
        auto pair = tmp.file("pair.json", io::json{{"a", diag2_json("2", "2")}, {"b", rot}});
        auto rep = run({"verify", "--family", "case1", "--pair", pair, "--p", "1", "--q1", "2",
                        "--sizes", "2,3", "--samples", "60000", "--seed", "0"},
                       0);
        // two sizes fit a slope; the full-size law is the acceptance suite's job
        CHECK(rep["results"]["points"].size() == 2);
        CHECK(rep["results"]["slope"].get<double>() > 0.0);
    }

    TEST_CASE("invalid input exits 1") {
        std::ostringstream out, err;
        CHECK(run_cli({"norm", "--space", "/nonexistent.json", "--seq", "/nope.json"}, out,
                      err) == 1);
        CHECK(run_cli({"bogus-command"}, out, err) == 1);
        CHECK(run_cli({"norm"}, out, err) == 1); // missing required flags
    }

    TEST_CASE("help exits 0") {
        std::ostringstream out, err;
        CHECK(run_cli({"--help"}, out, err) == 0);
        CHECK(out.str().find("expansive") != std::string::npos);
    }
}
