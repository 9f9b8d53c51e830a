#include "doctest.h"
#include "merom/json_io.hpp"

#include <array>
#include <cstdio>
#include <sys/wait.h>

using namespace merom;

namespace {

struct RunResult {
    int code;
    std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
    std::string cmd = env.empty() ? std::string() : env + " ";
    cmd += MEROM_CLI_PATH;
    cmd += " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    int status = pclose(pipe);
    REQUIRE(WIFEXITED(status));
    return {WEXITSTATUS(status), out};
}

std::string data(const std::string& name) {
    return std::string(MEROM_TEST_DATA) + "/" + name;
}

Json parse(const RunResult& r) { return Json::parse(r.out); }

}  // namespace

TEST_CASE("turning accepts a single-hinge good model") {
    RunResult r = run_cli("turning " + data("good_x1.json"));
    CHECK(r.code == 0);
    Json j = parse(r);
    CHECK(j["command"] == "turning");
    CHECK(j["numerical"] == true);
    CHECK(j["functional"] == Json::array({"1", "0"}));
    CHECK(j["end"]["numerical"] == true);
}

TEST_CASE("turning rejects the crossing pair with an End witness") {
    RunResult r = run_cli("turning " + data("good_x1_x2.json"));
    CHECK(r.code == 1);
    Json j = parse(r);
    CHECK(j["numerical"] == false);
    CHECK(j["module"]["numerical"] == true);
    CHECK(j["end"]["numerical"] == false);
    CHECK(j["end"]["witness_u"].size() == 2);
    CHECK(j["end"]["witness_v"].size() == 2);
    CHECK(j["end"]["witness_u"] != j["end"]["witness_v"]);
}

TEST_CASE("irr samples a module on the default grid") {
    RunResult r = run_cli("irr " + data("module_et1.json"));
    CHECK(r.code == 0);
    Json j = parse(r);
    REQUIRE(j["samples"].size() == 3);
    CHECK(j["samples"][0]["a"] == Json::array({1}));
    CHECK(j["samples"][0]["value"] == "1");
    CHECK(j["samples"][2]["value"] == "3");
    CHECK(!j.contains("hinges"));
}

TEST_CASE("irr csv output is stable byte for byte") {
    RunResult r = run_cli("irr --format csv " + data("module_et1.json"));
    CHECK(r.code == 0);
    CHECK(r.out == "a1,value\n1,1\n2,2\n3,3\n");
}

TEST_CASE("irr on a good model reports hinges and rational samples") {
    RunResult r = run_cli("irr --grid 1/2:1:2 " + data("good_x1.json"));
    CHECK(r.code == 0);
    Json j = parse(r);
    REQUIRE(j.contains("hinges"));
    CHECK(j["hinges"] == Json::array({Json{{"weight", 1}, {"a", {1, 0}}}}));
    REQUIRE(j["samples"].size() == 4);
    CHECK(j["samples"][0]["a"] == Json::array({"1/2", "1/2"}));
    CHECK(j["samples"][0]["value"] == "1/2");
    CHECK(j["samples"][3]["value"] == "1");
}

TEST_CASE("irr refuses fractional weights for a raw module") {
    RunResult r = run_cli("irr --grid 1/2:1:2 " + data("module_et1.json"));
    CHECK(r.code == 2);
    CHECK(parse(r)["error"]["code"] == "ParseError");
}

TEST_CASE("profile csv output is stable byte for byte") {
    RunResult r = run_cli("profile --grid 1/2:2:4 --format csv " + data("module_et1.json"));
    CHECK(r.code == 0);
    CHECK(r.out == "s,f1\n1/2,1\n1,1\n3/2,3/2\n2,2\n");
}

TEST_CASE("profile reports quantization and terminality certificates") {
    RunResult r = run_cli("profile --grid 1/2:2:4 " + data("module_et1.json"));
    CHECK(r.code == 0);
    Json j = parse(r);
    CHECK(j["d"] == 1);
    CHECK(j["samples"].size() == 4);
    CHECK(j["quantization"]["quantized"] == true);
    CHECK(j["quantization"]["convex"] == true);
    CHECK(j["terminal"]["terminal"] == true);
    CHECK(j["terminal"]["strong"] == false);
}

TEST_CASE("profile without a grid is an input error") {
    RunResult r = run_cli("profile " + data("module_et1.json"));
    CHECK(r.code == 2);
    CHECK(parse(r)["error"]["code"] == "ParseError");
}

TEST_CASE("empty and malformed grids are input errors") {
    for (const std::string& g :
         {"\"\"", "1:2", "0:2:3", "2:1:3", "1:2:0", "1:2:x", "-1:2:3"}) {
        RunResult r = run_cli("profile --grid " + g + " " + data("module_et1.json"));
        CHECK(r.code == 2);
        CHECK(parse(r)["error"]["code"] == "ParseError");
    }
}

TEST_CASE("factor splits the two-slope operator") {
    RunResult r = run_cli("factor " + data("twisted_two_slope.json"));
    CHECK(r.code == 0);
    Json j = parse(r);
    CHECK(j["slopes"] == Json::array({"0", "1"}));
    REQUIRE(j["factors"].size() == 2);
    CHECK(j["factors"][0]["twist"] == "tddt");
    CHECK(j["factors"][0]["coeffs"].size() == 2);
}

TEST_CASE("factor csv lists descending slopes") {
    RunResult r = run_cli("factor --format csv " + data("twisted_two_slope.json"));
    CHECK(r.code == 0);
    CHECK(r.out == "factor,degree,slope\n0,1,1\n1,1,0\n");
}

TEST_CASE("linearize emits the two crossing charts") {
    RunResult r = run_cli("linearize " + data("good_x1_x2.json"));
    CHECK(r.code == 0);
    Json j = parse(r);
    REQUIRE(j["charts"].size() == 2);
    CHECK(j["charts"][0]["matrix"] == Json::array({{1, 1}, {0, 1}}));
    CHECK(j["charts"][0]["module_functional"] == Json::array({"1", "2"}));
    CHECK(j["charts"][0]["end_functional"] == Json::array({"2", "2"}));
    CHECK(j["charts"][1]["matrix"] == Json::array({{1, 0}, {1, 1}}));
    CHECK(j["charts"][1]["module_functional"] == Json::array({"2", "1"}));
    CHECK(j["charts"][0]["inv_nonneg"] == false);
}

TEST_CASE("check-good certifies the single hinge and faults the pair") {
    RunResult ok = run_cli("check-good " + data("good_x1.json"));
    CHECK(ok.code == 0);
    Json jok = parse(ok);
    CHECK(jok["admissible"] == true);
    CHECK(jok["good"] == true);
    CHECK(jok["violations"].empty());

    RunResult bad = run_cli("check-good " + data("good_x1_x2.json"));
    CHECK(bad.code == 1);
    Json jbad = parse(bad);
    CHECK(jbad["admissible"] == true);
    CHECK(jbad["good"] == false);
    REQUIRE(jbad["violations"].size() == 1);
    CHECK(jbad["violations"][0]["reason"] == "difference-not-monomial-unit");
    CHECK(jbad["violations"][0]["which"] == Json::array({0, 1}));
}

TEST_CASE("descend integrates the rank-one gauge exactly") {
    RunResult r = run_cli("descend --precision 8 " + data("descend_rank1.json"));
    CHECK(r.code == 0);
    Json j = parse(r);
    Json cell = j["gauge"][0][0];
    CHECK(cell["prec"] == 8);
    std::map<int, std::string> coeffs;
    for (const auto& t : cell["terms"])
        coeffs[t["exp"][0].get<int>()] = t["coeff"].get<std::string>();
    CHECK(coeffs[0] == "1");
    CHECK(coeffs[1] == "-3");
    CHECK(coeffs[2] == "9/2");
    CHECK(coeffs[7] == "-243/560");
}

TEST_CASE("precision below five is rejected before any work") {
    RunResult r = run_cli("descend --precision 3 " + data("descend_rank1.json"));
    CHECK(r.code == 2);
    CHECK(parse(r)["error"]["code"] == "PrecisionLoss");
}

TEST_CASE("csv is refused for structured-output commands") {
    for (const std::string& cmd : {"turning", "linearize", "check-good"}) {
        RunResult r = run_cli(cmd + " --format csv " + data("good_x1.json"));
        CHECK(r.code == 2);
        CHECK(parse(r)["error"]["code"] == "ParseError");
    }
    RunResult r = run_cli("descend --format csv " + data("descend_rank1.json"));
    CHECK(r.code == 2);
}

TEST_CASE("missing and malformed input files are input errors") {
    RunResult missing = run_cli("irr /no/such/file.json");
    CHECK(missing.code == 2);
    CHECK(parse(missing)["error"]["code"] == "ParseError");

    RunResult garbage = run_cli("irr " + std::string(MEROM_CLI_PATH));
    CHECK(garbage.code == 2);
    CHECK(parse(garbage)["error"]["code"] == "ParseError");
}

TEST_CASE("environment variables mirror the flags and flags win") {
    RunResult env = run_cli("irr " + data("module_et1.json"), "MEROM_FORMAT=csv");
    CHECK(env.out == "a1,value\n1,1\n2,2\n3,3\n");

    RunResult flag = run_cli("irr --format json " + data("module_et1.json"),
                             "MEROM_FORMAT=csv MEROM_GRID=2:2:1");
    CHECK(flag.code == 0);
    Json j = parse(flag);
    REQUIRE(j["samples"].size() == 1);
    CHECK(j["samples"][0]["a"] == Json::array({2}));

    RunResult prec = run_cli("descend " + data("descend_rank1.json"), "MEROM_PRECISION=3");
    CHECK(prec.code == 2);
}

TEST_CASE("theta tokens are validated") {
    RunResult ok = run_cli("irr --theta sqrt5 --format csv " + data("module_et1.json"));
    CHECK(ok.code == 0);
    CHECK(ok.out == "a1,value\n1,1\n2,2\n3,3\n");

    RunResult bad = run_cli("irr --theta nope " + data("module_et1.json"));
    CHECK(bad.code == 2);
    CHECK(parse(bad)["error"]["code"] == "ParseError");
}

TEST_CASE("command line misuse is an input error") {
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("frobnicate x.json").code == 2);
    CHECK(run_cli("irr").code == 2);
    CHECK(run_cli("--help").code == 0);
}

TEST_CASE("reruns are byte identical") {
    const std::string cmds[] = {
        "irr " + data("module_et1.json"),
        "irr --grid 1/2:1:2 " + data("good_x1.json"),
        "turning " + data("good_x1_x2.json"),
        "profile --grid 1/2:2:4 " + data("module_et1.json"),
        "factor " + data("twisted_two_slope.json"),
        "linearize " + data("good_x1_x2.json"),
        "check-good " + data("good_x1_x2.json"),
        "descend --precision 8 " + data("descend_rank1.json"),
    };
    for (const std::string& c : cmds) {
        RunResult a = run_cli(c);
        RunResult b = run_cli(c);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
        CHECK(!a.out.empty());
    }
}

TEST_CASE("laurent polynomials round trip through json") {
    LaurentPoly p(2);
    p.set({-1, 2}, Rat(3, 4));
    p.set({0, 0}, Rat(-5));
    Json j = laurent_to_json(p);
    CHECK(j["nvars"] == 2);
    CHECK(j["terms"].size() == 2);
    LaurentPoly q = laurent_from_json(j);
    CHECK(q.terms() == p.terms());
}

TEST_CASE("series round trip keeps precision and exactness") {
    TruncSeries s = TruncSeries::monomial(2, Rat(1, 3)) + TruncSeries::zero_known_to(6);
    Json j = series_to_json(s);
    CHECK(j["prec"] == 6);
    TruncSeries t = series_from_json(j);
    CHECK(t.prec() == 6);
    CHECK(t.coeff(2) == Rat(1, 3));

    TruncSeries e = TruncSeries::monomial(-1, Rat(7));
    Json je = series_to_json(e);
    CHECK(!je.contains("prec"));
    CHECK(series_from_json(je).exact());
}

TEST_CASE("series json rejects terms at or beyond the precision") {
    Json j = Json::parse(
        R"({"nvars": 1, "terms": [{"exp": [5], "coeff": "1"}], "prec": 5})");
    try {
        series_from_json(j);
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::parse_error);
    }
}

TEST_CASE("modules and good models round trip through json") {
    Json jm = load_json_file(data("module_et1.json"));
    DiffModule m = module_from_json(jm);
    CHECK(module_from_json(module_to_json(m)).mats == m.mats);

    Json jg = load_json_file(data("good_x1_x2.json"));
    GoodModel g = good_from_json(jg);
    Json back = good_to_json(g);
    CHECK(back["nvars"] == 2);
    CHECK(back["poles"] == 2);
    GoodModel g2 = good_from_json(back);
    CHECK(g2.terms.size() == 2);
    CHECK(g2.terms[0].phi.terms() == g.terms[0].phi.terms());
}

TEST_CASE("good model json derives shape fields from its terms") {
    Json j = Json::parse(R"({"terms": [{
        "phi": {"nvars": 1, "terms": [{"exp": [-2], "coeff": "1"}]},
        "rank": 2,
        "block": [[["1/2", "0"], ["0", "1/2"]]]
    }]})");
    GoodModel g = good_from_json(j);
    CHECK(g.nvars == 1);
    CHECK(g.poles == 1);
    CHECK(g.rank() == 2);
    CHECK(g.terms[0].blocks[0][0][0] == Rat(1, 2));
}

TEST_CASE("twisted polynomial json validates its twist") {
    Json j = load_json_file(data("twisted_two_slope.json"));
    TwistedPoly p = twisted_from_json(j);
    CHECK(p.twist == Twist::tddt);
    CHECK(p.deg() == 2);
    Json back = twisted_to_json(p);
    CHECK(back["twist"] == "tddt");
    back["twist"] = "sideways";
    try {
        twisted_from_json(back);
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::parse_error);
    }
}
