#include "merom/json_io.hpp"

#include <fstream>

namespace merom {

namespace {

const Json& need(const Json& j, const char* key) {
    if (!j.is_object()) fail(errc::parse_error, "expected a JSON object");
    auto it = j.find(key);
    if (it == j.end())
        fail(errc::parse_error, std::string("missing key '") + key + "'");
    return *it;
}

long need_int(const Json& j, const char* key) {
    const Json& v = need(j, key);
    if (!v.is_number_integer())
        fail(errc::parse_error, std::string("key '") + key + "' must be an integer");
    return v.get<long>();
}

Rat need_rat(const Json& j, const char* key) {
    const Json& v = need(j, key);
    if (!v.is_string())
        fail(errc::parse_error,
             std::string("key '") + key + "' must be a rational string");
    return parse_rat(v.get<std::string>());
}

const Json& need_array(const Json& j, const char* key) {
    const Json& v = need(j, key);
    if (!v.is_array())
        fail(errc::parse_error, std::string("key '") + key + "' must be an array");
    return v;
}

std::vector<int> exp_from_json(const Json& v, int nvars) {
    if (!v.is_array() || static_cast<int>(v.size()) != nvars)
        fail(errc::parse_error, "exponent vector has the wrong length");
    std::vector<int> e;
    for (const Json& x : v) {
        if (!x.is_number_integer())
            fail(errc::parse_error, "exponents must be integers");
        e.push_back(x.get<int>());
    }
    return e;
}

Mat<Rat> rat_matrix_from_json(const Json& v) {
    if (!v.is_array() || v.empty())
        fail(errc::parse_error, "expected a nonempty matrix of rationals");
    Mat<Rat> m;
    for (const Json& row : v) {
        if (!row.is_array())
            fail(errc::parse_error, "matrix rows must be arrays");
        std::vector<Rat> r;
        for (const Json& cell : row) {
            if (!cell.is_string())
                fail(errc::parse_error, "matrix entries must be rational strings");
            r.push_back(parse_rat(cell.get<std::string>()));
        }
        m.push_back(r);
    }
    return m;
}

}  // namespace

Json laurent_to_json(const LaurentPoly& p) {
    Json terms = Json::array();
    for (const auto& [e, c] : p.terms())
        terms.push_back(Json{{"exp", e}, {"coeff", rat_str(c)}});
    return Json{{"nvars", p.nvars()}, {"terms", terms}};
}

LaurentPoly laurent_from_json(const Json& j) {
    long nvars = need_int(j, "nvars");
    if (nvars < 0) fail(errc::parse_error, "nvars must be nonnegative");
    LaurentPoly p(static_cast<int>(nvars));
    for (const Json& t : need_array(j, "terms")) {
        std::vector<int> e = exp_from_json(need(t, "exp"), static_cast<int>(nvars));
        Rat c = need_rat(t, "coeff");
        p.set(e, p.coeff(e) + c);
    }
    return p;
}

Json series_to_json(const TruncSeries& s) {
    Json terms = Json::array();
    for (const auto& [k, c] : s.known())
        terms.push_back(Json{{"exp", std::vector<int>{k}}, {"coeff", rat_str(c)}});
    Json j{{"nvars", 1}, {"terms", terms}};
    if (!s.exact()) j["prec"] = s.prec();
    return j;
}

TruncSeries series_from_json(const Json& j) {
    if (need_int(j, "nvars") != 1)
        fail(errc::parse_error, "series must have one variable");
    TruncSeries s;
    if (j.contains("prec")) {
        long prec = need_int(j, "prec");
        if (prec < 1) fail(errc::parse_error, "prec must be positive");
        s = TruncSeries::zero_known_to(prec);
    }
    for (const Json& t : need_array(j, "terms")) {
        std::vector<int> e = exp_from_json(need(t, "exp"), 1);
        if (!s.exact() && e[0] >= s.prec())
            fail(errc::parse_error, "coefficient at or beyond the stated precision");
        s = s + TruncSeries::monomial(e[0], need_rat(t, "coeff"));
    }
    return s;
}

Json twisted_to_json(const TwistedPoly& p) {
    Json coeffs = Json::array();
    for (const TruncSeries& s : p.c) coeffs.push_back(series_to_json(s));
    return Json{{"twist", p.twist == Twist::ddt ? "ddt" : "tddt"},
                {"coeffs", coeffs}};
}

TwistedPoly twisted_from_json(const Json& j) {
    const Json& tw = need(j, "twist");
    if (!tw.is_string() ||
        (tw.get<std::string>() != "ddt" && tw.get<std::string>() != "tddt"))
        fail(errc::parse_error, "twist must be \"ddt\" or \"tddt\"");
    std::vector<TruncSeries> coeffs;
    for (const Json& s : need_array(j, "coeffs"))
        coeffs.push_back(series_from_json(s));
    return TwistedPoly(tw.get<std::string>() == "ddt" ? Twist::ddt : Twist::tddt,
                       std::move(coeffs));
}

Json module_to_json(const DiffModule& m) {
    Json mats = Json::array();
    for (const auto& mat : m.mats) {
        Json rows = Json::array();
        for (const auto& row : mat) {
            Json cells = Json::array();
            for (const LaurentPoly& p : row) cells.push_back(laurent_to_json(p));
            rows.push_back(cells);
        }
        mats.push_back(rows);
    }
    return Json{{"nvars", m.nvars},
                {"poles", m.poles},
                {"rank", m.rank},
                {"matrices", mats}};
}

DiffModule module_from_json(const Json& j) {
    DiffModule m;
    m.nvars = static_cast<int>(need_int(j, "nvars"));
    m.poles = static_cast<int>(need_int(j, "poles"));
    m.rank = need_int(j, "rank");
    for (const Json& mat : need_array(j, "matrices")) {
        if (!mat.is_array()) fail(errc::parse_error, "matrices must be arrays");
        Mat<LaurentPoly> rows;
        for (const Json& row : mat) {
            if (!row.is_array())
                fail(errc::parse_error, "matrix rows must be arrays");
            std::vector<LaurentPoly> cells;
            for (const Json& cell : row) cells.push_back(laurent_from_json(cell));
            rows.push_back(std::move(cells));
        }
        m.mats.push_back(std::move(rows));
    }
    m.validate();
    return m;
}

Json good_to_json(const GoodModel& g) {
    Json terms = Json::array();
    for (const GoodTerm& t : g.terms) {
        Json blocks = Json::array();
        for (const Mat<Rat>& b : t.blocks) {
            Json rows = Json::array();
            for (const auto& row : b) {
                Json cells = Json::array();
                for (const Rat& v : row) cells.push_back(rat_str(v));
                rows.push_back(cells);
            }
            blocks.push_back(rows);
        }
        terms.push_back(
            Json{{"phi", laurent_to_json(t.phi)}, {"rank", t.rank}, {"block", blocks}});
    }
    return Json{{"nvars", g.nvars}, {"poles", g.poles}, {"terms", terms}};
}

GoodModel good_from_json(const Json& j) {
    GoodModel g;
    const Json& terms = need_array(j, "terms");
    if (terms.empty()) fail(errc::parse_error, "a model needs at least one term");
    for (const Json& t : terms) {
        GoodTerm term;
        term.phi = laurent_from_json(need(t, "phi"));
        const Json& blocks = need_array(t, "block");
        for (const Json& b : blocks) term.blocks.push_back(rat_matrix_from_json(b));
        if (t.contains("rank"))
            term.rank = need_int(t, "rank");
        else if (!term.blocks.empty())
            term.rank = static_cast<long>(term.blocks[0].size());
        else
            fail(errc::parse_error, "term rank is not derivable without blocks");
        g.terms.push_back(std::move(term));
    }
    g.nvars = j.contains("nvars") ? static_cast<int>(need_int(j, "nvars"))
                                  : g.terms[0].phi.nvars();
    g.poles = j.contains("poles") ? static_cast<int>(need_int(j, "poles"))
                                  : static_cast<int>(g.terms[0].blocks.size());
    g.validate();
    return g;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::parse_error, "cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded())
        fail(errc::parse_error, "invalid JSON in '" + path + "'");
    return j;
}

}  // namespace merom
