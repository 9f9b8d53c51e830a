#include "CLI11.hpp"
#include "merom/disc.hpp"
#include "merom/hensel.hpp"
#include "merom/irregularity.hpp"
#include "merom/json_io.hpp"
#include "merom/toric.hpp"

#include <algorithm>
#include <iostream>

using namespace merom;

namespace {

struct Options {
    std::string input;
    long precision = 25;
    std::string grid;
    unsigned long long seed = 0;
    std::string format = "json";
    std::string theta;
};

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

void emit_csv(const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows) {
    auto line = [](const std::vector<std::string>& cells) {
        std::string s;
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) s += ',';
            s += cells[i];
        }
        return s;
    };
    std::cout << line(header) << "\n";
    for (const auto& row : rows) std::cout << line(row) << "\n";
}

void emit_error(const std::string& code, const std::string& message) {
    emit(Json{{"error", Json{{"code", code}, {"message", message}}}});
}

// Input and request-shape errors exit 2; errors arising from the mathematics
// of a well-formed request exit 1.
int classify(errc c) {
    switch (c) {
        case errc::parse_error:
        case errc::precision_loss:
        case errc::zero_input:
        case errc::shape_mismatch:
        case errc::twist_mismatch:
        case errc::missing_constant_term:
        case errc::pole_outside_divisor:
        case errc::dimension_unsupported:
        case errc::precondition_violated:
        case errc::rational_radius:
        case errc::insufficient_samples:
            return 2;
        default:
            return 1;
    }
}

Json strs(const std::vector<Rat>& v) {
    Json a = Json::array();
    for (const Rat& x : v) a.push_back(rat_str(x));
    return a;
}

void require_json(const Options& opt, const char* cmd) {
    if (opt.format != "json")
        fail(errc::parse_error, std::string(cmd) + " emits json only");
}

std::vector<Rat> parse_grid(const std::string& spec) {
    if (spec.empty()) fail(errc::parse_error, "empty grid; expected lo:hi:steps");
    size_t a = spec.find(':');
    size_t b = spec.rfind(':');
    if (a == std::string::npos || b == a)
        fail(errc::parse_error, "grid must be lo:hi:steps");
    Rat lo = parse_rat(spec.substr(0, a));
    Rat hi = parse_rat(spec.substr(a + 1, b - a - 1));
    Rat steps_r = parse_rat(spec.substr(b + 1));
    if (!is_integer(steps_r) || sgn(steps_r) <= 0)
        fail(errc::parse_error, "steps must be a positive integer");
    if (sgn(lo) <= 0) fail(errc::parse_error, "grid endpoints must be positive");
    if (hi < lo) fail(errc::parse_error, "grid endpoints out of order");
    long steps = to_long(steps_r);
    std::vector<Rat> pts;
    for (long k = 0; k < steps; ++k)
        pts.push_back(steps == 1 ? lo
                                 : lo + (hi - lo) * Rat(k) / Rat(steps - 1));
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// All integer weight vectors with entries from the axis, in ascending
// lexicographic order.
std::vector<std::vector<long>> weight_product(const std::vector<long>& axis,
                                              int nvars) {
    std::vector<std::vector<long>> out;
    std::vector<size_t> idx(nvars, 0);
    while (true) {
        std::vector<long> w;
        for (int i = 0; i < nvars; ++i) w.push_back(axis[idx[i]]);
        out.push_back(w);
        int i = nvars - 1;
        while (i >= 0 && ++idx[i] == axis.size()) idx[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

int cmd_irr(const Json& in, const Options& opt) {
    std::vector<Rat> grid =
        parse_grid(opt.grid.empty() ? std::string("1:3:3") : opt.grid);
    Json samples = Json::array();
    std::vector<std::vector<std::string>> rows;
    int nvars = 0;
    Json hinges;
    if (in.contains("matrices")) {
        DiffModule m = module_from_json(in);
        nvars = m.nvars;
        std::vector<long> axis;
        for (const Rat& s : grid) {
            if (!is_integer(s))
                fail(errc::parse_error, "module sampling needs integer weights");
            axis.push_back(to_long(s));
        }
        for (const auto& a : weight_product(axis, nvars)) {
            Rat v = irr_at_robust(m, a, opt.seed);
            samples.push_back(Json{{"a", a}, {"value", rat_str(v)}});
            std::vector<std::string> row;
            for (long x : a) row.push_back(std::to_string(x));
            row.push_back(rat_str(v));
            rows.push_back(row);
        }
    } else {
        GoodModel g = good_from_json(in);
        nvars = g.nvars;
        PLFunction f = irr_good(g);
        hinges = Json::array();
        for (const PLTerm& t : f.terms)
            hinges.push_back(Json{{"weight", t.weight}, {"a", t.a}});
        std::vector<size_t> idx(nvars, 0);
        while (true) {
            std::vector<Rat> w;
            for (int i = 0; i < nvars; ++i) w.push_back(grid[idx[i]]);
            Rat v = f.eval(w);
            Json a = Json::array();
            std::vector<std::string> row;
            for (const Rat& x : w) {
                a.push_back(rat_str(x));
                row.push_back(rat_str(x));
            }
            samples.push_back(Json{{"a", a}, {"value", rat_str(v)}});
            row.push_back(rat_str(v));
            rows.push_back(row);
            int i = nvars - 1;
            while (i >= 0 && ++idx[i] == grid.size()) idx[i--] = 0;
            if (i < 0) break;
        }
    }
    if (opt.format == "csv") {
        std::vector<std::string> header;
        for (int i = 1; i <= nvars; ++i) header.push_back("a" + std::to_string(i));
        header.push_back("value");
        emit_csv(header, rows);
        return 0;
    }
    Json out{{"command", "irr"}};
    if (!hinges.is_null()) out["hinges"] = hinges;
    out["samples"] = samples;
    emit(out);
    return 0;
}

Json cert_json(const NumericalityCertificate& c) {
    return Json{{"numerical", c.numerical},
                {"functional", strs(c.functional)},
                {"witness_u", c.witness_u},
                {"witness_v", c.witness_v}};
}

int cmd_turning(const Json& in, const Options& opt) {
    require_json(opt, "turning");
    DiffModule m = in.contains("matrices") ? module_from_json(in)
                                           : realize(good_from_json(in));
    TurningReport rep = turning_test(m, 2, opt.seed);
    emit(Json{{"command", "turning"},
              {"numerical", rep.pass},
              {"functional", strs(rep.module_cert.functional)},
              {"module", cert_json(rep.module_cert)},
              {"end", cert_json(rep.end_cert)}});
    return rep.pass ? 0 : 1;
}

int cmd_profile(const Json& in, const Options& opt) {
    if (opt.grid.empty()) fail(errc::parse_error, "profile needs --grid lo:hi:steps");
    std::vector<Rat> grid = parse_grid(opt.grid);
    DiffModule m = in.contains("matrices") ? module_from_json(in)
                                           : realize(good_from_json(in));
    RadiusProfile prof = profile(m, grid);
    if (opt.format == "csv") {
        std::vector<std::string> header = {"s"};
        for (int i = 1; i <= prof.d; ++i) header.push_back("f" + std::to_string(i));
        std::vector<std::vector<std::string>> rows;
        for (const auto& [s, f] : prof.samples) {
            std::vector<std::string> row = {rat_str(s)};
            for (const Rat& v : f) row.push_back(rat_str(v));
            rows.push_back(row);
        }
        emit_csv(header, rows);
        return 0;
    }
    QuantizationReport q = slope_quantization_check(prof);
    TerminalReport t = terminal_test(prof);
    Json samples = Json::array();
    for (const auto& [s, f] : prof.samples)
        samples.push_back(Json{{"s", rat_str(s)}, {"f", strs(f)}});
    emit(Json{{"command", "profile"},
              {"d", prof.d},
              {"samples", samples},
              {"quantization", Json{{"quantized", q.quantized},
                                    {"convex", q.convex},
                                    {"level_above", q.level_above},
                                    {"witness_i", q.witness_i},
                                    {"witness_s", rat_str(q.witness_s)}}},
              {"terminal",
               Json{{"terminal", t.terminal},
                    {"becomes_at",
                     t.becomes_at ? Json(rat_str(*t.becomes_at)) : Json(nullptr)},
                    {"strong", t.strong},
                    {"strong_lo", rat_str(t.strong_lo)},
                    {"strong_hi", rat_str(t.strong_hi)}}}});
    return 0;
}

int cmd_factor(const Json& in, const Options& opt) {
    TwistedPoly p = twisted_from_json(in);
    std::vector<Rat> slopes = full_slopes(p);
    std::vector<TwistedPoly> factors = slope_factor(p, opt.precision);
    if (opt.format == "csv") {
        std::vector<std::vector<std::string>> rows;
        for (size_t i = 0; i < factors.size(); ++i) {
            std::vector<Rat> fs = full_slopes(factors[i]);
            rows.push_back({std::to_string(i),
                            std::to_string(factors[i].deg()),
                            fs.empty() ? std::string() : rat_str(fs.front())});
        }
        emit_csv({"factor", "degree", "slope"}, rows);
        return 0;
    }
    Json fs = Json::array();
    for (const TwistedPoly& f : factors) fs.push_back(twisted_to_json(f));
    emit(Json{{"command", "factor"}, {"slopes", strs(slopes)}, {"factors", fs}});
    return 0;
}

int cmd_linearize(const Json& in, const Options& opt) {
    require_json(opt, "linearize");
    GoodModel g = good_from_json(in);
    Json charts = Json::array();
    for (const LinearizedChart& lc : linearize(irr_good(g), end_irr_good(g)))
        charts.push_back(Json{{"matrix", lc.chart.a},
                              {"inv_nonneg", lc.chart.inv_nonneg},
                              {"module_functional", strs(lc.module_functional)},
                              {"end_functional", strs(lc.end_functional)}});
    emit(Json{{"command", "linearize"}, {"charts", charts}});
    return 0;
}

int cmd_check_good(const Json& in, const Options& opt) {
    require_json(opt, "check-good");
    GoodModel g = good_from_json(in);
    GoodnessReport rep = check_good(g);
    Json violations = Json::array();
    for (const GoodnessViolation& v : rep.violations)
        violations.push_back(Json{{"which", v.which},
                                  {"reason", v.reason},
                                  {"witness", laurent_to_json(v.witness)}});
    emit(Json{{"command", "check-good"},
              {"admissible", rep.admissible},
              {"good", rep.good},
              {"violations", violations}});
    return rep.good ? 0 : 1;
}

int cmd_descend(const Json& in, const Options& opt) {
    require_json(opt, "descend");
    DiffModule m = module_from_json(in);
    if (m.nvars != 1)
        fail(errc::dimension_unsupported, "descend needs a one-variable module");
    if (m.poles != 1)
        fail(errc::precondition_violated,
             "descend needs the logarithmic presentation");
    Mat<TruncSeries> n;
    for (const auto& row : m.mats[0]) {
        std::vector<TruncSeries> cells;
        for (const LaurentPoly& p : row) cells.push_back(TruncSeries::from_laurent(p));
        n.push_back(std::move(cells));
    }
    Mat<TruncSeries> u = descend_gauge(n, opt.precision);
    Json rows = Json::array();
    for (const auto& row : u) {
        Json cells = Json::array();
        for (const TruncSeries& s : row) cells.push_back(series_to_json(s));
        rows.push_back(cells);
    }
    emit(Json{{"command", "descend"}, {"gauge", rows}});
    return 0;
}

int run(const std::string& cmd, const Options& opt) {
    if (opt.precision < 5)
        fail(errc::precision_loss, "precision must be at least 5");
    if (opt.format != "json" && opt.format != "csv")
        fail(errc::parse_error, "format must be json or csv");
    if (!opt.theta.empty()) set_theta_token(opt.theta);
    Json in = load_json_file(opt.input);
    if (cmd == "irr") return cmd_irr(in, opt);
    if (cmd == "turning") return cmd_turning(in, opt);
    if (cmd == "profile") return cmd_profile(in, opt);
    if (cmd == "factor") return cmd_factor(in, opt);
    if (cmd == "linearize") return cmd_linearize(in, opt);
    if (cmd == "check-good") return cmd_check_good(in, opt);
    return cmd_descend(in, opt);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact invariants of meromorphic differential modules"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--precision", opt.precision, "series precision (at least 5)")
        ->envname("MEROM_PRECISION");
    app.add_option("--grid", opt.grid, "sample grid lo:hi:steps")
        ->envname("MEROM_GRID");
    app.add_option("--seed", opt.seed, "sampling seed")->envname("MEROM_SEED");
    app.add_option("--format", opt.format, "output format: json or csv")
        ->envname("MEROM_FORMAT");
    app.add_option("--theta", opt.theta, "irrational generator token sqrtN")
        ->envname("MEROM_THETA");
    const std::pair<const char*, const char*> commands[] = {
        {"irr", "irregularity samples on a weight grid"},
        {"turning", "numericality certificates for a module and its End"},
        {"profile", "radius profile with quantization and terminality reports"},
        {"factor", "slope factorization of a twisted polynomial"},
        {"linearize", "monomial charts linearizing the irregularity invariants"},
        {"check-good", "admissibility and goodness of a decomposed model"},
        {"descend", "gauge normalizing a logarithmic connection matrix"},
    };
    for (const auto& [name, desc] : commands) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->fallthrough();
        sub->add_option("input", opt.input, "input JSON file")->required();
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error("ParseError", e.what());
        return 2;
    }
    std::string cmd = app.get_subcommands().at(0)->get_name();
    try {
        return run(cmd, opt);
    } catch (const error& e) {
        std::string what = e.what();
        size_t sep = what.find(": ");
        emit_error(errc_name(e.code()),
                   sep == std::string::npos ? what : what.substr(sep + 2));
        return classify(e.code());
    } catch (const std::exception& e) {
        emit_error("InternalError", e.what());
        return 1;
    }
}
