#include "prenorm/report_io.hpp"

#include <cstdio>
#include <set>
#include <sstream>

#include "prenorm/errors.hpp"

namespace prenorm {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(std::string(what) + ": complex values are two-element arrays [re, im]");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

void require_keys(const json& j, const std::set<std::string>& allowed, const char* where) {
    if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k))
            throw ConfigError(std::string(where) + ": unknown key '" + k + "'");
}

} // namespace

const char* to_string(ReportFormat f) { return f == ReportFormat::Csv ? "csv" : "json"; }

bool is_grandi(const FamilyConfig& f) { return f.name == "grandi"; }

HFamily family_from_config(const FamilyConfig& f) {
    if (f.name == "power") return make_power_family();
    if (f.name == "hurwitz") return make_hurwitz_family();
    if (f.name == "eta") return make_eta_family();
    if (f.name == "gauss-ideal") return make_gauss_ideal_family();
    if (f.name == "character") {
        if (f.modulus < 1 || f.values.size() != static_cast<std::size_t>(f.modulus))
            throw ConfigError("character family: need modulus and a value table of that length");
        return make_character_family(Character(f.modulus, f.values));
    }
    if (f.name == "ehrhart") {
        Polytope p;
        if (f.shape == "box")
            p = Polytope::Box;
        else if (f.shape == "simplex")
            p = Polytope::Simplex;
        else
            throw ConfigError("ehrhart family: shape must be 'box' or 'simplex'");
        return make_ehrhart_family(p, f.dim);
    }
    if (f.name == "jacobi") return make_jacobi_family(f.a, f.b, f.x);
    throw UnknownFamily("unknown family '" + f.name + "'");
}

ExperimentConfig config_from_json(const json& j) {
    require_keys(j, {"family", "s", "t0", "rho", "m_list", "n_eval", "window", "tolerances",
                     "output"},
                 "config");
    ExperimentConfig cfg;

    if (!j.contains("family")) throw ConfigError("config: missing 'family'");
    const json& jf = j.at("family");
    require_keys(jf, {"name", "modulus", "values", "shape", "dim", "a", "b", "x"},
                 "config.family");
    if (!jf.contains("name") || !jf.at("name").is_string())
        throw ConfigError("config.family: missing string 'name'");
    cfg.family.name = jf.at("name").get<std::string>();
    if (jf.contains("modulus")) cfg.family.modulus = jf.at("modulus").get<int>();
    if (jf.contains("values")) {
        for (const auto& v : jf.at("values"))
            cfg.family.values.push_back(complex_from_json(v, "config.family.values"));
    }
    if (jf.contains("shape")) cfg.family.shape = jf.at("shape").get<std::string>();
    if (jf.contains("dim")) cfg.family.dim = jf.at("dim").get<int>();
    if (jf.contains("a")) cfg.family.a = jf.at("a").get<double>();
    if (jf.contains("b")) cfg.family.b = jf.at("b").get<double>();
    if (jf.contains("x")) cfg.family.x = jf.at("x").get<double>();

    if (j.contains("s")) cfg.s = complex_from_json(j.at("s"), "config.s");
    if (j.contains("t0")) cfg.t0 = j.at("t0").get<double>();
    if (j.contains("rho")) {
        cfg.rho = j.at("rho").get<int>();
        if (cfg.rho != 0 && cfg.rho != 1) throw ConfigError("config.rho: must be 0 or 1");
    }
    if (j.contains("m_list")) {
        cfg.m_list.clear();
        for (const auto& v : j.at("m_list")) cfg.m_list.push_back(v.get<int>());
        if (cfg.m_list.empty()) throw ConfigError("config.m_list: must be nonempty");
    }
    if (j.contains("n_eval")) cfg.engine.n_eval = j.at("n_eval").get<long>();
    if (j.contains("window")) cfg.engine.window = j.at("window").get<int>();

    if (j.contains("tolerances")) {
        const json& jt = j.at("tolerances");
        require_keys(jt,
                     {"shift_tol", "eval_tol", "fit_tol", "tol_drift", "tol_const", "max_terms",
                      "b_tol", "b_max_terms"},
                     "config.tolerances");
        if (jt.contains("shift_tol")) cfg.engine.shift_tol = jt.at("shift_tol").get<double>();
        if (jt.contains("eval_tol")) cfg.engine.eval_tol = jt.at("eval_tol").get<double>();
        if (jt.contains("fit_tol")) cfg.engine.fit_tol = jt.at("fit_tol").get<double>();
        if (jt.contains("tol_drift")) cfg.engine.tol_drift = jt.at("tol_drift").get<double>();
        if (jt.contains("tol_const")) cfg.engine.tol_const = jt.at("tol_const").get<double>();
        if (jt.contains("max_terms")) cfg.engine.max_terms = jt.at("max_terms").get<int>();
        if (jt.contains("b_tol")) cfg.engine.beval.tol = jt.at("b_tol").get<double>();
        if (jt.contains("b_max_terms")) cfg.engine.beval.max_terms = jt.at("b_max_terms").get<int>();
    }

    if (j.contains("output")) {
        const json& jo = j.at("output");
        require_keys(jo, {"path", "format"}, "config.output");
        if (jo.contains("path")) cfg.output_path = jo.at("path").get<std::string>();
        if (jo.contains("format")) {
            const std::string f = jo.at("format").get<std::string>();
            if (f == "csv")
                cfg.format = ReportFormat::Csv;
            else if (f == "json")
                cfg.format = ReportFormat::Json;
            else
                throw ConfigError("config.output.format: must be 'csv' or 'json'");
        }
    }
    return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
    json jf;
    jf["name"] = cfg.family.name;
    if (cfg.family.name == "character") {
        jf["modulus"] = cfg.family.modulus;
        json vals = json::array();
        for (const Complex& v : cfg.family.values) vals.push_back(complex_to_json(v));
        jf["values"] = vals;
    } else if (cfg.family.name == "ehrhart") {
        jf["shape"] = cfg.family.shape;
        jf["dim"] = cfg.family.dim;
    } else if (cfg.family.name == "jacobi") {
        jf["a"] = cfg.family.a;
        jf["b"] = cfg.family.b;
        jf["x"] = cfg.family.x;
    }

    json j;
    j["family"] = jf;
    j["s"] = complex_to_json(cfg.s);
    j["t0"] = cfg.t0;
    j["rho"] = cfg.rho;
    j["m_list"] = cfg.m_list;
    j["n_eval"] = cfg.engine.n_eval;
    j["window"] = cfg.engine.window;
    json jt;
    jt["shift_tol"] = cfg.engine.shift_tol;
    jt["eval_tol"] = cfg.engine.eval_tol;
    jt["fit_tol"] = cfg.engine.fit_tol;
    jt["tol_drift"] = cfg.engine.tol_drift;
    jt["tol_const"] = cfg.engine.tol_const;
    jt["max_terms"] = cfg.engine.max_terms;
    jt["b_tol"] = cfg.engine.beval.tol;
    jt["b_max_terms"] = cfg.engine.beval.max_terms;
    j["tolerances"] = jt;
    if (cfg.output_path) j["output"] = json{{"path", *cfg.output_path}, {"format", to_string(cfg.format)}};
    return j;
}

FullReport run_experiment(const ExperimentConfig& cfg) {
    FullReport out;
    out.config = cfg;
    if (is_grandi(cfg.family)) {
        out.report = weak_report_terms(grandi_terms(), cfg.m_list, cfg.rho, cfg.engine);
    } else {
        const HFamily fam = family_from_config(cfg.family);
        out.report = weak_report(fam, cfg.s, cfg.t0, cfg.rho, cfg.m_list, cfg.engine);
    }
    const auto E = out.report.expectations();
    if (E.size() >= 3) out.fit = strong_fit(E, cfg.engine.fit_tol);
    return out;
}

json report_to_json(const FullReport& r) {
    json j;
    j["meta"] = config_to_json(r.config);
    j["weak"] = r.report.weak;
    json rows = json::array();
    for (const MRow& row : r.report.rows) {
        json jr;
        jr["m"] = row.m;
        jr["verdict"] = to_string(row.verdict);
        if (row.expectation) jr["expectation"] = complex_to_json(*row.expectation);
        jr["constancy_deviation"] = row.constancy_deviation;
        jr["tail_window"] = json::array({row.tail_window_lo, row.tail_window_hi});
        if (row.cross_residual) jr["cross_residual"] = *row.cross_residual;
        rows.push_back(jr);
    }
    j["per_m"] = rows;
    if (r.fit) {
        json jf;
        jf["S"] = complex_to_json(r.fit->S);
        jf["c"] = complex_to_json(r.fit->c);
        jf["verdict"] = to_string(r.fit->verdict);
        jf["tie_break"] = r.fit->tie_break_used;
        json res;
        for (const auto& [m, v] : r.fit->residuals) res[std::to_string(m)] = v;
        jf["residuals"] = res;
        j["fit"] = jf;
    }
    return j;
}

FullReport report_from_json(const json& j) {
    require_keys(j, {"meta", "weak", "per_m", "fit"}, "report");
    FullReport out;
    out.config = config_from_json(j.at("meta"));
    out.report.weak = j.at("weak").get<bool>();
    for (const auto& jr : j.at("per_m")) {
        MRow row;
        row.m = jr.at("m").get<int>();
        const std::string v = jr.at("verdict").get<std::string>();
        if (v == "value")
            row.verdict = MVerdict::Value;
        else if (v == "drift")
            row.verdict = MVerdict::Drift;
        else if (v == "oscillation")
            row.verdict = MVerdict::Oscillation;
        else if (v == "extension-divergence")
            row.verdict = MVerdict::ExtensionDivergence;
        else
            throw ConfigError("report.per_m: unknown verdict '" + v + "'");
        if (jr.contains("expectation"))
            row.expectation = complex_from_json(jr.at("expectation"), "report.per_m.expectation");
        row.constancy_deviation = jr.at("constancy_deviation").get<double>();
        row.tail_window_lo = jr.at("tail_window")[0].get<long>();
        row.tail_window_hi = jr.at("tail_window")[1].get<long>();
        if (jr.contains("cross_residual")) row.cross_residual = jr.at("cross_residual").get<double>();
        out.report.rows.push_back(row);
    }
    if (j.contains("fit")) {
        StrongFit fit;
        const json& jf = j.at("fit");
        fit.S = complex_from_json(jf.at("S"), "report.fit.S");
        fit.c = complex_from_json(jf.at("c"), "report.fit.c");
        const std::string v = jf.at("verdict").get<std::string>();
        if (v == "strong")
            fit.verdict = FitVerdict::Strong;
        else if (v == "weak-only")
            fit.verdict = FitVerdict::WeakOnly;
        else if (v == "degenerate")
            fit.verdict = FitVerdict::Degenerate;
        else
            throw ConfigError("report.fit: unknown verdict '" + v + "'");
        fit.tie_break_used = jf.at("tie_break").get<bool>();
        for (const auto& [k, vv] : jf.at("residuals").items())
            fit.residuals[std::stoi(k)] = vv.get<double>();
        out.fit = fit;
    }
    return out;
}

std::string report_to_csv(const FullReport& r) {
    std::ostringstream os;
    const ExperimentConfig& c = r.config;
    os << "# renormalization report\n";
    os << "# family=" << c.family.name << " s=" << fmt_double(c.s.real()) << ","
       << fmt_double(c.s.imag()) << " t0=" << fmt_double(c.t0) << " rho=" << c.rho
       << " n_eval=" << c.engine.n_eval << " window=" << c.engine.window << "\n";
    os << "m,re_e,im_e,verdict,constancy_deviation,cross_residual\n";
    for (const MRow& row : r.report.rows) {
        os << row.m << ",";
        if (row.expectation)
            os << fmt_double(row.expectation->real()) << "," << fmt_double(row.expectation->imag());
        else
            os << ",";
        os << "," << to_string(row.verdict) << "," << fmt_double(row.constancy_deviation) << ",";
        if (row.cross_residual) os << fmt_double(*row.cross_residual);
        os << "\n";
    }
    if (r.fit) {
        os << "fit,re_S,im_S,re_c,im_c,verdict,max_residual,tie_break\n";
        os << "fit," << fmt_double(r.fit->S.real()) << "," << fmt_double(r.fit->S.imag()) << ","
           << fmt_double(r.fit->c.real()) << "," << fmt_double(r.fit->c.imag()) << ","
           << to_string(r.fit->verdict) << "," << fmt_double(r.fit->max_residual()) << ","
           << (r.fit->tie_break_used ? 1 : 0) << "\n";
    }
    return os.str();
}

std::string render_report(const FullReport& r, ReportFormat fmt) {
    if (fmt == ReportFormat::Csv) return report_to_csv(r);
    return report_to_json(r).dump(2) + "\n";
}

} // namespace prenorm
