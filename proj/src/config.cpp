#include "chemostat/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace chemostat {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

const json& get(const json& j, const std::string& path, const char* key) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path + "." + key, "missing");
    return *it;
}

double get_number(const json& j, const std::string& path, const char* key) {
    const json& v = get(j, path, key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

double get_number_or(const json& j, const std::string& path, const char* key,
                     double fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    return get_number(j, path, key);
}

std::string get_string(const json& j, const std::string& path, const char* key) {
    const json& v = get(j, path, key);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

std::vector<double> get_array(const json& j, const std::string& path,
                              const char* key) {
    const json& v = get(j, path, key);
    if (!v.is_array() || v.empty()) fail(path + "." + key, "expected a non-empty array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number()) fail(path + "." + key, "expected numbers only");
        out.push_back(e.get<double>());
    }
    return out;
}

TimeFunction parse_timefn(const json& j, const std::string& path) {
    const std::string kind = get_string(j, path, "kind");
    try {
        if (kind == "constant")
            return TimeFunction::constant(get_number(j, path, "value"));
        if (kind == "periodic")
            return TimeFunction::periodic(get_number(j, path, "omega"),
                                          get_array(j, path, "samples"));
        if (kind == "table")
            return TimeFunction::tabulated(get_array(j, path, "t"),
                                           get_array(j, path, "values"),
                                           TimeFunction::Extrapolation::hold);
    } catch (const std::exception& e) {
        fail(path, e.what());
    }
    fail(path + ".kind", "unknown kind \"" + kind +
                             "\" (expected constant, periodic, or table)");
}

UptakeFunction parse_uptake(const json& j, const std::string& path) {
    const std::string kind = get_string(j, path, "kind");
    try {
        if (kind == "monod")
            return UptakeFunction::monod(get_number(j, path, "m"),
                                         get_number(j, path, "a"));
        if (kind == "table")
            return UptakeFunction::table(get_array(j, path, "s"),
                                         get_array(j, path, "p"));
    } catch (const std::exception& e) {
        fail(path, e.what());
    }
    fail(path + ".kind", "unknown kind \"" + kind + "\" (expected monod or table)");
}

// history entries are either {"constant": v} or {"t": [...], "values": [...]}
void parse_history_entry(const json& j, const std::string& path, double tau,
                         std::vector<double>& knots, std::vector<double>& values) {
    if (!j.is_object()) fail(path, "expected an object");
    if (j.contains("constant")) {
        const double v = get_number(j, path, "constant");
        if (tau > 0.0) {
            knots = {-tau, 0.0};
            values = {v, v};
        } else {
            knots = {0.0};
            values = {v};
        }
        return;
    }
    knots = get_array(j, path, "t");
    values = get_array(j, path, "values");
}

void align_step(ScenarioConfig& cfg) {
    const double tau = cfg.model.tau;
    if (tau <= 0.0 || cfg.h <= 0.0) return;
    const double ratio = tau / cfg.h;
    if (std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, ratio)) return;
    const double adjusted = tau / std::ceil(ratio);
    std::ostringstream msg;
    msg << "run.h: " << cfg.h << " does not divide tau, lowered to " << adjusted;
    cfg.warnings.push_back(msg.str());
    cfg.h = adjusted;
}

} // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("top level: expected an object");

    const json& jm = get(doc, "", "model");
    const double tau = get_number(jm, "model", "tau");
    if (!(tau >= 0.0) || !std::isfinite(tau)) fail("model.tau", "must be finite and >= 0");

    UptakeFunction p = parse_uptake(get(jm, "model", "uptake"), "model.uptake");
    TimeFunction s0 = parse_timefn(get(jm, "model", "s0"), "model.s0");
    TimeFunction D = parse_timefn(get(jm, "model", "D"), "model.D");

    ScenarioConfig cfg{.name = doc.value("name", std::string{}),
                       .model = ChemostatModel(std::move(p), std::move(s0),
                                               std::move(D), tau)};

    if (doc.contains("history")) {
        const json& jh = doc["history"];
        std::vector<double> sk, sv, xk, xv;
        parse_history_entry(get(jh, "history", "s"), "history.s", tau, sk, sv);
        parse_history_entry(get(jh, "history", "x"), "history.x", tau, xk, xv);
        try {
            cfg.history.emplace(tau, std::move(sk), std::move(sv), std::move(xk),
                                std::move(xv));
        } catch (const std::exception& e) {
            fail("history", e.what());
        }
    }

    if (doc.contains("run")) {
        const json& jr = doc["run"];
        cfg.t_end = get_number_or(jr, "run", "t_end", cfg.t_end);
        cfg.h = get_number_or(jr, "run", "h", cfg.h);
        cfg.phi_tol = get_number_or(jr, "run", "phi_tol", cfg.phi_tol);
        cfg.classify_threshold =
            get_number_or(jr, "run", "threshold", cfg.classify_threshold);
        cfg.tail_fraction = get_number_or(jr, "run", "tail_fraction", cfg.tail_fraction);
        if (jr.is_object() && jr.contains("z0")) cfg.z0 = get_number(jr, "run", "z0");
        if (!(cfg.t_end > 0.0)) fail("run.t_end", "must be positive");
        if (!(cfg.h > 0.0)) fail("run.h", "must be positive");
        if (!(cfg.phi_tol > 0.0)) fail("run.phi_tol", "must be positive");
        if (!(cfg.tail_fraction > 0.0) || !(cfg.tail_fraction < 1.0))
            fail("run.tail_fraction", "must be in (0,1)");
    }
    if (cfg.z0 <= 0.0) {
        // default washout seed: the nutrient the history (or input) starts with
        cfg.z0 = cfg.history ? cfg.history->s_at(0.0) : cfg.model.s0.eval(0.0);
        if (cfg.z0 <= 0.0) cfg.z0 = 1.0;
    }

    if (doc.contains("criterion")) {
        const json& jc = doc["criterion"];
        if (!jc.is_object()) fail("criterion", "expected an object");
        if (jc.contains("check")) cfg.check = get_string(jc, "criterion", "check");
        cfg.omega = get_number_or(jc, "criterion", "omega", 0.0);
        cfg.eta = get_number_or(jc, "criterion", "eta", 0.0);
        cfg.T = get_number_or(jc, "criterion", "T", 0.0);
        cfg.horizon = get_number_or(jc, "criterion", "horizon", 0.0);
        cfg.stride = get_number_or(jc, "criterion", "stride", 0.0);
        static const char* known[] = {"auto",   "constant", "periodic",
                                      "window", "search",   "necessary"};
        bool ok = false;
        for (const char* k : known) ok = ok || cfg.check == k;
        if (!ok) fail("criterion.check", "unknown check \"" + cfg.check + "\"");
    }

    align_step(cfg);
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

void apply_resolution(ScenarioConfig& cfg, const std::string& resolution) {
    if (resolution == "default") return;
    if (resolution == "fast")
        cfg.h *= 4.0;
    else if (resolution == "fine")
        cfg.h *= 0.25;
    else
        throw ConfigError("resolution: expected fast, default, or fine");
    align_step(cfg);
}

} // namespace chemostat
