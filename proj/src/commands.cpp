#include "chemostat/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "chemostat/criteria.hpp"
#include "chemostat/dde.hpp"
#include "chemostat/io.hpp"
#include "chemostat/reproduce.hpp"
#include "chemostat/washout.hpp"

namespace chemostat {

namespace {

using nlohmann::ordered_json;

int verdict_exit(Verdict v) {
    switch (v) {
    case Verdict::persistent: return kExitPersistent;
    case Verdict::not_persistent: return kExitNotPersistent;
    case Verdict::inconclusive: return kExitInconclusive;
    }
    return kExitInconclusive;
}

void write_table(const Table& table, const std::string& base,
                 const CommandOptions& opts) {
    if (opts.format == "json")
        write_file_atomic(base + ".json", to_json(table));
    else if (opts.format == "csv")
        write_file_atomic(base + ".csv", to_csv(table));
    else
        throw ConfigError("format: expected csv or json");
}

ScenarioConfig resolved(const ScenarioConfig& cfg, const CommandOptions& opts) {
    ScenarioConfig out = cfg;
    apply_resolution(out, opts.resolution);
    return out;
}

// shared regime resolution for check/sweep: constant, periodic (with its
// omega), or neither
struct Regime {
    bool constant = false;
    bool periodic = false;
    double omega = 0.0;
};

Regime detect_regime(const ScenarioConfig& cfg) {
    Regime r;
    const ChemostatModel& m = cfg.model;
    if (m.s0.is_constant() && m.D.is_constant()) {
        r.constant = true;
        return r;
    }
    if (m.D.is_periodic() || m.s0.is_periodic()) {
        r.periodic = true;
        if (cfg.omega > 0.0)
            r.omega = cfg.omega;
        else if (m.D.is_periodic())
            r.omega = m.D.period();
        else
            r.omega = m.s0.period();
    }
    return r;
}

struct ZPhi {
    WashoutSolution z;
    PhiFunction phi;
};

ZPhi build_z_phi(const ScenarioConfig& cfg, const Regime& regime,
                 double t_needed) {
    if (regime.periodic) {
        WashoutSolution z =
            periodic_washout(cfg.model, regime.omega, regime.omega / 4096.0);
        PhiFunction phi = phi_periodic(cfg.model, z, regime.omega, cfg.phi_tol);
        return {std::move(z), std::move(phi)};
    }
    const double tau = cfg.model.tau;
    const double t_total = t_needed + tau + cfg.h;
    WashoutSolution z = washout_solution(cfg.model, cfg.z0, t_total, cfg.h);
    CSolution c = c_solution(cfg.model, z,
                             constant_c_history(tau, cfg.h, 1.0), t_total, cfg.h);
    PhiFunction phi = phi_from_c(c, cfg.model, z);
    return {std::move(z), std::move(phi)};
}

unsigned thread_budget(std::size_t jobs) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("CHEMOSTAT_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min<long>(n, cap);
    }
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

} // namespace

int cmd_simulate(const ScenarioConfig& raw, const CommandOptions& opts,
                 std::ostream& log) {
    const ScenarioConfig cfg = resolved(raw, opts);
    if (!cfg.history) throw ConfigError("history: required by simulate");
    if (!is_non_null(*cfg.history))
        throw ConfigError("history: null initial condition (x never positive)");

    const Trajectory traj = integrate(cfg.model, *cfg.history, cfg.t_end, cfg.h);
    const SampledSeries y = compute_y(traj, cfg.model);
    const SampledSeries defect = conservation_defect(traj, cfg.model, cfg.z0);

    bool have_psi = true;
    PsiResult psi;
    try {
        psi = compute_psi(traj, cfg.model);
    } catch (const std::domain_error&) {
        have_psi = false; // biomass hit the floor somewhere; psi undefined
    }

    const std::size_t z0 = traj.zero_index();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    Table table;
    table.columns = {"t", "s", "x", "I", "y", "psi", "defect"};
    table.data.resize(table.columns.size());
    for (std::size_t k = z0; k < traj.t.size(); ++k) {
        const double t = traj.t[k];
        const std::size_t i = k - z0;
        table.data[0].push_back(t);
        table.data[1].push_back(traj.s[k]);
        table.data[2].push_back(traj.x[k]);
        table.data[3].push_back(traj.I[k]);
        table.data[4].push_back(y.v[i]);
        const bool in_psi = have_psi && t <= traj.t_end() - cfg.model.tau + 0.5 * cfg.h;
        table.data[5].push_back(in_psi ? psi.psi.v[i] : nan);
        table.data[6].push_back(defect.v[i]);
    }
    write_table(table, opts.out_dir + "/trajectory", opts);

    const ClassifyResult cls =
        classify_trajectory(traj, cfg.tail_fraction, cfg.classify_threshold);

    ordered_json summary;
    summary["scenario"] = cfg.name;
    summary["verdict"] = verdict_name(cls.verdict);
    summary["delta_hat"] = cls.delta_hat;
    summary["x_end"] = cls.x_end;
    summary["t_end"] = cfg.t_end;
    summary["h"] = cfg.h;
    if (have_psi) summary["psi_residual"] = psi.identity_residual;
    summary["notes"] = cls.notes;
    summary["warnings"] = cfg.warnings;
    write_file_atomic(opts.out_dir + "/summary.json", summary.dump(2) + "\n");

    log << "simulate: verdict " << verdict_name(cls.verdict)
        << " (min tail biomass " << cls.delta_hat << ")\n";
    return verdict_exit(cls.verdict);
}

int cmd_phi(const ScenarioConfig& raw, const CommandOptions& opts,
            std::ostream& log) {
    const ScenarioConfig cfg = resolved(raw, opts);
    const Regime regime = detect_regime(cfg);
    const double tau = cfg.model.tau;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    Table table;
    table.columns = {"t", "z", "c", "phi"};
    table.data.resize(4);

    ordered_json summary;
    summary["scenario"] = cfg.name;
    summary["tau"] = tau;

    if (regime.periodic) {
        const ZPhi zp = build_z_phi(cfg, regime, 0.0);
        const SampledSeries& grid = zp.phi.phi;
        for (std::size_t i = 0; i < grid.v.size(); ++i) {
            const double t = grid.t0 + static_cast<double>(i) * grid.h;
            table.data[0].push_back(t);
            table.data[1].push_back(zp.z.z_at(t));
            table.data[2].push_back(nan); // periodic construction has no c
            table.data[3].push_back(grid.v[i]);
        }
        summary["regime"] = "periodic";
        summary["omega"] = regime.omega;
        summary["residual"] = zp.phi.residual;
        summary["convergence_trace"] = zp.phi.convergence_trace;
    } else {
        WashoutSolution z = washout_solution(cfg.model, cfg.z0, cfg.t_end, cfg.h);
        CSolution c = c_solution(cfg.model, z, constant_c_history(tau, cfg.h, 1.0),
                                 cfg.t_end, cfg.h);
        PhiFunction phi = phi_from_c(c, cfg.model, z);
        const SampledSeries& grid = phi.phi;
        for (std::size_t i = 0; i < grid.v.size(); ++i) {
            const double t = grid.t0 + static_cast<double>(i) * grid.h;
            table.data[0].push_back(t);
            table.data[1].push_back(z.z_at(t));
            table.data[2].push_back(std::exp(phi.log_c.at(t)));
            table.data[3].push_back(grid.v[i]);
        }
        summary["regime"] = tau == 0.0 ? "delay-free" : "transient";
        summary["residual"] = phi.residual;
        summary["method_agreement"] = z.method_agreement;
    }
    summary["warnings"] = cfg.warnings;

    write_table(table, opts.out_dir + "/phi", opts);
    write_file_atomic(opts.out_dir + "/phi_summary.json", summary.dump(2) + "\n");
    log << "phi: residual " << summary["residual"].get<double>() << "\n";
    return 0;
}

namespace {

CriterionReport evaluate_criterion(const ScenarioConfig& cfg) {
    const Regime regime = detect_regime(cfg);
    std::string check = cfg.check;
    if (check == "auto") {
        if (regime.constant) check = "constant";
        else if (regime.periodic) check = "periodic";
        else check = "search";
    }

    if (check == "constant") return check_constant(cfg.model);
    if (check == "periodic") {
        if (!regime.periodic)
            throw ConfigError("criterion.check: periodic check requires a "
                              "periodic s0 or D (or criterion.omega)");
        return check_periodic(cfg.model, regime.omega);
    }

    const double stride = cfg.stride > 0.0 ? cfg.stride : default_stride(cfg.model);
    double T = cfg.T;
    if (T <= 0.0) T = std::max(10.0 * stride, cfg.model.tau);
    double horizon = cfg.horizon;
    if (horizon <= 0.0) horizon = std::max(2.0 * T + 10.0 * stride, cfg.t_end);
    double eta = cfg.eta;
    if (eta <= 0.0) eta = 1e-3 * std::max(cfg.model.D.max_value(), 1.0);

    const ZPhi zp = build_z_phi(cfg, regime, horizon);
    if (check == "window")
        return check_window(cfg.model, zp.z, zp.phi, eta, T, horizon, stride);
    if (check == "search")
        return search_eta_T(cfg.model, zp.z, zp.phi, horizon, stride);
    if (check == "necessary")
        return check_necessary_exp(cfg.model, zp.z, eta, T, horizon, stride);
    throw ConfigError("criterion.check: unknown check \"" + check + "\"");
}

} // namespace

int cmd_check(const ScenarioConfig& raw, const CommandOptions& opts,
              std::ostream& log) {
    const ScenarioConfig cfg = resolved(raw, opts);
    CriterionReport report = evaluate_criterion(cfg);
    for (const auto& w : cfg.warnings) report.notes.push_back(w);
    write_file_atomic(opts.out_dir + "/report.json", report_to_json(report));
    log << report.criterion << ": " << verdict_name(report.verdict)
        << " (margin " << report.margin << ")\n";
    return verdict_exit(report.verdict);
}

int cmd_reproduce(const CommandOptions& opts, std::ostream& log) {
    const ReproduceReport report = run_reproduce();

    ordered_json doc;
    auto& items = doc["items"] = ordered_json::array();
    for (const auto& item : report.items) {
        log << (item.passed ? "PASS" : "FAIL") << "  " << item.name << " — "
            << item.detail << "\n";
        items.push_back({{"name", item.name},
                         {"passed", item.passed},
                         {"value", item.value},
                         {"detail", item.detail}});
    }
    doc["all_passed"] = report.all_passed();
    write_file_atomic(opts.out_dir + "/reproduce.json", doc.dump(2) + "\n");

    if (!report.all_passed()) {
        for (const auto& item : report.items)
            if (!item.passed) log << "failed item: " << item.name << "\n";
        return kExitNumericError;
    }
    log << "all items passed\n";
    return 0;
}

int cmd_sweep(const ScenarioConfig& raw, const SweepSpec& sweep,
              const CommandOptions& opts, std::ostream& log) {
    const ScenarioConfig cfg = resolved(raw, opts);
    if (sweep.steps < 2) throw ConfigError("sweep.steps: need at least 2");
    if (!(sweep.from < sweep.to)) throw ConfigError("sweep.range: need from < to");
    const bool is_tau = sweep.parameter == "tau";
    const bool is_d = sweep.parameter == "D-scale";
    const bool is_s0 = sweep.parameter == "s0-scale";
    if (!is_tau && !is_d && !is_s0)
        throw ConfigError("sweep.parameter: expected tau, D-scale, or s0-scale");
    if ((is_tau && sweep.from < 0.0) || (!is_tau && sweep.from <= 0.0))
        throw ConfigError("sweep.range: values must keep the model valid");

    const std::size_t n = static_cast<std::size_t>(sweep.steps);
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i)
        values[i] = sweep.from + (sweep.to - sweep.from) * static_cast<double>(i) /
                                     static_cast<double>(n - 1);

    std::vector<CriterionReport> reports(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                ScenarioConfig variant = cfg;
                const ChemostatModel& m = cfg.model;
                if (is_tau)
                    variant.model = ChemostatModel(m.p, m.s0, m.D, values[i]);
                else if (is_d)
                    variant.model = ChemostatModel(m.p, m.s0, m.D.scaled(values[i]),
                                                   m.tau);
                else
                    variant.model = ChemostatModel(m.p, m.s0.scaled(values[i]), m.D,
                                                   m.tau);
                const Regime regime = detect_regime(variant);
                if (regime.constant)
                    reports[i] = check_constant(variant.model);
                else if (regime.periodic)
                    reports[i] = check_periodic(variant.model, regime.omega);
                else
                    throw ConfigError(
                        "sweep: requires constant or periodic inputs");
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n_threads = thread_budget(n);
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::ostringstream csv;
    csv << "value,margin,verdict\n";
    for (std::size_t i = 0; i < n; ++i)
        csv << format_double(values[i]) << "," << format_double(reports[i].margin)
            << "," << verdict_name(reports[i].verdict) << "\n";
    write_file_atomic(opts.out_dir + "/sweep.csv", csv.str());

    // persistence boundary: sign changes of the margin across the grid
    std::vector<std::pair<double, double>> crossings;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double m0 = reports[i].margin, m1 = reports[i + 1].margin;
        if ((m0 > 0.0) != (m1 > 0.0))
            crossings.emplace_back(values[i], values[i + 1]);
    }
    ordered_json summary;
    summary["parameter"] = sweep.parameter;
    summary["steps"] = sweep.steps;
    auto& jb = summary["boundaries"] = ordered_json::array();
    for (const auto& [a, b] : crossings) {
        // secant estimate inside the bracketing cell
        std::size_t ia = 0;
        while (ia + 1 < n && values[ia + 1] <= a + 1e-12) ++ia;
        const double m0 = reports[ia].margin, m1 = reports[ia + 1].margin;
        const double est = a - m0 * (b - a) / (m1 - m0);
        jb.push_back({{"lo", a}, {"hi", b}, {"estimate", est}});
    }
    if (crossings.size() > 1)
        summary["note"] = "margin is not monotone across the range; boundary "
                          "reported as an interval list";
    write_file_atomic(opts.out_dir + "/sweep_summary.json", summary.dump(2) + "\n");

    log << "sweep: " << n << " points, " << crossings.size() << " boundary crossing"
        << (crossings.size() == 1 ? "" : "s") << "\n";
    return 0;
}

} // namespace chemostat
