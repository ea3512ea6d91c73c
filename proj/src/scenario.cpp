#include "boson_decay/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "boson_decay/decay.hpp"
#include "boson_decay/errors.hpp"
#include "boson_decay/fock_oracle.hpp"
#include "boson_decay/format.hpp"
#include "boson_decay/kernels.hpp"
#include "boson_decay/parallel.hpp"
#include "boson_decay/propagator.hpp"
#include "boson_decay/thermal.hpp"

namespace boson_decay {

namespace {

template <class State>
const State& require_initial(const ScenarioConfig& cfg, std::string_view kind)
{
    if (const auto* s = std::get_if<State>(&cfg.initial))
        return *s;
    throw ConfigError(std::string(to_string(cfg.scenario)) + " requires initial.kind = " +
                      std::string(kind));
}

template <class RowFn>
void fill_rows(RunReport& report, const GridConfig& grid, RowFn&& row_at)
{
    std::vector<std::vector<double>> rows(grid.n_steps);
    parallel_for(grid.n_steps, [&](std::size_t k) { rows[k] = row_at(grid.time(k)); });
    for (auto& r : rows)
        report.add_row(std::move(r));
}

double thermal_n_th(const ScenarioConfig& cfg)
{
    return cfg.thermal ? cfg.thermal->n_th : 0.0;
}

void run_fock_decay(const ScenarioConfig& cfg, RunReport& report)
{
    const unsigned n = require_initial<FockState>(cfg, "fock").n;
    report.columns = {"t"};
    for (unsigned m = 0; m <= n; ++m)
        report.columns.push_back("P_" + std::to_string(m));
    fill_rows(report, cfg.grid, [&](double t) {
        // single-excitation survival p = e^{-gamma t}
        const auto dist = fock_populations(n, std::exp(-cfg.bath.gamma * t), t);
        std::vector<double> row{t};
        row.insert(row.end(), dist.probs.begin(), dist.probs.end());
        return row;
    });
    report.meta["decay_time"] = fock_survival(n, cfg.bath.gamma, 0.0).decay_time;
}

void run_coherent_decay(const ScenarioConfig& cfg, RunReport& report)
{
    const cplx alpha = require_initial<CoherentState>(cfg, "coherent").alpha;
    const DiscreteBath bath = cfg.bath.discretize();
    report.columns = {"t", "mean_number", "re_label", "im_label", "purity"};

    if (bath.size() <= FullFockOracle::max_bath_modes)
    {
        const unsigned n_max = suggested_truncation(OpenSystemState{CoherentState{alpha}});
        const FullFockOracle oracle(cfg.system, bath, n_max);
        fill_rows(report, cfg.grid, [&](double t) {
            const auto rho = oracle.evolve(CoherentState{alpha}, t);
            const cplx label = rho.mean_annihilation();
            return std::vector<double>{t, rho.mean_number(), label.real(), label.imag(),
                                       rho.purity()};
        });
        report.meta["method"] = "full_fock_oracle";
        report.meta["n_max"] = n_max;
    }
    else
    {
        const ExactPropagator prop(cfg.system, bath);
        fill_rows(report, cfg.grid, [&](double t) {
            const auto decay = coherent_decay(alpha, prop.system_row(t)[0]);
            return std::vector<double>{t, decay.mean_number, decay.label.real(),
                                       decay.label.imag(), 1.0};
        });
        report.meta["method"] = "exact_propagator";
    }
    report.meta["decay_time"] = coherent_decay_time(cfg.bath.gamma);
}

void run_excited_bath(const ScenarioConfig& cfg, RunReport& report)
{
    const cplx alpha = require_initial<CoherentState>(cfg, "coherent").alpha;
    const DiscreteBath bath = cfg.bath.discretize();
    std::vector<cplx> labels(bath.size() + 1, cplx{});
    labels[0] = alpha;
    if (cfg.thermal)
    {
        const ThermalSampleSet samples(bath_occupations(bath, *cfg.thermal), cfg.thermal->beta,
                                       1, cfg.mc->seed);
        samples.fill(0, std::span(labels).subspan(1));
        report.meta["seed"] = cfg.mc->seed;
    }
    if (cfg.excitation)
        labels[cfg.excitation->mode] += cfg.excitation->lambda;
    const double initial_norm = kernels::norm_sq(labels);

    const ExactPropagator prop(cfg.system, bath);
    report.columns = {"t", "re_mu", "im_mu", "abs_mu_sq", "bath_norm_sq", "label_norm_defect"};
    fill_rows(report, cfg.grid, [&](double t) {
        const auto z = prop.evolve_labels(labels, t);
        const double bath_norm = kernels::norm_sq(std::span(z).subspan(1));
        const double mu_sq = std::norm(z[0]);
        return std::vector<double>{t, z[0].real(), z[0].imag(), mu_sq, bath_norm,
                                   std::abs(mu_sq + bath_norm - initial_norm)};
    });
}

void run_thermal(const ScenarioConfig& cfg, RunReport& report)
{
    const cplx alpha = require_initial<CoherentState>(cfg, "coherent").alpha;
    const DiscreteBath bath = cfg.bath.discretize();
    const ThermalSpec& thermal = *cfg.thermal;
    const ExactPropagator prop(cfg.system, bath);
    const auto h = EffectiveHamiltonian::make(cfg.system.omega_b, cfg.bath.gamma, thermal.n_th);

    std::vector<PropagatorCoefficients> coeffs(cfg.grid.n_steps);
    parallel_for(cfg.grid.n_steps,
                 [&](std::size_t k) { coeffs[k] = prop.coefficients(cfg.grid.time(k)); });

    const auto samples = sample_thermal_bath(bath, thermal, cfg.mc->samples, cfg.mc->seed);
    const auto mc = mc_reduced_moments_series(alpha, bath, thermal, coeffs, samples);

    report.columns = {"t",           "phi_discrete",     "phi_closed",
                      "paper_mean_number", "heff_mean_number", "oracle_occupation",
                      "mc_occupation", "mc_stderr"};
    for (std::size_t k = 0; k < coeffs.size(); ++k)
    {
        const double t = coeffs[k].t;
        const auto phi = phi_discrete(bath, thermal, coeffs[k]);
        const auto closed = phi_closed(thermal.n_th, cfg.bath.gamma, t);
        report.add_row({t, phi.value, closed.value, paper_mean_number_T(alpha, coeffs[k].u, phi),
                        heff_evolve_coherent(h, alpha, t).mean_number,
                        gaussian_moment_oracle(alpha, bath, thermal, coeffs[k]).occupation,
                        mc[k].moments.occupation, mc[k].occupation_standard_error});
    }
    report.meta["seed"] = cfg.mc->seed;
    report.meta["samples"] = cfg.mc->samples;
    report.meta["n_th"] = thermal.n_th;
}

void run_wwa_validate(const ScenarioConfig& cfg, RunReport& report)
{
    const DiscreteBath bath = cfg.bath.discretize();
    const ExactPropagator prop(cfg.system, bath);
    const double gamma = cfg.bath.gamma;
    report.columns = {"t", "re_u", "im_u", "abs_u_sq", "sum_abs_v_sq", "unitarity_defect"};
    fill_rows(report, cfg.grid, [&](double t) {
        const auto c = prop.coefficients(t);
        return std::vector<double>{t,           c.u.real(),         c.u.imag(), std::norm(c.u),
                                   dissipation_sum(c), unitarity_defect(c)};
    });

    double max_u = 0.0;
    double max_v = 0.0;
    double max_defect = 0.0;
    for (const auto& row : report.rows)
    {
        const double t = row[0];
        max_u = std::max(max_u, std::abs(row[3] - std::exp(-gamma * t)));
        max_v = std::max(max_v, std::abs(row[4] - broadband_dissipation(gamma, t)));
        max_defect = std::max(max_defect, row[5]);
    }
    auto& s = report.meta["summary"];
    s["max_abs_u_sq_deviation"] = max_u;
    s["max_dissipation_deviation"] = max_v;
    s["max_unitarity_defect"] = max_defect;
    s["tolerance"] = wwa_tolerance;
    s["pass"] = max_u <= wwa_tolerance && max_v <= wwa_tolerance;
    report.meta["recurrence_time"] = bath.recurrence_time();
}

void run_oracle_compare(const ScenarioConfig& cfg, RunReport& report)
{
    const unsigned n = require_initial<FockState>(cfg, "fock").n;
    const DiscreteBath bath = cfg.bath.discretize();
    const double gamma = cfg.bath.gamma;
    const double n_th = thermal_n_th(cfg);
    const FullFockOracle oracle(cfg.system, bath, n);
    const ExactPropagator prop(cfg.system, bath);
    const auto h = EffectiveHamiltonian::make(cfg.system.omega_b, gamma, n_th);
    const std::vector<double> occ =
        cfg.thermal ? bath_occupations(bath, *cfg.thermal) : std::vector<double>(bath.size(), 0.0);

    report.columns = {"t",
                      "max_population_deviation",
                      "heff_mean_number",
                      "exact_mean_number",
                      "oracle_mean_number",
                      "divergence"};
    fill_rows(report, cfg.grid, [&](double t) {
        const auto rho = oracle.evolve(FockState{n}, t);
        const auto c = prop.coefficients(t);
        const auto binomial = fock_populations(n, std::norm(c.u), t);
        const auto pops = rho.populations();
        double dev = 0.0;
        for (unsigned m = 0; m <= n; ++m)
            dev = std::max(dev, std::abs(pops[m] - binomial.probs[m]));
        const double heff = heff_evolve_fock(h, n, t).mean_number;
        const double exact = n * std::exp(-gamma * t) + n_th * broadband_dissipation(gamma, t);
        const double from_oracle = rho.mean_number() + kernels::weighted_norm_sq(occ, c.v);
        return std::vector<double>{t, dev, heff, exact, from_oracle, heff - exact};
    });

    double max_dev = 0.0;
    for (const auto& row : report.rows)
        max_dev = std::max(max_dev, row[1]);
    const double nn = static_cast<double>(n);
    auto& s = report.meta["summary"];
    s["max_population_deviation"] = max_dev;
    s["divergence_first_order_slope"] = -(nn * n_th + nn * nn - nn + n_th) * gamma;
    report.meta["n_th"] = n_th;
}

}  // namespace

RunReport run_scenario(const ScenarioConfig& config)
{
    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    report.meta["scenario"] = std::string(to_string(config.scenario));
    report.meta["version"] = std::string(library_version);
    report.meta["kernels"] = std::string(kernels::active_kernels().name);
    report.meta["config"] = config_to_json(config);

    switch (config.scenario)
    {
    case ScenarioKind::fock_decay: run_fock_decay(config, report); break;
    case ScenarioKind::coherent_decay: run_coherent_decay(config, report); break;
    case ScenarioKind::excited_bath: run_excited_bath(config, report); break;
    case ScenarioKind::thermal: run_thermal(config, report); break;
    case ScenarioKind::wwa_validate: run_wwa_validate(config, report); break;
    case ScenarioKind::oracle_compare: run_oracle_compare(config, report); break;
    }

    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    report.meta["wall_clock_seconds"] = elapsed.count();
    return report;
}

std::string summary_line(const RunReport& report)
{
    if (!report.meta.contains("summary"))
        return {};
    const auto& s = report.meta["summary"];
    const std::string scenario = report.meta.value("scenario", "");
    std::ostringstream out;
    if (scenario == "wwa-validate")
    {
        out << "wwa-validate: max_t ||u|^2 - exp(-gamma t)| = "
            << format_double(s["max_abs_u_sq_deviation"].get<double>())
            << ", max_t |sum|v|^2 - (1 - exp(-gamma t))| = "
            << format_double(s["max_dissipation_deviation"].get<double>())
            << ", tolerance " << format_double(wwa_tolerance) << ": "
            << (s["pass"].get<bool>() ? "PASS" : "FAIL");
    }
    else if (scenario == "oracle-compare")
    {
        out << "oracle-compare: max population deviation = "
            << format_double(s["max_population_deviation"].get<double>())
            << ", first-order divergence slope = "
            << format_double(s["divergence_first_order_slope"].get<double>());
    }
    return out.str();
}

}  // namespace boson_decay
