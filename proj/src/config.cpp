#include "boson_decay/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

#include "boson_decay/errors.hpp"
#include "boson_decay/format.hpp"

namespace pt = boost::property_tree;

namespace boson_decay {

namespace {

const std::map<std::string, std::set<std::string>, std::less<>> schema = {
    {"", {"scenario"}},
    {"system", {"omega_b"}},
    {"bath", {"gamma", "n_modes", "half_bandwidth", "band_center"}},
    {"thermal", {"beta", "n_th"}},
    {"initial",
     {"kind", "fock_n", "alpha_re", "alpha_im", "terms", "lambda_mode", "lambda_re", "lambda_im"}},
    {"grid", {"t_max", "n_steps"}},
    {"mc", {"samples", "seed"}},
    {"output", {"path", "format"}},
};

constexpr std::size_t max_modes = 100000;
constexpr unsigned max_fock_n = 1000;
constexpr std::size_t max_steps = 1000000;
constexpr std::size_t max_samples = 100000000;

class Reader
{
  public:
    explicit Reader(const pt::ptree& tree) : tree_(tree) { check_schema(); }

    std::optional<std::string> raw(const std::string& key) const
    {
        if (auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.')))
            return *v;
        return std::nullopt;
    }

    double real(const std::string& key, double fallback)
    {
        if (auto v = raw(key))
            return parse_real(key, *v);
        defaults_.push_back(key);
        return fallback;
    }

    std::optional<double> optional_real(const std::string& key) const
    {
        if (auto v = raw(key))
            return parse_real(key, *v);
        return std::nullopt;
    }

    std::uint64_t integer(const std::string& key, std::uint64_t fallback)
    {
        if (auto v = raw(key))
            return parse_integer(key, *v);
        defaults_.push_back(key);
        return fallback;
    }

    std::optional<std::uint64_t> optional_integer(const std::string& key) const
    {
        if (auto v = raw(key))
            return parse_integer(key, *v);
        return std::nullopt;
    }

    std::string text(const std::string& key, const std::string& fallback)
    {
        if (auto v = raw(key))
            return *v;
        defaults_.push_back(key);
        return fallback;
    }

    std::vector<std::string> take_defaults() { return std::move(defaults_); }

  private:
    void check_schema() const
    {
        for (const auto& [name, node] : tree_)
        {
            if (node.empty() && !(schema.contains(name) && node.data().empty()))
            {
                // top-level key
                if (!schema.at("").contains(name))
                    throw ConfigError("unknown key '" + name + "'");
                continue;
            }
            auto section = schema.find(name);
            if (section == schema.end() || name.empty())
                throw ConfigError("unknown section '" + name + "'");
            for (const auto& [key, leaf] : node)
            {
                if (!section->second.contains(key))
                    throw ConfigError("unknown key '" + name + "." + key + "'");
                if (!leaf.empty())
                    throw ConfigError("key '" + name + "." + key + "' must be a plain value");
            }
        }
    }

    static double parse_real(const std::string& key, const std::string& text)
    {
        try
        {
            return parse_double(trim(text));
        }
        catch (const std::invalid_argument&)
        {
            throw ConfigError("'" + key + "' is not a number: '" + text + "'");
        }
    }

    static std::uint64_t parse_integer(const std::string& key, const std::string& text)
    {
        const std::string_view s = trim(text);
        std::uint64_t value = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
        if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
            throw ConfigError("'" + key + "' is not a nonnegative integer: '" + text + "'");
        return value;
    }

    static std::string_view trim(std::string_view s)
    {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
            s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
            s.remove_suffix(1);
        return s;
    }

    const pt::ptree& tree_;
    std::vector<std::string> defaults_;
};

[[noreturn]] void out_of_range(const std::string& key, const std::string& bound)
{
    throw ConfigError("'" + key + "' out of range: must be " + bound);
}

void require(bool ok, const std::string& key, const std::string& bound)
{
    if (!ok)
        out_of_range(key, bound);
}

// terms = "w_re w_im a_re a_im; ..."
CoherentSuperposition parse_terms(const std::string& text)
{
    CoherentSuperposition out;
    std::stringstream all(text);
    std::string chunk;
    while (std::getline(all, chunk, ';'))
    {
        std::istringstream fields(chunk);
        std::vector<double> v;
        std::string f;
        while (fields >> f)
        {
            try
            {
                v.push_back(parse_double(f));
            }
            catch (const std::invalid_argument&)
            {
                throw ConfigError("'initial.terms' has a bad number: '" + f + "'");
            }
        }
        if (v.empty())
            continue;
        if (v.size() != 4)
            throw ConfigError("'initial.terms' entries need 4 numbers: w_re w_im a_re a_im");
        out.terms.push_back({cplx(v[0], v[1]), cplx(v[2], v[3])});
    }
    if (out.terms.empty())
        throw ConfigError("'initial.terms' is empty");
    return out;
}

std::string format_terms(const CoherentSuperposition& s)
{
    std::string out;
    for (std::size_t k = 0; k < s.terms.size(); ++k)
    {
        const auto& t = s.terms[k];
        out += (k ? "; " : "") + format_double(t.weight.real()) + " " +
               format_double(t.weight.imag()) + " " + format_double(t.alpha.real()) + " " +
               format_double(t.alpha.imag());
    }
    return out;
}

std::string default_initial_kind(ScenarioKind kind)
{
    switch (kind)
    {
    case ScenarioKind::fock_decay:
    case ScenarioKind::oracle_compare:
    case ScenarioKind::wwa_validate:
        return "fock";
    default:
        return "coherent";
    }
}

}  // namespace

ScenarioKind parse_scenario_kind(std::string_view tag)
{
    static const std::pair<std::string_view, ScenarioKind> names[] = {
        {"fock-decay", ScenarioKind::fock_decay},
        {"coherent-decay", ScenarioKind::coherent_decay},
        {"excited-bath", ScenarioKind::excited_bath},
        {"thermal", ScenarioKind::thermal},
        {"wwa-validate", ScenarioKind::wwa_validate},
        {"oracle-compare", ScenarioKind::oracle_compare},
    };
    for (const auto& [name, kind] : names)
        if (name == tag)
            return kind;
    throw ConfigError("unknown scenario '" + std::string(tag) + "'");
}

std::string_view to_string(ScenarioKind kind)
{
    switch (kind)
    {
    case ScenarioKind::fock_decay: return "fock-decay";
    case ScenarioKind::coherent_decay: return "coherent-decay";
    case ScenarioKind::excited_bath: return "excited-bath";
    case ScenarioKind::thermal: return "thermal";
    case ScenarioKind::wwa_validate: return "wwa-validate";
    case ScenarioKind::oracle_compare: return "oracle-compare";
    }
    return "?";
}

SpectralDensitySpec BathConfig::spectral_density() const
{
    return SpectralDensitySpec::make(gamma, band_center, half_bandwidth);
}

DiscreteBath BathConfig::discretize() const
{
    return discretize_bath(spectral_density(), n_modes);
}

double GridConfig::time(std::size_t k) const
{
    if (k + 1 == n_steps)
        return t_max;
    return t_max * static_cast<double>(k) / static_cast<double>(n_steps - 1);
}

pt::ptree read_config_tree(std::string_view text)
{
    std::istringstream in{std::string(text)};
    pt::ptree tree;
    try
    {
        pt::read_ini(in, tree);
    }
    catch (const pt::ini_parser_error& e)
    {
        throw ConfigError("malformed config: " + std::string(e.message()) + " at line " +
                          std::to_string(e.line()));
    }
    return tree;
}

ScenarioConfig parse_config(std::string_view text)
{
    return parse_config(read_config_tree(text));
}

ScenarioConfig parse_config(const pt::ptree& tree)
{
    Reader r(tree);
    ScenarioConfig cfg;
    auto& eff = cfg.effective;

    const auto scenario = r.raw("scenario");
    if (!scenario)
        throw ConfigError("missing required key 'scenario'");
    cfg.scenario = parse_scenario_kind(*scenario);
    eff.put("scenario", std::string(to_string(cfg.scenario)));

    const double omega_b = r.real("system.omega_b", 100.0);
    require(omega_b > 0.0 && std::isfinite(omega_b), "system.omega_b", "> 0");
    cfg.system = SystemMode::make(omega_b);
    eff.put("system.omega_b", format_double(omega_b));

    auto& bath = cfg.bath;
    bath.gamma = r.real("bath.gamma", 1.0);
    require(bath.gamma > 0.0 && std::isfinite(bath.gamma), "bath.gamma", "> 0");
    const std::uint64_t default_modes = cfg.scenario == ScenarioKind::oracle_compare ? 3 : 2000;
    const std::uint64_t n_modes = r.integer("bath.n_modes", default_modes);
    require(n_modes >= 1 && n_modes <= max_modes, "bath.n_modes",
            "in [1, " + std::to_string(max_modes) + "]");
    bath.n_modes = n_modes;
    bath.half_bandwidth = r.real("bath.half_bandwidth", 20.0 * bath.gamma);
    require(bath.half_bandwidth > 0.0 && std::isfinite(bath.half_bandwidth),
            "bath.half_bandwidth", "> 0");
    bath.band_center = r.real("bath.band_center", omega_b);
    require(std::isfinite(bath.band_center), "bath.band_center", "finite");
    eff.put("bath.gamma", format_double(bath.gamma));
    eff.put("bath.n_modes", bath.n_modes);
    eff.put("bath.half_bandwidth", format_double(bath.half_bandwidth));
    eff.put("bath.band_center", format_double(bath.band_center));

    const auto beta = r.optional_real("thermal.beta");
    const auto n_th = r.optional_real("thermal.n_th");
    if (beta && n_th)
        throw ConfigError("give either 'thermal.beta' or 'thermal.n_th', not both");
    if (beta)
    {
        require(*beta > 0.0, "thermal.beta", "> 0 (beta = 0 means infinite temperature)");
        cfg.thermal = ThermalSpec::make(*beta, omega_b);
        eff.put("thermal.beta", format_double(*beta));
    }
    else if (n_th)
    {
        require(*n_th >= 0.0 && std::isfinite(*n_th), "thermal.n_th", ">= 0");
        const double b = *n_th == 0.0 ? std::numeric_limits<double>::infinity()
                                      : std::log1p(1.0 / *n_th) / omega_b;
        cfg.thermal = ThermalSpec{b, *n_th};
        eff.put("thermal.n_th", format_double(*n_th));
    }
    if (cfg.scenario == ScenarioKind::thermal && !cfg.thermal)
        throw ConfigError("thermal requires beta");
    if (cfg.thermal && bath.band_center - bath.half_bandwidth <= 0.0)
        throw ConfigError("'bath.band_center' out of range: thermal occupations need the band "
                          "above omega = 0 (band_center > half_bandwidth)");

    const std::string kind = r.text("initial.kind", default_initial_kind(cfg.scenario));
    eff.put("initial.kind", kind);
    if (kind == "fock")
    {
        const std::uint64_t n = r.integer("initial.fock_n", 1);
        require(n <= max_fock_n, "initial.fock_n", "<= " + std::to_string(max_fock_n));
        cfg.initial = FockState{static_cast<unsigned>(n)};
        eff.put("initial.fock_n", n);
    }
    else if (kind == "coherent")
    {
        const cplx alpha(r.real("initial.alpha_re", 1.0), r.real("initial.alpha_im", 0.0));
        require(std::isfinite(alpha.real()) && std::isfinite(alpha.imag()), "initial.alpha_re",
                "finite");
        cfg.initial = CoherentState{alpha};
        eff.put("initial.alpha_re", format_double(alpha.real()));
        eff.put("initial.alpha_im", format_double(alpha.imag()));
    }
    else if (kind == "superposition")
    {
        const auto terms = r.raw("initial.terms");
        if (!terms)
            throw ConfigError("superposition requires 'initial.terms'");
        auto sup = parse_terms(*terms);
        if (!(superposition_norm_sq(sup) > 0.0))
            throw ConfigError("'initial.terms' has zero norm");
        eff.put("initial.terms", format_terms(sup));
        cfg.initial = std::move(sup);
    }
    else
    {
        throw ConfigError("'initial.kind' must be fock, coherent or superposition, got '" + kind +
                          "'");
    }
    for (const char* key : {"fock_n", "alpha_re", "alpha_im", "terms"})
    {
        const std::string full = std::string("initial.") + key;
        const bool used = eff.get_optional<std::string>(full).has_value();
        if (!used && r.raw(full))
            throw ConfigError("'" + full + "' does not apply to initial.kind = " + kind);
    }

    if (const auto mode = r.optional_integer("initial.lambda_mode"))
    {
        require(*mode >= 1 && *mode <= bath.n_modes, "initial.lambda_mode",
                "in [1, bath.n_modes]");
        const cplx lambda(r.real("initial.lambda_re", 1.0), r.real("initial.lambda_im", 0.0));
        cfg.excitation = BathExcitation{static_cast<std::size_t>(*mode), lambda};
        eff.put("initial.lambda_mode", *mode);
        eff.put("initial.lambda_re", format_double(lambda.real()));
        eff.put("initial.lambda_im", format_double(lambda.imag()));
    }
    else if (r.raw("initial.lambda_re") || r.raw("initial.lambda_im"))
    {
        throw ConfigError("'initial.lambda_re'/'initial.lambda_im' need 'initial.lambda_mode'");
    }

    cfg.grid.t_max = r.real("grid.t_max", 5.0);
    require(cfg.grid.t_max > 0.0 && std::isfinite(cfg.grid.t_max), "grid.t_max", "> 0");
    const std::uint64_t steps = r.integer("grid.n_steps", 101);
    require(steps >= 2 && steps <= max_steps, "grid.n_steps",
            "in [2, " + std::to_string(max_steps) + "]");
    cfg.grid.n_steps = steps;
    eff.put("grid.t_max", format_double(cfg.grid.t_max));
    eff.put("grid.n_steps", cfg.grid.n_steps);

    const bool needs_mc = cfg.scenario == ScenarioKind::thermal ||
                          (cfg.scenario == ScenarioKind::excited_bath && cfg.thermal);
    const auto seed = r.optional_integer("mc.seed");
    if (needs_mc)
    {
        if (!seed)
            throw ConfigError("mc requires seed");
        MonteCarloConfig mc;
        mc.seed = *seed;
        const std::uint64_t samples = r.integer("mc.samples", 10000);
        require(samples >= 1 && samples <= max_samples, "mc.samples",
                "in [1, " + std::to_string(max_samples) + "]");
        mc.samples = samples;
        cfg.mc = mc;
        eff.put("mc.samples", mc.samples);
        eff.put("mc.seed", mc.seed);
    }
    else if (seed || r.raw("mc.samples"))
    {
        throw ConfigError("[mc] settings do not apply to scenario " +
                          std::string(to_string(cfg.scenario)));
    }

    cfg.output_path = r.text("output.path", "-");
    if (cfg.output_path.empty())
        throw ConfigError("'output.path' is empty");
    try
    {
        cfg.format = parse_output_format(r.text("output.format", "csv"));
    }
    catch (const std::invalid_argument& e)
    {
        throw ConfigError(std::string("'output.format': ") + e.what());
    }
    eff.put("output.path", cfg.output_path);
    eff.put("output.format", std::string(to_string(cfg.format)));

    cfg.defaults_applied = r.take_defaults();
    return cfg;
}

std::string to_ini(const ScenarioConfig& config)
{
    std::ostringstream out;
    pt::write_ini(out, config.effective);
    return out.str();
}

nlohmann::ordered_json config_to_json(const ScenarioConfig& config)
{
    nlohmann::ordered_json settings = nlohmann::ordered_json::object();
    for (const auto& [name, node] : config.effective)
    {
        if (node.empty())
        {
            settings[name] = node.data();
            continue;
        }
        auto& section = settings[name];
        for (const auto& [key, leaf] : node)
            section[key] = leaf.data();
    }
    nlohmann::ordered_json doc;
    doc["settings"] = std::move(settings);
    doc["defaults_applied"] = config.defaults_applied;
    return doc;
}

ScenarioConfig config_from_json(const nlohmann::ordered_json& doc)
{
    pt::ptree tree;
    for (const auto& [name, value] : doc.at("settings").items())
    {
        if (value.is_string())
        {
            tree.put(name, value.get<std::string>());
            continue;
        }
        for (const auto& [key, leaf] : value.items())
            tree.put(pt::ptree::path_type(name + "." + key, '.'), leaf.get<std::string>());
    }
    return parse_config(tree);
}

}  // namespace boson_decay
