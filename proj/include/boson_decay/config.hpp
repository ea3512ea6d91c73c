#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "boson_decay/propagator.hpp"
#include "boson_decay/report.hpp"
#include "boson_decay/spectral_bath.hpp"
#include "boson_decay/states.hpp"

namespace boson_decay {

enum class ScenarioKind
{
    fock_decay,
    coherent_decay,
    excited_bath,
    thermal,
    wwa_validate,
    oracle_compare
};

ScenarioKind parse_scenario_kind(std::string_view tag);
std::string_view to_string(ScenarioKind kind);

struct BathConfig
{
    double gamma = 1.0;
    std::size_t n_modes = 2000;
    double half_bandwidth = 20.0;
    double band_center = 100.0;

    SpectralDensitySpec spectral_density() const;
    DiscreteBath discretize() const;
};

struct GridConfig
{
    double t_max = 5.0;
    std::size_t n_steps = 101;

    double time(std::size_t k) const;
};

struct MonteCarloConfig
{
    std::size_t samples = 10000;
    std::uint64_t seed = 0;
};

/// Explicit bath excitation for excited-bath runs (mode index counted from 1).
struct BathExcitation
{
    std::size_t mode;
    cplx lambda;
};

struct ScenarioConfig
{
    ScenarioKind scenario = ScenarioKind::fock_decay;
    SystemMode system{100.0};
    BathConfig bath;
    std::optional<ThermalSpec> thermal;
    OpenSystemState initial = FockState{1};
    std::optional<BathExcitation> excitation;
    GridConfig grid;
    std::optional<MonteCarloConfig> mc;
    std::string output_path = "-";
    OutputFormat format = OutputFormat::csv;

    /// Effective settings as section -> key -> text. Parsing this tree again
    /// yields the same config.
    boost::property_tree::ptree effective;
    /// "section.key" entries filled from defaults.
    std::vector<std::string> defaults_applied;
};

/// Reads an INI document into a tree without validating it.
boost::property_tree::ptree read_config_tree(std::string_view text);

/// Validates a tree. Throws ConfigError naming the offending key.
ScenarioConfig parse_config(const boost::property_tree::ptree& tree);
ScenarioConfig parse_config(std::string_view text);

/// INI rendering of the effective settings.
std::string to_ini(const ScenarioConfig& config);

/// Metadata block: effective settings plus the list of defaults applied.
nlohmann::ordered_json config_to_json(const ScenarioConfig& config);
ScenarioConfig config_from_json(const nlohmann::ordered_json& doc);

}  // namespace boson_decay
