// Command-line front end: `run` executes a scenario, `dump-bath` writes the
// discretized bath.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "boson_decay/config.hpp"
#include "boson_decay/errors.hpp"
#include "boson_decay/report.hpp"
#include "boson_decay/scenario.hpp"
#include "boson_decay/spectral_bath.hpp"

namespace bd = boson_decay;

namespace {

enum ExitCode
{
    exit_ok = 0,
    exit_config = 2,
    exit_numeric = 3,
    exit_io = 4
};

int fail(ExitCode code, std::string_view kind, std::string_view message)
{
    nlohmann::ordered_json rec;
    rec["error"] = kind;
    rec["message"] = message;
    rec["exit_code"] = static_cast<int>(code);
    std::cerr << rec.dump() << std::endl;
    return code;
}

struct Overrides
{
    std::string config_path;
    // flag name -> config key, value kept as text so numbers pass through untouched
    std::map<std::string, std::string> values;
};

const std::pair<const char*, const char*> flag_keys[] = {
    {"scenario", "scenario"},
    {"gamma", "bath.gamma"},
    {"omega-b", "system.omega_b"},
    {"n-modes", "bath.n_modes"},
    {"half-bandwidth", "bath.half_bandwidth"},
    {"band-center", "bath.band_center"},
    {"beta", "thermal.beta"},
    {"fock-n", "initial.fock_n"},
    {"alpha-re", "initial.alpha_re"},
    {"alpha-im", "initial.alpha_im"},
    {"t-max", "grid.t_max"},
    {"n-steps", "grid.n_steps"},
    {"samples", "mc.samples"},
    {"seed", "mc.seed"},
    {"output", "output.path"},
    {"format", "output.format"},
};

void add_flags(CLI::App& cmd, Overrides& o)
{
    cmd.add_option("-c,--config", o.config_path, "INI scenario file");
    for (const auto& [flag, key] : flag_keys)
    {
        cmd.add_option_function<std::string>(
            std::string("--") + flag, [&o, key](const std::string& v) { o.values[key] = v; },
            std::string("overrides ") + key);
    }
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::ios_base::failure("cannot read config '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

bd::ScenarioConfig load(const Overrides& o, bool bath_only)
{
    auto tree = o.config_path.empty() ? boost::property_tree::ptree{}
                                      : bd::read_config_tree(read_file(o.config_path));
    for (const auto& [key, value] : o.values)
        tree.put(boost::property_tree::ptree::path_type(key, '.'), value);
    if (bath_only && !tree.get_optional<std::string>("scenario"))
        tree.put("scenario", "wwa-validate");
    return bd::parse_config(tree);
}

void write_output(const std::string& path, const std::string& text)
{
    if (path == "-")
    {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text) || !out.flush())
        throw std::ios_base::failure("cannot write '" + path + "'");
}

int run(const Overrides& o)
{
    const auto cfg = load(o, false);
    const auto report = bd::run_scenario(cfg);
    if (cfg.output_path == "-")
    {
        write_output("-", cfg.format == bd::OutputFormat::csv ? bd::to_csv_string(report)
                                                              : bd::to_json(report).dump(2) + "\n");
    }
    else
    {
        bd::emit_report(report, cfg.format, cfg.output_path);
    }
    if (const auto line = bd::summary_line(report); !line.empty())
        std::cerr << line << '\n';
    return exit_ok;
}

int dump_bath(const Overrides& o)
{
    const auto cfg = load(o, true);
    std::ostringstream csv;
    bd::write_bath_csv(csv, cfg.bath.discretize());
    write_output(cfg.output_path, csv.str());
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Single bosonic mode decaying into a discretized boson bath"};
    app.require_subcommand(1);
    Overrides run_opts;
    Overrides bath_opts;
    auto* run_cmd = app.add_subcommand("run", "run a scenario and write its trace");
    add_flags(*run_cmd, run_opts);
    auto* bath_cmd = app.add_subcommand("dump-bath", "write the discretized bath as CSV");
    add_flags(*bath_cmd, bath_opts);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        return fail(exit_config, "usage", e.what());
    }

    try
    {
        if (run_cmd->parsed())
            return run(run_opts);
        return dump_bath(bath_opts);
    }
    catch (const bd::ConfigError& e)
    {
        return fail(exit_config, "config", e.what());
    }
    catch (const std::ios_base::failure& e)
    {
        return fail(exit_io, "io", e.what());
    }
    catch (const bd::ResourceError& e)
    {
        return fail(exit_numeric, "resource", e.what());
    }
    catch (const bd::TruncationError& e)
    {
        return fail(exit_numeric, "truncation", e.what());
    }
    catch (const std::invalid_argument& e)
    {
        return fail(exit_config, "invalid_argument", e.what());
    }
    catch (const std::exception& e)
    {
        return fail(exit_numeric, "numeric", e.what());
    }
}
