#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace boson_decay {

enum class OutputFormat
{
    csv,
    json
};

OutputFormat parse_output_format(std::string_view tag);
std::string_view to_string(OutputFormat format);

struct RunReport
{
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();

    void add_row(std::vector<double> row);
    /// Values of one named column; throws std::out_of_range for unknown names.
    std::vector<double> column(std::string_view name) const;
};

void write_csv(std::ostream& out, const RunReport& report);
/// Rows and header only; meta stays empty.
RunReport read_csv(std::istream& in);

nlohmann::ordered_json to_json(const RunReport& report);
RunReport from_json(const nlohmann::ordered_json& doc);

std::string to_csv_string(const RunReport& report);

/// Writes `path` in the given format. CSV output also writes the metadata to
/// `<path>.meta.json`. Throws std::ios_base::failure when a file cannot be written.
void emit_report(const RunReport& report, OutputFormat format, const std::filesystem::path& path);

}  // namespace boson_decay
