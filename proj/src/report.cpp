#include "boson_decay/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "boson_decay/format.hpp"

namespace boson_decay {

std::string format_double(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text)
{
    if (text == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    if (text == "inf")
        return std::numeric_limits<double>::infinity();
    if (text == "-inf")
        return -std::numeric_limits<double>::infinity();
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty())
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    return value;
}

OutputFormat parse_output_format(std::string_view tag)
{
    if (tag == "csv")
        return OutputFormat::csv;
    if (tag == "json")
        return OutputFormat::json;
    throw std::invalid_argument("unknown output format '" + std::string(tag) +
                                "' (expected csv or json)");
}

std::string_view to_string(OutputFormat format)
{
    return format == OutputFormat::csv ? "csv" : "json";
}

void RunReport::add_row(std::vector<double> row)
{
    if (row.size() != columns.size())
        throw std::logic_error("report row has " + std::to_string(row.size()) + " values for " +
                               std::to_string(columns.size()) + " columns");
    rows.push_back(std::move(row));
}

std::vector<double> RunReport::column(std::string_view name) const
{
    for (std::size_t c = 0; c < columns.size(); ++c)
    {
        if (columns[c] != name)
            continue;
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& row : rows)
            out.push_back(row[c]);
        return out;
    }
    throw std::out_of_range("no column '" + std::string(name) + "'");
}

void write_csv(std::ostream& out, const RunReport& report)
{
    for (std::size_t c = 0; c < report.columns.size(); ++c)
        out << (c ? "," : "") << report.columns[c];
    out << '\n';
    for (const auto& row : report.rows)
    {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << format_double(row[c]);
        out << '\n';
    }
}

namespace {

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true)
    {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

nlohmann::ordered_json number_to_json(double v)
{
    if (std::isfinite(v))
        return v;
    return format_double(v);
}

double number_from_json(const nlohmann::ordered_json& v)
{
    if (v.is_number())
        return v.get<double>();
    if (v.is_string())
        return parse_double(v.get<std::string>());
    throw std::invalid_argument("report value is neither a number nor a string");
}

}  // namespace

RunReport read_csv(std::istream& in)
{
    RunReport report;
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("CSV has no header");
    for (auto name : split(line))
        report.columns.emplace_back(name);
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        const auto fields = split(line);
        if (fields.size() != report.columns.size())
            throw std::invalid_argument("CSV row width does not match header");
        std::vector<double> row;
        row.reserve(fields.size());
        for (auto f : fields)
            row.push_back(parse_double(f));
        report.rows.push_back(std::move(row));
    }
    return report;
}

nlohmann::ordered_json to_json(const RunReport& report)
{
    nlohmann::ordered_json doc;
    doc["columns"] = report.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : report.rows)
    {
        nlohmann::ordered_json rec = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c)
            rec[report.columns[c]] = number_to_json(row[c]);
        rows.push_back(std::move(rec));
    }
    doc["rows"] = std::move(rows);
    doc["meta"] = report.meta;
    return doc;
}

RunReport from_json(const nlohmann::ordered_json& doc)
{
    RunReport report;
    report.columns = doc.at("columns").get<std::vector<std::string>>();
    for (const auto& rec : doc.at("rows"))
    {
        std::vector<double> row;
        row.reserve(report.columns.size());
        for (const auto& name : report.columns)
            row.push_back(number_from_json(rec.at(name)));
        report.rows.push_back(std::move(row));
    }
    if (doc.contains("meta"))
        report.meta = doc.at("meta");
    return report;
}

std::string to_csv_string(const RunReport& report)
{
    std::ostringstream out;
    write_csv(out, report);
    return out.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::ios_base::failure("cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out)
        throw std::ios_base::failure("write to '" + path.string() + "' failed");
}

}  // namespace

void emit_report(const RunReport& report, OutputFormat format, const std::filesystem::path& path)
{
    if (format == OutputFormat::json)
    {
        write_file(path, to_json(report).dump(2) + "\n");
        return;
    }
    write_file(path, to_csv_string(report));
    auto sidecar = path;
    sidecar += ".meta.json";
    write_file(sidecar, report.meta.dump(2) + "\n");
}

}  // namespace boson_decay
