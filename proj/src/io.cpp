#include "chemostat/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace chemostat {

void Table::require_consistent() const {
    if (columns.size() != data.size())
        throw std::invalid_argument("table: column name/data count mismatch");
    for (const auto& col : data)
        if (col.size() != data.front().size())
            throw std::invalid_argument("table: ragged columns");
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv(const Table& table) {
    table.require_consistent();
    std::ostringstream out;
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << table.columns[i];
    out << '\n';
    const std::size_t rows = table.data.empty() ? 0 : table.data.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < table.data.size(); ++i)
            out << (i ? "," : "") << format_double(table.data[i][r]);
        out << '\n';
    }
    return out.str();
}

std::string to_json(const Table& table) {
    table.require_consistent();
    nlohmann::ordered_json doc;
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        doc[table.columns[i]] = table.data[i];
    return doc.dump(2) + "\n";
}

std::string report_to_json(const CriterionReport& report) {
    nlohmann::ordered_json doc;
    doc["criterion"] = report.criterion;
    doc["verdict"] = verdict_name(report.verdict);
    doc["margin"] = report.margin;
    doc["eta"] = report.eta;
    doc["T"] = report.T;
    doc["averages"] = {{"pzphi", report.avg_pzphi}, {"D", report.avg_D}};
    doc["windows_sampled"] = report.windows_sampled;
    auto& windows = doc["windows"] = nlohmann::ordered_json::array();
    for (const auto& w : report.windows)
        windows.push_back(
            {{"t1", w.t1}, {"t2", w.t2}, {"lhs", w.lhs}, {"rhs", w.rhs}});
    doc["notes"] = report.notes;
    return doc.dump(2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out << text;
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

} // namespace chemostat
