#ifndef CHEMOSTAT_IO_HPP
#define CHEMOSTAT_IO_HPP

#include <string>
#include <vector>

#include "chemostat/criteria.hpp"

namespace chemostat {

/// One output table: named columns of equal length. Values are rendered at
/// full double precision (17 significant digits) so round-trips are exact.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data; // data[i] is column i

    void require_consistent() const;
};

/// Full-precision rendering of one double (%.17g).
std::string format_double(double v);

std::string to_csv(const Table& table);
std::string to_json(const Table& table);

/// CriterionReport as a JSON document (criterion, verdict, margin, eta, T,
/// windows[], averages, notes).
std::string report_to_json(const CriterionReport& report);

/// Write text to path atomically: a temp file in the same directory,
/// fsync'd, then renamed over the target.
void write_file_atomic(const std::string& path, const std::string& text);

} // namespace chemostat

#endif
