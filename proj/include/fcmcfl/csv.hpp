#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fcmcfl/studies.hpp"

namespace fcmcfl::csv {

/// Header plus rows of already formatted cells. No quoting: cells never
/// contain commas.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::size_t column(const std::string& name) const;
};

/// 17 significant digits, `.` separator regardless of locale.
[[nodiscard]] std::string format(double value);
[[nodiscard]] double parse_double(const std::string& cell);
[[nodiscard]] int parse_int(const std::string& cell);
[[nodiscard]] bool parse_bool(const std::string& cell);

void write(std::ostream& out, const Table& table);
/// Throws std::runtime_error on ragged rows or an empty stream.
[[nodiscard]] Table read(std::istream& in);

void write_file(const std::string& path, const Table& table);
[[nodiscard]] Table read_file(const std::string& path);

// Fixed schemas of the CLI outputs.
[[nodiscard]] Table to_table(const std::vector<studies::AnalyticRecord>& records);
[[nodiscard]] Table to_table(const std::vector<studies::SweepRecord>& records);
[[nodiscard]] Table to_table(const std::vector<studies::MinRatio>& records);
[[nodiscard]] Table to_table(const std::vector<studies::PlateRecord>& records);

[[nodiscard]] std::vector<studies::AnalyticRecord> analytic_records(const Table& table);
[[nodiscard]] std::vector<studies::SweepRecord> sweep_records(const Table& table);
[[nodiscard]] std::vector<studies::MinRatio> min_ratio_records(const Table& table);
[[nodiscard]] std::vector<studies::PlateRecord> plate_records(const Table& table);

}  // namespace fcmcfl::csv
