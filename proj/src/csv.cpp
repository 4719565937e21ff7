#include "fcmcfl/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace fcmcfl::csv {

namespace {

const std::vector<std::string> analytic_header{"d", "chi", "alpha", "M", "K", "lambda", "dt_crit"};
const std::vector<std::string> sweep_header{"d", "p", "alpha", "chi", "lambda_max", "dt_crit"};
const std::vector<std::string> ratio_header{"d", "p", "alpha", "dt_min", "dt_full_c", "ratio"};
const std::vector<std::string> plate_header{"config", "dx",        "dy",        "p",         "k",          "dt_element",
                                            "dt_global", "dt_full_c", "dt_full_l", "dt_cfl_fc", "element_ok", "global_ok"};

void expect_header(const Table& table, const std::vector<std::string>& header) {
    if (table.header != header) throw std::runtime_error("csv: unexpected header");
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) return cells;
        start = comma + 1;
    }
}

}  // namespace

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::out_of_range("csv: no column '" + name + "'");
}

std::string format(double value) {
    char buffer[64];
    // to_chars ignores the C locale, unlike printf.
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
    if (ec != std::errc{}) throw std::runtime_error("csv: cannot format value");
    return std::string(buffer, end);
}

double parse_double(const std::string& cell) {
    double value = 0.0;
    const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || end != cell.data() + cell.size())
        throw std::runtime_error("csv: not a number: '" + cell + "'");
    return value;
}

int parse_int(const std::string& cell) {
    int value = 0;
    const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || end != cell.data() + cell.size())
        throw std::runtime_error("csv: not an integer: '" + cell + "'");
    return value;
}

bool parse_bool(const std::string& cell) {
    if (cell == "1" || cell == "true") return true;
    if (cell == "0" || cell == "false") return false;
    throw std::runtime_error("csv: not a boolean: '" + cell + "'");
}

void write(std::ostream& out, const Table& table) {
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ',';
            out << cells[i];
        }
        out << '\n';
    };
    line(table.header);
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) throw std::runtime_error("csv: row width differs from header");
        line(row);
    }
}

Table read(std::istream& in) {
    Table table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    table.header = split(line);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != table.header.size())
            throw std::runtime_error("csv: row " + std::to_string(table.rows.size() + 1) + " has wrong width");
        table.rows.push_back(std::move(cells));
    }
    return table;
}

void write_file(const std::string& path, const Table& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write(out, table);
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

Table read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read(in);
}

Table to_table(const std::vector<studies::AnalyticRecord>& records) {
    Table t{analytic_header, {}};
    t.rows.reserve(records.size());
    for (const auto& r : records)
        t.rows.push_back({std::to_string(r.dim), format(r.chi), format(r.alpha), format(r.mass), format(r.stiffness),
                          format(r.lambda), format(r.dt_crit)});
    return t;
}

Table to_table(const std::vector<studies::SweepRecord>& records) {
    Table t{sweep_header, {}};
    t.rows.reserve(records.size());
    for (const auto& r : records)
        t.rows.push_back({std::to_string(r.dim), std::to_string(r.degree), format(r.alpha), format(r.chi),
                          format(r.lambda_max), format(r.dt_crit)});
    return t;
}

Table to_table(const std::vector<studies::MinRatio>& records) {
    Table t{ratio_header, {}};
    t.rows.reserve(records.size());
    for (const auto& r : records)
        t.rows.push_back({std::to_string(r.dim), std::to_string(r.degree), format(r.alpha), format(r.dt_min),
                          format(r.dt_full_c), format(r.ratio)});
    return t;
}

Table to_table(const std::vector<studies::PlateRecord>& records) {
    Table t{plate_header, {}};
    t.rows.reserve(records.size());
    for (const auto& r : records)
        t.rows.push_back({std::to_string(r.config), format(r.shift_x), format(r.shift_y), std::to_string(r.degree),
                          std::to_string(r.depth), format(r.dt_element), format(r.dt_global), format(r.dt_full_c),
                          format(r.dt_full_l), format(r.dt_cfl_fc), r.element_ok ? "1" : "0",
                          r.global_ok ? "1" : "0"});
    return t;
}

std::vector<studies::AnalyticRecord> analytic_records(const Table& table) {
    expect_header(table, analytic_header);
    std::vector<studies::AnalyticRecord> out;
    for (const auto& c : table.rows)
        out.push_back({parse_int(c[0]), parse_double(c[1]), parse_double(c[2]), parse_double(c[3]),
                       parse_double(c[4]), parse_double(c[5]), parse_double(c[6])});
    return out;
}

std::vector<studies::SweepRecord> sweep_records(const Table& table) {
    expect_header(table, sweep_header);
    std::vector<studies::SweepRecord> out;
    for (const auto& c : table.rows)
        out.push_back({parse_int(c[0]), parse_int(c[1]), parse_double(c[2]), parse_double(c[3]), parse_double(c[4]),
                       parse_double(c[5])});
    return out;
}

std::vector<studies::MinRatio> min_ratio_records(const Table& table) {
    expect_header(table, ratio_header);
    std::vector<studies::MinRatio> out;
    for (const auto& c : table.rows) {
        studies::MinRatio r;
        r.dim = parse_int(c[0]);
        r.degree = parse_int(c[1]);
        r.alpha = parse_double(c[2]);
        r.dt_min = parse_double(c[3]);
        r.dt_full_c = parse_double(c[4]);
        r.ratio = parse_double(c[5]);
        out.push_back(r);
    }
    return out;
}

std::vector<studies::PlateRecord> plate_records(const Table& table) {
    expect_header(table, plate_header);
    std::vector<studies::PlateRecord> out;
    for (const auto& c : table.rows) {
        studies::PlateRecord r;
        r.config = parse_int(c[0]);
        r.shift_x = parse_double(c[1]);
        r.shift_y = parse_double(c[2]);
        r.degree = parse_int(c[3]);
        r.depth = parse_int(c[4]);
        r.dt_element = parse_double(c[5]);
        r.dt_global = parse_double(c[6]);
        r.dt_full_c = parse_double(c[7]);
        r.dt_full_l = parse_double(c[8]);
        r.dt_cfl_fc = parse_double(c[9]);
        r.element_ok = parse_bool(c[10]);
        r.global_ok = parse_bool(c[11]);
        out.push_back(r);
    }
    return out;
}

}  // namespace fcmcfl::csv
