#include "nlreg/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace nlreg {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    for (auto& f : out) {
        while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.erase(f.begin());
        while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.pop_back();
    }
    return out;
}

// Locale-independent double parse of a whole field.
double parse_double(const std::string& field, int line_no, int col_no) {
    if (field.empty()) throw ParseError("empty cell", line_no, col_no);
    const char* begin = field.c_str();
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(begin, &end);
    if (end != begin + field.size() || errno == ERANGE)
        throw ParseError("cannot parse '" + field + "' as a number", line_no, col_no);
    return v;
}

} // namespace

CsvTable parse_csv_text(const std::string& text, const std::string& origin) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') continue;
        std::vector<std::string> fields = split_fields(line);
        if (!have_header) {
            table.header = fields;
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size())
            throw ParseError(origin + ": expected " + std::to_string(table.header.size()) +
                                 " fields, found " + std::to_string(fields.size()),
                             line_no, 1);
        std::vector<double> row;
        row.reserve(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c)
            row.push_back(parse_double(fields[c], line_no, static_cast<int>(c) + 1));
        table.rows.push_back(std::move(row));
    }
    if (!have_header) throw IoError(origin + ": no header row");
    return table;
}

CsvTable read_csv_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv_text(buf.str(), path);
}

Dataset read_csv(const std::string& path) {
    CsvTable table = read_csv_table(path);
    if (table.rows.empty()) throw IoError(path + ": no observations");
    std::size_t cols = table.header.size();
    if (cols < 2) throw IoError(path + ": need at least one predictor column and y");
    Eigen::MatrixXd x(table.rows.size(), cols - 1);
    Eigen::VectorXd y(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        for (std::size_t c = 0; c + 1 < cols; ++c)
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                table.rows[i][c];
        y(static_cast<Eigen::Index>(i)) = table.rows[i][cols - 1];
    }
    return Dataset(std::move(x), std::move(y));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace nlreg
