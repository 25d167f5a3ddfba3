#ifndef NLREG_CSV_HPP
#define NLREG_CSV_HPP

#include <string>
#include <vector>

#include "nlreg/core.hpp"

namespace nlreg {

/// Header + numeric rows. Lines starting with '#' are skipped (boundary-grid
/// files carry a JSON metadata line that way). Accepts LF and CRLF.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

CsvTable read_csv_table(const std::string& path);
CsvTable parse_csv_text(const std::string& text, const std::string& origin);

/// Last column is y, the rest are predictors. Throws IoError when no data
/// rows or no predictor columns are present.
Dataset read_csv(const std::string& path);

/// Doubles printed with %.17g so a write/read round trip is exact.
std::string format_double(double v);

} // namespace nlreg

#endif
