#include "zeno/csv.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace zeno {

std::string format_number(double x) {
    std::ostringstream s;
    s.precision(17);
    s << x;
    return s.str();
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path), out_(path), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_) throw std::logic_error("CsvWriter: row width does not match header in " + path_);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << ',';
        if (!std::isnan(values[i])) out_ << format_number(values[i]);
    }
    out_ << '\n';
}

void CsvWriter::close() {
    out_.close();
    if (!out_) throw std::runtime_error("error while writing '" + path_ + "'");
}

}  // namespace zeno
