#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace zeno {

/// Comma-separated output with one header line and 17 significant digits.
/// Empty cells are written for NaN entries.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);
    void close();

private:
    std::string path_;
    std::ofstream out_;
    std::size_t columns_;
};

std::string format_number(double x);

}  // namespace zeno
