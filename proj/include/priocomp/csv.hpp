#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

namespace priocomp {

/// Compact decimal form, stable across runs for identical values.
inline std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return std::string(buf);
}

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::string& header) : out_(path) {
        if (!out_) throw std::runtime_error("csv: cannot open '" + path.string() + "' for write");
        out_ << header << "\n";
    }

    void row(const std::string& line) { out_ << line << "\n"; }

    ~CsvWriter() = default;

  private:
    std::ofstream out_;
};

}  // namespace priocomp
