#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "itolab/errors.hpp"

namespace itolab {

/// binary64 printed with 17 significant digits round-trips exactly.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Minimal CSV emitter: fixed header, rows of doubles/integers/strings,
/// deterministic byte output.
class CsvWriter {
public:
    CsvWriter(const std::string& filename, const std::vector<std::string>& header)
        : out_(filename, std::ios::binary) {
        if (!out_) throw io_failure("cannot open " + filename + " for writing");
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out_ << ',';
            out_ << header[i];
        }
        out_ << '\n';
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace itolab
