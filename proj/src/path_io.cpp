#include "itolab/path_io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "itolab/csv.hpp"

namespace itolab {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    cells.push_back(cur);
    return cells;
}

void write_path_csv(const CadlagPath& path, std::ostream& out) {
    const std::size_t d = path.dim();
    out << "t";
    for (std::size_t c = 1; c <= d; ++c) out << ",x_" << c;
    for (std::size_t c = 1; c <= d; ++c) out << ",jump_" << c;
    out << '\n';
    for (std::size_t k = 0; k < path.nodes(); ++k) {
        out << format_g17(path.grid().node(k));
        for (std::size_t c = 0; c < d; ++c) out << ',' << format_g17(path.value(k, c));
        for (std::size_t c = 0; c < d; ++c) out << ',' << format_g17(path.jump(k, c));
        out << '\n';
    }
}

void write_path_csv(const CadlagPath& path, const std::string& filename) {
    std::ofstream out(filename, std::ios::binary);
    if (!out) throw io_failure("cannot open " + filename + " for writing");
    write_path_csv(path, out);
}

CadlagPath read_path_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw io_failure("path csv: empty input");
    const auto header = split_csv_line(line);
    if (header.size() < 3 || header.size() % 2 == 0 || header[0] != "t") {
        throw io_failure("path csv: malformed header");
    }
    const std::size_t d = (header.size() - 1) / 2;

    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> jumps;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 1 + 2 * d) throw io_failure("path csv: ragged row");
        times.push_back(std::strtod(cells[0].c_str(), nullptr));
        for (std::size_t c = 0; c < d; ++c) {
            values.push_back(std::strtod(cells[1 + c].c_str(), nullptr));
        }
        for (std::size_t c = 0; c < d; ++c) {
            jumps.push_back(std::strtod(cells[1 + d + c].c_str(), nullptr));
        }
    }
    if (times.size() < 2) throw io_failure("path csv: need at least 2 rows");

    TimeGrid grid(times.back(), times.size());
    const double tol = 1e-9 * std::max(1.0, grid.horizon());
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (std::abs(times[k] - grid.node(k)) > tol) {
            throw io_failure("path csv: non-uniform time column");
        }
    }

    CadlagPath path(grid, d);
    std::vector<double> buf(d);
    for (std::size_t k = 0; k < times.size(); ++k) {
        for (std::size_t c = 0; c < d; ++c) path.set_value(k, values[k * d + c], c);
        bool nonzero = false;
        for (std::size_t c = 0; c < d; ++c) {
            buf[c] = jumps[k * d + c];
            if (buf[c] != 0.0) nonzero = true;
        }
        if (nonzero) path.set_jump(k, buf);
    }
    path.validate();
    return path;
}

CadlagPath read_path_csv(const std::string& filename) {
    std::ifstream in(filename, std::ios::binary);
    if (!in) throw io_failure("cannot open " + filename + " for reading");
    return read_path_csv(in);
}

}  // namespace itolab
