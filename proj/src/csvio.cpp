#include "weldcrack/csvio.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace weldcrack {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_csv_num(const std::string& tok) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (tok.empty() || end != begin + tok.size())
        throw std::invalid_argument("csv: '" + tok + "' is not a number");
    return v;
}

std::string render_csv(const CsvTable& table) {
    std::string out;
    const auto append_row = [&out](const std::vector<std::string>& row) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    };
    append_row(table.header);
    for (const auto& row : table.rows) append_row(row);
    return out;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open csv file '" + path + "'");
    CsvTable table;
    std::string line;
    const auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(s);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!s.empty() && s.back() == ',') cells.emplace_back();
        return cells;
    };
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            table.header = split(line);
            first = false;
            continue;
        }
        auto cells = split(line);
        if (cells.size() != table.header.size())
            throw std::runtime_error("csv row width mismatch in '" + path + "'");
        table.rows.push_back(std::move(cells));
    }
    if (first) throw std::runtime_error("csv file '" + path + "' is empty");
    return table;
}

void require_csv_header(const CsvTable& table, const std::vector<std::string>& expected,
                        const std::string& path) {
    if (table.header != expected) {
        std::string want, got;
        for (const auto& h : expected) want += h + ",";
        for (const auto& h : table.header) got += h + ",";
        throw std::runtime_error("csv header of '" + path + "' is [" + got + "] but should be [" +
                                 want + "]");
    }
}

void atomic_write_text(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("short write to '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace weldcrack
