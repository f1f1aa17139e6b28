#pragma once

#include <string>
#include <vector>

namespace weldcrack {

// ============================================================================
// CSV interchange and atomic file output
// ============================================================================
//
// Every pipeline stage talks to the next through plain CSV so each stage can
// be checked in isolation.  Numbers are serialized with 17 significant
// digits, which round-trips IEEE doubles exactly, and files are written to a
// temporary sibling and renamed into place so readers never observe a torn
// file and an interrupted run leaves no half-written outputs behind.

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// Double -> shortest-faithful decimal (17 significant digits).
std::string format_g17(double v);

// Strict string -> double; throws std::invalid_argument on trailing junk.
double parse_csv_num(const std::string& tok);

std::string render_csv(const CsvTable& table);

// Parses a CSV file; throws with the path when it cannot be opened and when
// a row's cell count disagrees with the header.
CsvTable read_csv_file(const std::string& path);

// Requires the table read from `path` to carry exactly this header.
void require_csv_header(const CsvTable& table, const std::vector<std::string>& expected,
                        const std::string& path);

// Writes content to `path` atomically (temp file + rename, same directory).
void atomic_write_text(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);  // throws with the path

}  // namespace weldcrack
