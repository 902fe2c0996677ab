#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace trionlab::cli {

inline constexpr const char* version = "1.0.0";

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> notes;  ///< extra "# note:" header lines
};

/// 10 significant digits, "nan"/"inf" for non-finite values.
std::string format_number(double value);

std::string render_csv(const Table& table, const std::vector<std::string>& meta);
std::string render_json(const Table& table, const std::vector<std::string>& meta);

/// Parses "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> parse_config_file(const std::string& text);

/// Runs one command line (args excludes the program name). Exit codes: 0 success,
/// 1 invalid physical input or failed computation, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::map<std::string, std::string>& environment);

} // namespace trionlab::cli
