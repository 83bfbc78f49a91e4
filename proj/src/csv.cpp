#include "advdiff/csv.hpp"

#include <charconv>

namespace advdiff {

#ifndef ADVDIFF_BUILD_ID
#define ADVDIFF_BUILD_ID "unknown"
#endif

const char* build_id() { return ADVDIFF_BUILD_ID; }

std::string CsvWriter::format(double v) {
    char buf[40];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

std::string CsvWriter::format(std::int64_t v) {
    char buf[24];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

void CsvWriter::params(
    const std::vector<std::pair<std::string, std::string>>& kv) {
    os_ << "#";
    for (const auto& [k, v] : kv) os_ << " " << k << "=" << v;
    os_ << " build=" << build_id() << "\n";
}

void CsvWriter::header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i)
        os_ << (i ? "," : "") << cols[i];
    os_ << "\n";
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os_ << ",";
        std::visit(
            [&](const auto& c) {
                using T = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<T, double>)
                    os_ << format(c);
                else if constexpr (std::is_same_v<T, std::int64_t>)
                    os_ << format(c);
                else if constexpr (std::is_same_v<T, bool>)
                    os_ << (c ? "1" : "0");
                else
                    os_ << c;
            },
            cells[i]);
    }
    os_ << "\n";
}

} // namespace advdiff
