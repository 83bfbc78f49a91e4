#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace advdiff {

/// Identifier of this build (git describe), recorded in every CSV header.
const char* build_id();

using CsvCell = std::variant<std::int64_t, double, std::string, bool>;

/// Comma-delimited, '.' decimal separator, LF line endings. Doubles are
/// written with std::to_chars shortest round-trip form, so identical runs
/// produce bit-identical files.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    /// "# k=v k=v ..." parameter line; the build id is appended.
    void params(const std::vector<std::pair<std::string, std::string>>& kv);
    void header(const std::vector<std::string>& cols);
    void row(const std::vector<CsvCell>& cells);

    static std::string format(double v);
    static std::string format(std::int64_t v);

private:
    std::ostream& os_;
};

} // namespace advdiff
