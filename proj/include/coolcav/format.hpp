// Locale-independent number formatting for CSV and reports.

#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace coolcav {

// 17 significant digits, general format, '.' decimal point regardless of
// locale. Round-trips every double exactly.
inline std::string format_g17(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v,
                             std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

}  // namespace coolcav
