#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <system_error>

namespace kirchhoff::io {

/// Locale-independent, 17 significant digits (round-trip exact for binary64).
[[nodiscard]] inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::general, 17);
    if (res.ec != std::errc{}) return "nan";
    return std::string(buf.data(), res.ptr);
}

/// Writes comma-separated rows with a header line.
class CsvWriter {
public:
    CsvWriter(const std::string& path, std::initializer_list<const char*> header)
        : out_(path, std::ios::out | std::ios::trunc) {
        if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
        bool first = true;
        for (const char* h : header) {
            if (!first) out_ << ',';
            out_ << h;
            first = false;
        }
        out_ << '\n';
    }

    CsvWriter& field(double v) { return raw(format_double(v)); }
    CsvWriter& field(std::size_t v) { return raw(std::to_string(v)); }
    CsvWriter& empty() { return raw(""); }

    void end_row() {
        out_ << '\n';
        first_ = true;
    }

    [[nodiscard]] bool good() const { return static_cast<bool>(out_); }

private:
    CsvWriter& raw(const std::string& s) {
        if (!first_) out_ << ',';
        out_ << s;
        first_ = false;
        return *this;
    }

    std::ofstream out_;
    bool first_ = true;
};

} // namespace kirchhoff::io
