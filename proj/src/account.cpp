#include "txpar/account.hpp"

#include <stdexcept>

namespace txpar::detail {

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

void parse_hex_into(std::string_view text, unsigned char* out, std::size_t bytes, const char* what) {
    if (text.size() < 2 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X')) {
        throw std::invalid_argument(std::string(what) + " must start with 0x");
    }
    text.remove_prefix(2);
    if (text.size() != 2 * bytes) {
        throw std::invalid_argument(std::string("invalid hex length for ") + what + ": expected " +
                                    std::to_string(2 * bytes) + " digits, got " +
                                    std::to_string(text.size()));
    }
    for (std::size_t i = 0; i < bytes; ++i) {
        const int hi = hex_value(text[2 * i]);
        const int lo = hex_value(text[2 * i + 1]);
        if (hi < 0 || lo < 0) {
            throw std::invalid_argument(std::string("invalid hex digit in ") + what);
        }
        out[i] = static_cast<unsigned char>(hi << 4 | lo);
    }
}

std::string to_hex(const unsigned char* data, std::size_t bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s(2 + 2 * bytes, '0');
    s[1] = 'x';
    for (std::size_t i = 0; i < bytes; ++i) {
        s[2 + 2 * i] = digits[data[i] >> 4];
        s[3 + 2 * i] = digits[data[i] & 0x0f];
    }
    return s;
}

}  // namespace txpar::detail
