#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

namespace txpar {

namespace detail {
void parse_hex_into(std::string_view text, unsigned char* out, std::size_t bytes, const char* what);
std::string to_hex(const unsigned char* data, std::size_t bytes);
}  // namespace detail

/// Fixed-width binary identifier with a `0x`-prefixed lowercase hex text form.
template <std::size_t Bytes>
class HexId {
public:
    static constexpr std::size_t size = Bytes;

    constexpr HexId() = default;
    explicit constexpr HexId(const std::array<std::uint8_t, Bytes>& raw) : bytes_(raw) {}

    /// Accepts `0x` or `0X` followed by exactly 2*Bytes hex digits of either case.
    /// Throws std::invalid_argument otherwise.
    static HexId from_hex(std::string_view text) {
        HexId id;
        detail::parse_hex_into(text, id.bytes_.data(), Bytes, Bytes == 20 ? "address" : "hash");
        return id;
    }

    std::string hex() const { return detail::to_hex(bytes_.data(), Bytes); }

    const std::array<std::uint8_t, Bytes>& bytes() const noexcept { return bytes_; }

    friend constexpr auto operator<=>(const HexId&, const HexId&) = default;
    friend constexpr bool operator==(const HexId&, const HexId&) = default;

private:
    std::array<std::uint8_t, Bytes> bytes_{};
};

using Account = HexId<20>;
using TxHash = HexId<32>;

struct AccountHash {
    std::size_t operator()(const Account& a) const noexcept {
        // Addresses are hash outputs already; the leading bytes mix well enough.
        std::uint64_t head;
        std::uint32_t tail;
        std::memcpy(&head, a.bytes().data(), sizeof head);
        std::memcpy(&tail, a.bytes().data() + 16, sizeof tail);
        return static_cast<std::size_t>(head ^ (std::uint64_t{tail} * 0x9e3779b97f4a7c15ULL));
    }
};

}  // namespace txpar
