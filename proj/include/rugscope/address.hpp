#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace rugscope {

/// 20-byte account or contract identifier. Always rendered as 0x + 40 lowercase hex digits.
class Address {
public:
    using Bytes = std::array<std::uint8_t, 20>;

    constexpr Address() = default;
    explicit constexpr Address(const Bytes& bytes) : bytes_(bytes) {}

    /// Accepts upper, lower or mixed case hex; anything but exactly 40 digits after 0x is rejected.
    static std::optional<Address> parse(std::string_view text);
    /// Throws Error(InvalidArgument) where parse() would return nullopt.
    static Address from_hex(std::string_view text);

    std::string to_string() const;
    const Bytes& bytes() const noexcept { return bytes_; }

    bool is_null() const noexcept;
    /// Null address or the conventional 0x...dEaD burn sink.
    bool is_burn_sink() const noexcept;

    static const Address& null();
    static const Address& dead();

    friend auto operator<=>(const Address&, const Address&) = default;

private:
    Bytes bytes_{};
};

struct AddressHash {
    std::size_t operator()(const Address& a) const noexcept;
};

}  // namespace rugscope

template <>
struct std::hash<rugscope::Address> : rugscope::AddressHash {};
