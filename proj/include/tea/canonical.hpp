#pragma once

// Line-based canonical encoding shared by every signed record.
//
// A record encodes as one `name=value` line per declared field, in the
// field order fixed by the record type, each line terminated by LF.
// Nested records contribute their own lines under a dotted prefix
// (`offer_sig.signer=...`). Absent optional fields produce no line.

#include <concepts>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "tea/error.hpp"

namespace tea {

using Timestamp = std::int64_t; // UTC seconds
using Amount = std::int64_t;    // minor units

std::string hex_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> hex_decode(std::string_view hex); // throws decode_error
bool is_lower_hex(std::string_view text) noexcept;
bool is_valid_utf8(std::string_view text) noexcept;
bool is_token(std::string_view text) noexcept;

class CanonicalWriter {
public:
    CanonicalWriter& integer(std::string_view name, std::int64_t value);
    CanonicalWriter& unsigned_integer(std::string_view name, std::uint64_t value);
    CanonicalWriter& timestamp(std::string_view name, Timestamp value) { return integer(name, value); }
    CanonicalWriter& boolean(std::string_view name, bool value);
    /// Lowercase hex; anything else is an UnencodableValue.
    CanonicalWriter& hex(std::string_view name, std::string_view lower_hex);
    CanonicalWriter& bytes(std::string_view name, std::span<const std::uint8_t> value);
    /// Identifier: non-empty, [A-Za-z0-9._:@-] only.
    CanonicalWriter& token(std::string_view name, std::string_view value);
    /// Free UTF-8 text without control characters.
    CanonicalWriter& text(std::string_view name, std::string_view value);

    template <class T>
    CanonicalWriter& nested(std::string_view name, const T& record)
    {
        const auto saved = prefix_.size();
        prefix_.append(name).push_back('.');
        encode_fields(*this, record);
        prefix_.resize(saved);
        return *this;
    }

    const std::string& str() const& noexcept { return out_; }
    std::string str() && noexcept { return std::move(out_); }

private:
    void line(std::string_view name, std::string_view value);

    std::string out_;
    std::string prefix_;
};

class CanonicalReader {
public:
    explicit CanonicalReader(std::string_view bytes);

    std::int64_t integer(std::string_view name);
    std::uint64_t unsigned_integer(std::string_view name);
    Timestamp timestamp(std::string_view name) { return integer(name); }
    bool boolean(std::string_view name);
    std::string hex(std::string_view name);
    std::vector<std::uint8_t> bytes(std::string_view name);
    std::string token(std::string_view name);
    std::string text(std::string_view name);

    /// True when the next unread line carries `name` (under the current prefix).
    bool has(std::string_view name) const;
    /// True when the next unread line lives under `name.`.
    bool has_nested(std::string_view name) const;

    template <class T>
    T nested(std::string_view name)
    {
        const auto saved = prefix_.size();
        prefix_.append(name).push_back('.');
        T value = decode_fields(*this, std::type_identity<T>{});
        prefix_.resize(saved);
        return value;
    }

    bool at_end() const noexcept { return pos_ == lines_.size(); }
    void expect_end() const;

private:
    std::string_view take(std::string_view name);

    std::vector<std::pair<std::string, std::string>> lines_;
    std::size_t pos_ = 0;
    std::string prefix_;
};

template <class T>
concept CanonicalRecord = requires(CanonicalWriter& w, const T& r) { encode_fields(w, r); };

template <class T>
concept DecodableRecord = requires(CanonicalReader& r) {
    { decode_fields(r, std::type_identity<T>{}) } -> std::same_as<T>;
};

template <CanonicalRecord T>
std::string canonical_encode(const T& record)
{
    CanonicalWriter writer;
    encode_fields(writer, record);
    return std::move(writer).str();
}

template <DecodableRecord T>
T canonical_decode(std::string_view bytes)
{
    CanonicalReader reader(bytes);
    T value = decode_fields(reader, std::type_identity<T>{});
    reader.expect_end();
    return value;
}

} // namespace tea
