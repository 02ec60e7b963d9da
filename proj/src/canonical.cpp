#include "tea/canonical.hpp"

#include <charconv>

namespace tea {

namespace {

constexpr char hex_digits[] = "0123456789abcdef";

bool is_field_name(std::string_view name) noexcept
{
    if (name.empty()) return false;
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
        if (!ok) return false;
    }
    return true;
}

bool is_canonical_decimal(std::string_view text, bool allow_sign) noexcept
{
    if (text.empty()) return false;
    if (text.front() == '-') {
        if (!allow_sign) return false;
        text.remove_prefix(1);
        if (text == "0") return false; // "-0"
    }
    if (text.empty()) return false;
    if (text.size() > 1 && text.front() == '0') return false;
    for (char c : text)
        if (c < '0' || c > '9') return false;
    return true;
}

bool has_control_chars(std::string_view text) noexcept
{
    for (unsigned char c : text)
        if (c < 0x20 || c == 0x7f) return true;
    return false;
}

} // namespace

std::string hex_encode(std::span<const std::uint8_t> bytes)
{
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(hex_digits[b >> 4]);
        out.push_back(hex_digits[b & 0x0f]);
    }
    return out;
}

std::vector<std::uint8_t> hex_decode(std::string_view hex)
{
    if (hex.size() % 2 != 0 || !is_lower_hex(hex)) fail(Errc::decode_error, "not lowercase hex");
    auto nibble = [](char c) -> std::uint8_t {
        return static_cast<std::uint8_t>(c <= '9' ? c - '0' : c - 'a' + 10);
    };
    std::vector<std::uint8_t> out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
    return out;
}

bool is_lower_hex(std::string_view text) noexcept
{
    for (char c : text)
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
    return true;
}

bool is_valid_utf8(std::string_view text) noexcept
{
    std::size_t i = 0;
    while (i < text.size()) {
        const auto c = static_cast<unsigned char>(text[i]);
        std::size_t len = 0;
        std::uint32_t cp = 0;
        if (c < 0x80) { ++i; continue; }
        if ((c & 0xe0) == 0xc0) { len = 2; cp = c & 0x1f; }
        else if ((c & 0xf0) == 0xe0) { len = 3; cp = c & 0x0f; }
        else if ((c & 0xf8) == 0xf0) { len = 4; cp = c & 0x07; }
        else return false;
        if (i + len > text.size()) return false;
        for (std::size_t k = 1; k < len; ++k) {
            const auto cc = static_cast<unsigned char>(text[i + k]);
            if ((cc & 0xc0) != 0x80) return false;
            cp = (cp << 6) | (cc & 0x3f);
        }
        // overlong forms, surrogates, out of range
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000)) return false;
        if (cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) return false;
        i += len;
    }
    return true;
}

bool is_token(std::string_view text) noexcept
{
    if (text.empty()) return false;
    for (char c : text) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                        c == '.' || c == '_' || c == ':' || c == '@' || c == '-';
        if (!ok) return false;
    }
    return true;
}

// --- writer ----------------------------------------------------------------

void CanonicalWriter::line(std::string_view name, std::string_view value)
{
    if (!is_field_name(name)) fail(Errc::unencodable_value, "bad field name '" + std::string(name) + "'");
    out_.append(prefix_).append(name).push_back('=');
    out_.append(value).push_back('\n');
}

CanonicalWriter& CanonicalWriter::integer(std::string_view name, std::int64_t value)
{
    line(name, std::to_string(value));
    return *this;
}

CanonicalWriter& CanonicalWriter::unsigned_integer(std::string_view name, std::uint64_t value)
{
    line(name, std::to_string(value));
    return *this;
}

CanonicalWriter& CanonicalWriter::boolean(std::string_view name, bool value)
{
    line(name, value ? "true" : "false");
    return *this;
}

CanonicalWriter& CanonicalWriter::hex(std::string_view name, std::string_view lower_hex)
{
    if (!is_lower_hex(lower_hex) || lower_hex.size() % 2 != 0)
        fail(Errc::unencodable_value, "field '" + std::string(name) + "' is not lowercase hex");
    line(name, lower_hex);
    return *this;
}

CanonicalWriter& CanonicalWriter::bytes(std::string_view name, std::span<const std::uint8_t> value)
{
    line(name, hex_encode(value));
    return *this;
}

CanonicalWriter& CanonicalWriter::token(std::string_view name, std::string_view value)
{
    if (!is_token(value)) fail(Errc::unencodable_value, "field '" + std::string(name) + "' is not an identifier");
    line(name, value);
    return *this;
}

CanonicalWriter& CanonicalWriter::text(std::string_view name, std::string_view value)
{
    if (!is_valid_utf8(value) || has_control_chars(value))
        fail(Errc::unencodable_value, "field '" + std::string(name) + "' is not single-line UTF-8 text");
    line(name, value);
    return *this;
}

// --- reader ----------------------------------------------------------------

CanonicalReader::CanonicalReader(std::string_view bytes)
{
    if (!bytes.empty() && bytes.back() != '\n') fail(Errc::decode_error, "record not LF-terminated");
    std::size_t start = 0;
    while (start < bytes.size()) {
        const auto end = bytes.find('\n', start);
        const auto raw = bytes.substr(start, end - start);
        const auto eq = raw.find('=');
        if (eq == std::string_view::npos) fail(Errc::decode_error, "line without '='");
        const auto name = raw.substr(0, eq);
        if (!is_field_name(name)) fail(Errc::decode_error, "bad field name");
        lines_.emplace_back(std::string(name), std::string(raw.substr(eq + 1)));
        start = end + 1;
    }
}

std::string_view CanonicalReader::take(std::string_view name)
{
    const std::string full = prefix_ + std::string(name);
    if (pos_ >= lines_.size()) fail(Errc::decode_error, "missing field '" + full + "'");
    const auto& [key, value] = lines_[pos_];
    if (key != full) fail(Errc::decode_error, "expected field '" + full + "', found '" + key + "'");
    ++pos_;
    return value;
}

bool CanonicalReader::has(std::string_view name) const
{
    return pos_ < lines_.size() && lines_[pos_].first == prefix_ + std::string(name);
}

bool CanonicalReader::has_nested(std::string_view name) const
{
    const std::string p = prefix_ + std::string(name) + ".";
    return pos_ < lines_.size() && lines_[pos_].first.starts_with(p);
}

std::int64_t CanonicalReader::integer(std::string_view name)
{
    const auto text = take(name);
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (!is_canonical_decimal(text, true) || ec != std::errc{} || ptr != text.data() + text.size())
        fail(Errc::decode_error, "field '" + std::string(name) + "' is not a canonical integer");
    return value;
}

std::uint64_t CanonicalReader::unsigned_integer(std::string_view name)
{
    const auto text = take(name);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (!is_canonical_decimal(text, false) || ec != std::errc{} || ptr != text.data() + text.size())
        fail(Errc::decode_error, "field '" + std::string(name) + "' is not a canonical unsigned integer");
    return value;
}

bool CanonicalReader::boolean(std::string_view name)
{
    const auto text = take(name);
    if (text == "true") return true;
    if (text == "false") return false;
    fail(Errc::decode_error, "field '" + std::string(name) + "' is not a boolean");
}

std::string CanonicalReader::hex(std::string_view name)
{
    const auto text = take(name);
    if (!is_lower_hex(text) || text.size() % 2 != 0)
        fail(Errc::decode_error, "field '" + std::string(name) + "' is not lowercase hex");
    return std::string(text);
}

std::vector<std::uint8_t> CanonicalReader::bytes(std::string_view name)
{
    return hex_decode(hex(name));
}

std::string CanonicalReader::token(std::string_view name)
{
    const auto text = take(name);
    if (!is_token(text)) fail(Errc::decode_error, "field '" + std::string(name) + "' is not an identifier");
    return std::string(text);
}

std::string CanonicalReader::text(std::string_view name)
{
    const auto value = take(name);
    if (!is_valid_utf8(value) || has_control_chars(value))
        fail(Errc::decode_error, "field '" + std::string(name) + "' is not single-line UTF-8 text");
    return std::string(value);
}

void CanonicalReader::expect_end() const
{
    if (!at_end()) fail(Errc::decode_error, "unexpected trailing field '" + lines_[pos_].first + "'");
}

} // namespace tea
