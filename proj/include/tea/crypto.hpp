#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tea/canonical.hpp"

namespace tea {

using Bytes = std::vector<std::uint8_t>;
/// Lowercase hex digest of a public key; doubles as the agent id.
using KeyId = std::string;

/// SHA-256 content digest.
struct Digest {
    std::array<std::uint8_t, 32> bytes{};

    static Digest zero() noexcept { return {}; }
    static Digest of(std::string_view data);
    static Digest of(std::span<const std::uint8_t> data);
    static Digest from_hex(std::string_view hex);

    std::string hex() const { return hex_encode(bytes); }
    bool is_zero() const noexcept { return *this == Digest{}; }

    friend auto operator<=>(const Digest&, const Digest&) = default;
};

KeyId key_id_of(std::span<const std::uint8_t> public_key);

struct KeyPair {
    Bytes public_key;
    Bytes secret_key;
    KeyId key_id;
};

struct Signature {
    KeyId signer;
    Bytes public_key;
    Bytes sig_bytes;
    Digest signed_digest;

    friend bool operator==(const Signature&, const Signature&) = default;
};

/// Pluggable signing primitive. Implementations must be deterministic
/// for a given key and payload.
class SignatureScheme {
public:
    virtual ~SignatureScheme() = default;

    virtual std::string_view name() const noexcept = 0;
    virtual KeyPair generate() const = 0;
    virtual KeyPair from_seed(std::span<const std::uint8_t, 32> seed) const = 0;
    virtual Bytes sign(const KeyPair& key, std::string_view payload) const = 0;
    /// Clean false for a wrong signature; MalformedKey / MalformedSignature
    /// when the inputs cannot be a key or signature of this scheme at all.
    virtual bool verify(std::span<const std::uint8_t> public_key, std::string_view payload,
                        std::span<const std::uint8_t> sig_bytes) const = 0;
};

const SignatureScheme& ed25519_scheme();
const SignatureScheme& default_scheme();

KeyPair generate_keypair(const SignatureScheme& scheme = default_scheme());
/// Deterministic key derived from (seed, label); used by simulations.
KeyPair derive_keypair(std::uint64_t seed, std::string_view label,
                       const SignatureScheme& scheme = default_scheme());

Signature sign(const KeyPair& key, std::string_view payload, const SignatureScheme& scheme = default_scheme());
bool verify(std::span<const std::uint8_t> public_key, std::string_view payload,
            std::span<const std::uint8_t> sig_bytes, const SignatureScheme& scheme = default_scheme());
/// Full check of a Signature record: key id, digest and scheme signature.
/// Never throws; malformed material counts as invalid.
bool verify_signature(const Signature& sig, std::string_view payload,
                      const SignatureScheme& scheme = default_scheme()) noexcept;

struct RicardianDigest {
    std::string contract_text;
    Digest digest;
};

/// Digest binding a human-readable contract to the instrument it issues.
RicardianDigest ricardian_digest(std::string contract_text);

// Key files: "public=<hex>\nsecret=<hex>\n".
std::string format_key_file(const KeyPair& key);
KeyPair parse_key_file(std::string_view text, const SignatureScheme& scheme = default_scheme());
void write_key_file(const std::filesystem::path& path, const KeyPair& key);
KeyPair read_key_file(const std::filesystem::path& path);

void encode_fields(CanonicalWriter& w, const Signature& sig);
Signature decode_fields(CanonicalReader& r, std::type_identity<Signature>);

} // namespace tea
