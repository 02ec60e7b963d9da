#include "tea/crypto.hpp"

#include <fstream>
#include <sstream>

#include <sodium.h>

namespace tea {

namespace {

struct SodiumInit {
    SodiumInit()
    {
        if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
    }
};

void ensure_sodium()
{
    static const SodiumInit init;
}

class Ed25519Scheme final : public SignatureScheme {
public:
    std::string_view name() const noexcept override { return "ed25519"; }

    KeyPair generate() const override
    {
        ensure_sodium();
        std::array<std::uint8_t, 32> seed{};
        randombytes_buf(seed.data(), seed.size());
        return from_seed(seed);
    }

    KeyPair from_seed(std::span<const std::uint8_t, 32> seed) const override
    {
        ensure_sodium();
        KeyPair key;
        key.public_key.resize(crypto_sign_PUBLICKEYBYTES);
        key.secret_key.resize(crypto_sign_SECRETKEYBYTES);
        crypto_sign_seed_keypair(key.public_key.data(), key.secret_key.data(), seed.data());
        key.key_id = key_id_of(key.public_key);
        return key;
    }

    Bytes sign(const KeyPair& key, std::string_view payload) const override
    {
        ensure_sodium();
        check_key(key);
        Bytes sig(crypto_sign_BYTES);
        crypto_sign_detached(sig.data(), nullptr, reinterpret_cast<const unsigned char*>(payload.data()),
                             payload.size(), key.secret_key.data());
        return sig;
    }

    bool verify(std::span<const std::uint8_t> public_key, std::string_view payload,
                std::span<const std::uint8_t> sig_bytes) const override
    {
        ensure_sodium();
        if (public_key.size() != crypto_sign_PUBLICKEYBYTES) fail(Errc::malformed_key, "wrong public key length");
        if (sig_bytes.size() != crypto_sign_BYTES) fail(Errc::malformed_signature, "wrong signature length");
        return crypto_sign_verify_detached(sig_bytes.data(), reinterpret_cast<const unsigned char*>(payload.data()),
                                           payload.size(), public_key.data()) == 0;
    }

private:
    static void check_key(const KeyPair& key)
    {
        if (key.public_key.size() != crypto_sign_PUBLICKEYBYTES ||
            key.secret_key.size() != crypto_sign_SECRETKEYBYTES)
            fail(Errc::key_invalid, "wrong key length");
        // libsodium secret keys embed the public key in their upper half.
        if (!std::equal(key.public_key.begin(), key.public_key.end(),
                        key.secret_key.begin() + crypto_sign_SEEDBYTES))
            fail(Errc::key_invalid, "secret key does not match public key");
    }
};

} // namespace

Digest Digest::of(std::string_view data)
{
    return of(std::span(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

Digest Digest::of(std::span<const std::uint8_t> data)
{
    ensure_sodium();
    Digest d;
    crypto_hash_sha256(d.bytes.data(), data.data(), data.size());
    return d;
}

Digest Digest::from_hex(std::string_view hex)
{
    const auto raw = hex_decode(hex);
    if (raw.size() != 32) fail(Errc::decode_error, "digest must be 32 bytes");
    Digest d;
    std::copy(raw.begin(), raw.end(), d.bytes.begin());
    return d;
}

KeyId key_id_of(std::span<const std::uint8_t> public_key)
{
    return Digest::of(public_key).hex();
}

const SignatureScheme& ed25519_scheme()
{
    static const Ed25519Scheme scheme;
    return scheme;
}

const SignatureScheme& default_scheme()
{
    return ed25519_scheme();
}

KeyPair generate_keypair(const SignatureScheme& scheme)
{
    return scheme.generate();
}

KeyPair derive_keypair(std::uint64_t seed, std::string_view label, const SignatureScheme& scheme)
{
    const auto d = Digest::of("tea-key:" + std::to_string(seed) + ":" + std::string(label));
    return scheme.from_seed(std::span<const std::uint8_t, 32>(d.bytes));
}

Signature sign(const KeyPair& key, std::string_view payload, const SignatureScheme& scheme)
{
    if (payload.empty()) fail(Errc::invariant_violation, "refusing to sign an empty payload");
    Signature sig;
    sig.signer = key.key_id;
    sig.public_key = key.public_key;
    sig.sig_bytes = scheme.sign(key, payload);
    sig.signed_digest = Digest::of(payload);
    return sig;
}

bool verify(std::span<const std::uint8_t> public_key, std::string_view payload,
            std::span<const std::uint8_t> sig_bytes, const SignatureScheme& scheme)
{
    return scheme.verify(public_key, payload, sig_bytes);
}

bool verify_signature(const Signature& sig, std::string_view payload, const SignatureScheme& scheme) noexcept
{
    try {
        if (sig.signer != key_id_of(sig.public_key)) return false;
        if (sig.signed_digest != Digest::of(payload)) return false;
        return scheme.verify(sig.public_key, payload, sig.sig_bytes);
    } catch (const Error&) {
        return false;
    }
}

RicardianDigest ricardian_digest(std::string contract_text)
{
    if (!is_valid_utf8(contract_text)) fail(Errc::invalid_encoding, "contract text is not valid UTF-8");
    const auto digest = Digest::of(contract_text);
    return {std::move(contract_text), digest};
}

std::string format_key_file(const KeyPair& key)
{
    return "public=" + hex_encode(key.public_key) + "\nsecret=" + hex_encode(key.secret_key) + "\n";
}

KeyPair parse_key_file(std::string_view text, const SignatureScheme& scheme)
{
    CanonicalReader reader(text);
    KeyPair key;
    key.public_key = reader.bytes("public");
    key.secret_key = reader.bytes("secret");
    reader.expect_end();
    key.key_id = key_id_of(key.public_key);
    // A sign/verify round trip rejects mismatched halves for any scheme.
    static constexpr std::string_view probe = "key-check";
    if (!scheme.verify(key.public_key, probe, scheme.sign(key, probe)))
        fail(Errc::key_invalid, "key file halves do not match");
    return key;
}

void write_key_file(const std::filesystem::path& path, const KeyPair& key)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::io_error, "cannot write " + path.string());
    out << format_key_file(key);
    if (!out) fail(Errc::io_error, "write failed for " + path.string());
}

KeyPair read_key_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::io_error, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_key_file(buf.str());
}

void encode_fields(CanonicalWriter& w, const Signature& sig)
{
    w.hex("signer", sig.signer)
        .bytes("public_key", sig.public_key)
        .bytes("sig", sig.sig_bytes)
        .hex("signed_digest", sig.signed_digest.hex());
}

Signature decode_fields(CanonicalReader& r, std::type_identity<Signature>)
{
    Signature sig;
    sig.signer = r.hex("signer");
    sig.public_key = r.bytes("public_key");
    sig.sig_bytes = r.bytes("sig");
    sig.signed_digest = Digest::from_hex(r.hex("signed_digest"));
    return sig;
}

} // namespace tea
