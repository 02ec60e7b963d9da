#include <doctest.h>

#include <filesystem>
#include <random>

#include "tea/crypto.hpp"

using namespace tea;

TEST_SUITE("crypto")
{
    TEST_CASE("sha256 known answers")
    {
        CHECK(Digest::of(std::string_view{}).hex() ==
              "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
        CHECK(Digest::of(std::string_view{"abc"}).hex() ==
              "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    TEST_CASE("ed25519 test vector 1")
    {
        // RFC 8032, section 7.1, TEST 1.
        const auto seed = hex_decode("9d61b19deffd5a60ba844af492ec2cc44449c5697b326919703bac031cae7f60");
        const auto key = ed25519_scheme().from_seed(std::span<const std::uint8_t, 32>(seed.data(), 32));
        CHECK(hex_encode(key.public_key) == "d75a980182b10ab7d54bfed3c964073a0ee172f3daa62325af021a68f707511a");
        const auto sig = ed25519_scheme().sign(key, "");
        CHECK(hex_encode(sig) ==
              "e5564300c360ac729086e2cc806e828a84877f1eb8e5d974d873e065224901555fb8821590a33bacc61e39701cf9b46bd25bf5f0595bbe24655141438e7a100b");
        CHECK(ed25519_scheme().verify(key.public_key, "", sig));
    }

    TEST_CASE("key id is a deterministic function of the public key")
    {
        const auto a = derive_keypair(5, "alice");
        const auto b = derive_keypair(5, "alice");
        CHECK(a.key_id == b.key_id);
        CHECK(a.key_id == key_id_of(a.public_key));
        CHECK(a.key_id.size() == 64);
        CHECK(derive_keypair(5, "bob").key_id != a.key_id);
        CHECK(derive_keypair(6, "alice").key_id != a.key_id);
    }

    TEST_CASE("sign and verify")
    {
        const auto a = derive_keypair(1, "a");
        const auto b = derive_keypair(1, "b");
        const std::string payload = "a=1\nb=2\n";
        const auto sig = sign(a, payload);
        CHECK(sig.signer == a.key_id);
        CHECK(sig.signed_digest == Digest::of(payload));
        CHECK(verify(a.public_key, payload, sig.sig_bytes));
        CHECK(verify_signature(sig, payload));

        auto flipped = payload;
        flipped[0] ^= 0x01;
        CHECK_FALSE(verify(a.public_key, flipped, sig.sig_bytes));
        CHECK_FALSE(verify_signature(sig, flipped));
        CHECK_FALSE(verify(b.public_key, payload, sig.sig_bytes));

        auto forged = sig;
        forged.signer = b.key_id;
        CHECK_FALSE(verify_signature(forged, payload));
        CHECK_THROWS_AS(sign(a, ""), Error);
    }

    TEST_CASE("malformed material")
    {
        const auto a = derive_keypair(1, "a");
        const auto sig = sign(a, "x");
        const std::vector<std::uint8_t> short_key(31, 0);
        try {
            verify(short_key, "x", sig.sig_bytes);
            FAIL("expected MalformedKey");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::malformed_key);
        }
        try {
            verify(a.public_key, "x", std::vector<std::uint8_t>(10, 0));
            FAIL("expected MalformedSignature");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::malformed_signature);
        }
        auto broken = sig;
        broken.sig_bytes.pop_back();
        CHECK_FALSE(verify_signature(broken, "x"));

        auto mismatched = a;
        mismatched.public_key = derive_keypair(1, "b").public_key;
        CHECK_THROWS_AS(sign(mismatched, "x"), Error);
    }

    TEST_CASE("property: any single-byte mutation of the payload breaks verification")
    {
        std::mt19937_64 rng(3);
        const auto key = derive_keypair(9, "prop");
        for (int round = 0; round < 40; ++round) {
            std::string payload(1 + rng() % 200, '\0');
            for (auto& c : payload) c = static_cast<char>(rng());
            const auto sig = sign(key, payload);
            REQUIRE(verify_signature(sig, payload));
            auto mutated = payload;
            const auto pos = rng() % mutated.size();
            mutated[pos] = static_cast<char>(mutated[pos] ^ static_cast<char>(1 + rng() % 255));
            CHECK_FALSE(verify_signature(sig, mutated));
        }
    }

    TEST_CASE("ricardian digests")
    {
        CHECK(ricardian_digest("").digest == Digest::of(std::string_view{}));
        CHECK(ricardian_digest("bicycle sale terms v1").digest == ricardian_digest("bicycle sale terms v1").digest);
        CHECK(ricardian_digest("bicycle sale terms v1").digest != ricardian_digest("bicycle sale terms v2").digest);
        CHECK_THROWS_AS(ricardian_digest(std::string("\xc3\x28", 2)), Error);
    }

    TEST_CASE("key files round trip")
    {
        const auto key = derive_keypair(2, "file");
        const auto parsed = parse_key_file(format_key_file(key));
        CHECK(parsed.key_id == key.key_id);
        CHECK(parsed.secret_key == key.secret_key);

        const auto path = std::filesystem::temp_directory_path() / "tea_test_key";
        write_key_file(path, key);
        CHECK(read_key_file(path).key_id == key.key_id);
        std::filesystem::remove(path);

        CHECK_THROWS_AS(parse_key_file("public=00\nsecret=00\n"), Error);
    }

    TEST_CASE("signature record round trip")
    {
        const auto sig = sign(derive_keypair(1, "a"), "payload");
        CHECK(canonical_decode<Signature>(canonical_encode(sig)) == sig);
    }
}
