#include <doctest.h>

#include <array>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "metasim/error.hpp"
#include "support.hpp"

using namespace metasim;
using metasim::testing::random_bytes;
using metasim::testing::seed_from;

namespace {

const std::array<const CryptoProvider*, 2> providers() {
    return {&default_provider(), &test_provider()};
}

template <typename F>
void expect_code(F&& f, const std::string& code) {
    try {
        f();
        FAIL("expected error " << code);
    } catch (const Error& e) {
        CHECK(e.code() == code);
    }
}

KeyPair random_keypair(const CryptoProvider& c, std::mt19937_64& rng) {
    return c.generate_keypair(random_bytes(rng, 32));
}

Bytes kdf_of(const CryptoProvider& c, std::initializer_list<Bytes> inputs, std::string_view info,
             std::size_t n = 32) {
    std::vector<Bytes> v(inputs);
    return c.kdf(v, info, n);
}

}  // namespace

TEST_CASE("hkdf matches RFC 5869 SHA-256 vectors") {
    // Expected OKMs were recomputed with the Python `cryptography` HKDF.
    SUBCASE("basic") {
        Bytes salt, info;
        for (int i = 0; i <= 0x0c; ++i)
            salt.push_back(static_cast<std::uint8_t>(i));
        for (int i = 0xf0; i <= 0xf9; ++i)
            info.push_back(static_cast<std::uint8_t>(i));
        auto okm = hkdf_sha256(salt, Bytes(22, 0x0b), info, 42);
        CHECK(to_hex(okm) ==
              "3cb25f25faacd57a90434f64d0362f2a2d2d0a90cf1a5a4c5db02d56ecc4c5bf34007208d5b887185865");
    }
    SUBCASE("long inputs") {
        Bytes ikm, salt, info;
        for (int i = 0; i < 0x50; ++i) {
            ikm.push_back(static_cast<std::uint8_t>(i));
            salt.push_back(static_cast<std::uint8_t>(0x60 + i));
            info.push_back(static_cast<std::uint8_t>(0xb0 + i));
        }
        auto okm = hkdf_sha256(salt, ikm, info, 82);
        CHECK(to_hex(okm) ==
              "b11e398dc80327a1c8e7f78c596a49344f012eda2d4efad8a050cc4c19afa97c59045a99cac7827271cb41c65e590e09da3275600c2f09b8367793a9aca3db71cc30c58179ec3e87c14c01d5c1f3434f1d87");
    }
    SUBCASE("empty salt and info") {
        auto okm = hkdf_sha256({}, Bytes(22, 0x0b), {}, 42);
        CHECK(to_hex(okm) ==
              "8da4e775a563c18f715f802a063c5a31b8a11f5c5ee1879ec3454e5f3c738d2d9d201395faa4b61a96c8");
    }
}

TEST_CASE("generate_keypair is deterministic and validates the seed") {
    for (const auto* c : providers()) {
        CAPTURE(c->name());
        auto seed = seed_from("kp");
        CHECK(c->generate_keypair(seed) == c->generate_keypair(seed));
        expect_code([&] { c->generate_keypair(Bytes(31, 1)); }, "bad-seed");
        expect_code([&] { c->generate_keypair(Bytes(33, 1)); }, "bad-seed");
    }
}

TEST_CASE("distinct seeds give distinct public keys") {
    std::mt19937_64 rng(11);
    for (const auto* c : providers()) {
        CAPTURE(c->name());
        std::set<Bytes> seen;
        for (int i = 0; i < 10000; ++i)
            seen.insert(random_keypair(*c, rng).public_key.bytes);
        CHECK(seen.size() == 10000);
    }
}

TEST_CASE("dh commutes, separates peers and rejects degenerate keys") {
    std::mt19937_64 rng(12);
    for (const auto* c : providers()) {
        CAPTURE(c->name());
        for (int i = 0; i < 1000; ++i) {
            auto a = random_keypair(*c, rng), b = random_keypair(*c, rng), d = random_keypair(*c, rng);
            auto ab = c->dh(a.private_key, b.public_key);
            REQUIRE(ab == c->dh(b.private_key, a.public_key));
            REQUIRE(ab != c->dh(a.private_key, d.public_key));
        }
        auto a = random_keypair(*c, rng);
        auto zero = PublicKey{Bytes(a.public_key.bytes.size(), 0)};
        expect_code([&] { c->dh(a.private_key, zero); }, "bad-public-key");
        expect_code([&] { c->dh(a.private_key, PublicKey{Bytes(5, 7)}); }, "bad-public-key");
    }
}

TEST_CASE("toy group rejects elements outside the prime-order subgroup") {
    const auto& c = test_provider();
    auto a = c.generate_keypair(seed_from("toy"));
    // p - 1 has order 2; 1 is the identity.
    auto minus_one = PublicKey{Encoder{}.u64(4611686018427377338ULL).take()};
    auto one = PublicKey{Encoder{}.u64(1).take()};
    expect_code([&] { c.dh(a.private_key, minus_one); }, "bad-public-key");
    expect_code([&] { c.dh(a.private_key, one); }, "bad-public-key");
}

TEST_CASE("signatures fail on any of the first 64 flipped message bits") {
    std::mt19937_64 rng(13);
    for (const auto* c : providers()) {
        CAPTURE(c->name());
        auto k = random_keypair(*c, rng);
        auto other = random_keypair(*c, rng);
        auto msg = random_bytes(rng, 48);
        auto sig = c->sign(k.private_key, msg);
        CHECK(c->verify(k.public_key, msg, sig));
        CHECK_FALSE(c->verify(other.public_key, msg, sig));
        for (int bit = 0; bit < 64; ++bit) {
            auto flipped = msg;
            flipped[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
            CHECK_FALSE(c->verify(k.public_key, flipped, sig));
        }
        for (std::size_t i = 0; i < sig.bytes.size(); ++i) {
            auto bad = sig;
            bad.bytes[i] ^= 0x01;
            CHECK_FALSE(c->verify(k.public_key, msg, bad));
        }
        CHECK_FALSE(c->verify(k.public_key, msg, Signature{Bytes(3, 0)}));
    }
}

TEST_CASE("kdf is deterministic, label separated and framed") {
    std::mt19937_64 rng(14);
    for (const auto* c : providers()) {
        CAPTURE(c->name());
        auto a = random_bytes(rng, 32);
        CHECK(kdf_of(*c, {a}, "x") == kdf_of(*c, {a}, "x"));
        for (int i = 0; i < 1000; ++i) {
            auto x = random_bytes(rng, 32), y = random_bytes(rng, 8);
            REQUIRE(kdf_of(*c, {x, y}, "session") != kdf_of(*c, {x, y}, "auth"));
        }
        CHECK(kdf_of(*c, {to_bytes("ab"), to_bytes("c")}, "l") !=
              kdf_of(*c, {to_bytes("a"), to_bytes("bc")}, "l"));
        expect_code([&] { c->kdf(std::vector<Bytes>{}, "x", 32); }, "kdf-empty");
        expect_code([&] { kdf_of(*c, {a}, "x", 0); }, "kdf-bad-length");
        expect_code([&] { kdf_of(*c, {a}, "x", 255 * 32 + 1); }, "kdf-bad-length");
        CHECK(kdf_of(*c, {a}, "x", 255 * 32).size() == 255 * 32);
    }
}

TEST_CASE("kdf first byte passes a chi-square uniformity check") {
    // Critical value of chi-square with 255 degrees of freedom at p = 0.001,
    // from scipy.stats.chi2.ppf(0.999, 255).
    constexpr double critical = 330.51974363400586;
    const auto& c = default_provider();
    std::array<int, 256> counts{};
    constexpr int trials = 10000;
    for (int i = 0; i < trials; ++i)
        ++counts[kdf_of(c, {Encoder{}.u64(i).take()}, "chi")[0]];
    double expected = trials / 256.0, stat = 0;
    for (int n : counts)
        stat += (n - expected) * (n - expected) / expected;
    CHECK(stat < critical);
}

TEST_CASE("aead round trips and rejects every single-byte corruption") {
    std::mt19937_64 rng(15);
    for (const auto* c : providers()) {
        CAPTURE(c->name());
        auto key = SymmetricKey::from(random_bytes(rng, 32));
        auto plaintext = random_bytes(rng, 48);
        auto aad = random_bytes(rng, 12);
        auto nonce = counter_nonce(9);
        auto ct = c->aead_seal(key, nonce, plaintext, aad);
        REQUIRE(ct.size() == 64);
        CHECK(c->aead_open(key, nonce, ct, aad) == plaintext);

        int failures = 0;
        for (std::size_t i = 0; i < ct.size(); ++i) {
            auto bad = ct;
            bad[i] ^= 0x80;
            try {
                c->aead_open(key, nonce, bad, aad);
            } catch (const Error& e) {
                failures += e.code() == "aead-auth-fail";
            }
        }
        CHECK(failures == 64);

        for (std::size_t i = 0; i < aad.size(); ++i) {
            auto bad = aad;
            bad[i] ^= 0x01;
            expect_code([&] { c->aead_open(key, nonce, ct, bad); }, "aead-auth-fail");
        }
        auto other = SymmetricKey::from(random_bytes(rng, 32));
        expect_code([&] { c->aead_open(other, nonce, ct, aad); }, "aead-auth-fail");
        expect_code([&] { c->aead_open(key, counter_nonce(10), ct, aad); }, "aead-auth-fail");
        expect_code([&] { c->aead_open(key, nonce, Bytes(3, 0), aad); }, "aead-auth-fail");
    }
    expect_code([] { SymmetricKey::from(Bytes(31, 0)); }, "bad-key-length");
}

TEST_CASE("x3dh agrees with an oracle built from raw dh legs") {
    std::mt19937_64 rng(16);
    for (const auto* c : providers()) {
        CAPTURE(c->name());
        for (int i = 0; i < 1000; ++i) {
            auto ik_i = random_keypair(*c, rng), ek_i = random_keypair(*c, rng);
            auto ik_r = random_keypair(*c, rng), spk_r = random_keypair(*c, rng);
            auto other_spk = random_keypair(*c, rng);

            // Initiator-order legs, computed independently from each side.
            std::vector<Bytes> init_legs = {c->dh(ik_i.private_key, spk_r.public_key).bytes,
                                            c->dh(ek_i.private_key, ik_r.public_key).bytes,
                                            c->dh(ek_i.private_key, spk_r.public_key).bytes};
            std::vector<Bytes> resp_legs = {c->dh(spk_r.private_key, ik_i.public_key).bytes,
                                            c->dh(ik_r.private_key, ek_i.public_key).bytes,
                                            c->dh(spk_r.private_key, ek_i.public_key).bytes};
            auto oracle_i = c->kdf(init_legs, "metaverse-x3dh-v1", 32);
            REQUIRE(oracle_i == c->kdf(resp_legs, "metaverse-x3dh-v1", 32));

            auto si = x3dh_initiator(*c, ik_i, ek_i, ik_r.public_key, spk_r.public_key);
            auto sr = x3dh_responder(*c, ik_r, spk_r, ik_i.public_key, ek_i.public_key);
            REQUIRE(si.bytes == oracle_i);
            REQUIRE(sr.bytes == oracle_i);

            // Initiator picked a different prekey than the responder uses.
            auto mismatched = x3dh_initiator(*c, ik_i, ek_i, ik_r.public_key, other_spk.public_key);
            REQUIRE(mismatched.bytes != sr.bytes);
            auto wrong_own = x3dh_responder(*c, ik_r, other_spk, ik_i.public_key, ek_i.public_key);
            REQUIRE(wrong_own.bytes != si.bytes);
        }
        auto k = random_keypair(*c, rng);
        auto zero = PublicKey{Bytes(k.public_key.bytes.size(), 0)};
        expect_code([&] { x3dh_initiator(*c, k, k, zero, k.public_key); }, "bad-public-key");
        expect_code([&] { x3dh_responder(*c, k, k, k.public_key, zero); }, "bad-public-key");
    }
}

TEST_CASE("x3dh conformance vectors") {
    std::ifstream in(std::string(METASIM_TEST_DATA_DIR) + "/vectors/x3dh_vectors.txt");
    REQUIRE(in);
    std::string line;
    int checked = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string part; std::getline(ss, part, '|');)
            f.push_back(part);
        REQUIRE(f.size() == 6);
        const auto& c = provider_by_name(f[0]);
        auto ik_i = c.generate_keypair(from_hex(f[1])), ek_i = c.generate_keypair(from_hex(f[2]));
        auto ik_r = c.generate_keypair(from_hex(f[3])), spk_r = c.generate_keypair(from_hex(f[4]));
        CAPTURE(line);
        CHECK(to_hex(x3dh_initiator(c, ik_i, ek_i, ik_r.public_key, spk_r.public_key).bytes) == f[5]);
        CHECK(to_hex(x3dh_responder(c, ik_r, spk_r, ik_i.public_key, ek_i.public_key).bytes) == f[5]);
        ++checked;
    }
    CHECK(checked == 16);
}

TEST_CASE("provider selection by name and environment") {
    CHECK(provider_by_name("test").name() == "test");
    CHECK(provider_by_name("default").name() == default_provider().name());
    expect_code([] { provider_by_name("rot13"); }, "bad-provider");

    ::setenv("METASIM_PROVIDER", "test", 1);
    CHECK(&provider_from_env() == &test_provider());
    ::setenv("METASIM_PROVIDER", "nope", 1);
    expect_code([] { provider_from_env(); }, "bad-provider");
    ::unsetenv("METASIM_PROVIDER");
    CHECK(&provider_from_env() == &default_provider());
}

TEST_CASE("counter nonce layout") {
    auto n = counter_nonce(0x0102030405060708ULL);
    CHECK(to_hex(Bytes(n.begin(), n.end())) == "000000000102030405060708");
}
