#include <algorithm>
#include <cstdlib>
#include <string>

#include <sodium/crypto_auth_hmacsha256.h>

#include "metasim/canonical.hpp"
#include "metasim/crypto.hpp"
#include "metasim/error.hpp"

namespace metasim {

SymmetricKey SymmetricKey::from(ByteView raw) {
    if (raw.size() != symmetric_key_size)
        throw Error("bad-key-length");
    SymmetricKey k;
    std::copy(raw.begin(), raw.end(), k.bytes.begin());
    return k;
}

Nonce counter_nonce(std::uint64_t counter) {
    Nonce n{};
    for (int i = 0; i < 8; ++i)
        n[4 + i] = static_cast<std::uint8_t>(counter >> (56 - 8 * i));
    return n;
}

namespace {

void hmac_sha256(ByteView key, std::initializer_list<ByteView> parts,
                 std::uint8_t out[crypto_auth_hmacsha256_BYTES]) {
    crypto_auth_hmacsha256_state st;
    crypto_auth_hmacsha256_init(&st, key.data(), key.size());
    for (auto p : parts)
        crypto_auth_hmacsha256_update(&st, p.data(), p.size());
    crypto_auth_hmacsha256_final(&st, out);
}

}  // namespace

Bytes hkdf_sha256(ByteView salt, ByteView ikm, ByteView info, std::size_t out_len) {
    constexpr std::size_t hash_len = crypto_auth_hmacsha256_BYTES;
    if (out_len == 0 || out_len > 255 * hash_len)
        throw Error("kdf-bad-length");

    std::uint8_t zero_salt[hash_len] = {};
    if (salt.empty())
        salt = ByteView{zero_salt, hash_len};

    std::uint8_t prk[hash_len];
    hmac_sha256(salt, {ikm}, prk);

    Bytes okm;
    okm.reserve(out_len);
    std::uint8_t block[hash_len];
    std::size_t prev_len = 0;
    for (std::uint8_t counter = 1; okm.size() < out_len; ++counter) {
        hmac_sha256(ByteView{prk, hash_len},
                    {ByteView{block, prev_len}, info, ByteView{&counter, 1}}, block);
        prev_len = hash_len;
        auto take = std::min(hash_len, out_len - okm.size());
        okm.insert(okm.end(), block, block + take);
    }
    return okm;
}

Bytes CryptoProvider::kdf(std::span<const Bytes> inputs, std::string_view info,
                          std::size_t out_len) const {
    if (inputs.empty())
        throw Error("kdf-empty");
    Encoder ikm;
    ikm.u32(static_cast<std::uint32_t>(inputs.size()));
    for (const auto& in : inputs)
        ikm.bytes(in);
    return hkdf_sha256({}, ikm.data(), as_view(info), out_len);
}

const CryptoProvider& provider_by_name(std::string_view name) {
    if (name == "default")
        return default_provider();
    if (name == "test")
        return test_provider();
    throw Error("bad-provider", std::string(name));
}

const CryptoProvider& provider_from_env() {
    const char* env = std::getenv("METASIM_PROVIDER");
    if (env == nullptr || *env == '\0')
        return default_provider();
    return provider_by_name(env);
}

SharedSecret x3dh_initiator(const CryptoProvider& crypto, const KeyPair& my_identity,
                            const KeyPair& my_ephemeral, const PublicKey& peer_identity,
                            const PublicKey& peer_signed_prekey) {
    const Bytes legs[] = {
            crypto.dh(my_identity.private_key, peer_signed_prekey).bytes,
            crypto.dh(my_ephemeral.private_key, peer_identity).bytes,
            crypto.dh(my_ephemeral.private_key, peer_signed_prekey).bytes,
    };
    return {crypto.kdf(legs, x3dh_info, symmetric_key_size)};
}

SharedSecret x3dh_responder(const CryptoProvider& crypto, const KeyPair& my_identity,
                            const KeyPair& my_signed_prekey, const PublicKey& peer_identity,
                            const PublicKey& peer_ephemeral) {
    const Bytes legs[] = {
            crypto.dh(my_signed_prekey.private_key, peer_identity).bytes,
            crypto.dh(my_identity.private_key, peer_ephemeral).bytes,
            crypto.dh(my_signed_prekey.private_key, peer_ephemeral).bytes,
    };
    return {crypto.kdf(legs, x3dh_info, symmetric_key_size)};
}

}  // namespace metasim
