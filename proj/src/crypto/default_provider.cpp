#include <algorithm>

#include <sodium/core.h>
#include <sodium/crypto_aead_chacha20poly1305.h>
#include <sodium/crypto_scalarmult.h>
#include <sodium/crypto_sign_ed25519.h>
#include <sodium/utils.h>

#include "metasim/crypto.hpp"
#include "metasim/error.hpp"

namespace metasim {
namespace {

class SodiumProvider final : public CryptoProvider {
  public:
    SodiumProvider() {
        if (sodium_init() < 0)
            throw Error("sodium-init-failed");
    }

    std::string_view name() const override { return "default"; }

    KeyPair generate_keypair(ByteView seed) const override {
        if (seed.size() != crypto_sign_ed25519_SEEDBYTES)
            throw Error("bad-seed");
        KeyPair kp;
        kp.public_key.bytes.resize(crypto_sign_ed25519_PUBLICKEYBYTES);
        kp.private_key.bytes.resize(crypto_sign_ed25519_SECRETKEYBYTES);
        crypto_sign_ed25519_seed_keypair(kp.public_key.bytes.data(), kp.private_key.bytes.data(),
                                         seed.data());
        return kp;
    }

    SharedSecret dh(const PrivateKey& mine, const PublicKey& peer) const override {
        if (peer.bytes.size() != crypto_sign_ed25519_PUBLICKEYBYTES ||
            sodium_is_zero(peer.bytes.data(), peer.bytes.size()))
            throw Error("bad-public-key");
        if (mine.bytes.size() != crypto_sign_ed25519_SECRETKEYBYTES)
            throw Error("bad-private-key");

        std::uint8_t peer_x[crypto_scalarmult_BYTES];
        if (crypto_sign_ed25519_pk_to_curve25519(peer_x, peer.bytes.data()) != 0)
            throw Error("bad-public-key");
        std::uint8_t mine_x[crypto_scalarmult_SCALARBYTES];
        crypto_sign_ed25519_sk_to_curve25519(mine_x, mine.bytes.data());

        SharedSecret out;
        out.bytes.resize(crypto_scalarmult_BYTES);
        int rc = crypto_scalarmult(out.bytes.data(), mine_x, peer_x);
        sodium_memzero(mine_x, sizeof mine_x);
        if (rc != 0)
            throw Error("bad-public-key");
        return out;
    }

    Signature sign(const PrivateKey& key, ByteView message) const override {
        if (key.bytes.size() != crypto_sign_ed25519_SECRETKEYBYTES)
            throw Error("bad-private-key");
        Signature sig;
        sig.bytes.resize(crypto_sign_ed25519_BYTES);
        crypto_sign_ed25519_detached(sig.bytes.data(), nullptr, message.data(), message.size(),
                                     key.bytes.data());
        return sig;
    }

    bool verify(const PublicKey& key, ByteView message, const Signature& sig) const override {
        if (key.bytes.size() != crypto_sign_ed25519_PUBLICKEYBYTES ||
            sig.bytes.size() != crypto_sign_ed25519_BYTES)
            return false;
        return crypto_sign_ed25519_verify_detached(sig.bytes.data(), message.data(),
                                                   message.size(), key.bytes.data()) == 0;
    }

    Bytes aead_seal(const SymmetricKey& key, const Nonce& nonce, ByteView plaintext,
                    ByteView aad) const override {
        Bytes out(plaintext.size() + crypto_aead_chacha20poly1305_ietf_ABYTES);
        unsigned long long out_len = 0;
        crypto_aead_chacha20poly1305_ietf_encrypt(out.data(), &out_len, plaintext.data(),
                                                  plaintext.size(), aad.data(), aad.size(),
                                                  nullptr, nonce.data(), key.bytes.data());
        out.resize(out_len);
        return out;
    }

    Bytes aead_open(const SymmetricKey& key, const Nonce& nonce, ByteView ciphertext,
                    ByteView aad) const override {
        if (ciphertext.size() < crypto_aead_chacha20poly1305_ietf_ABYTES)
            throw Error("aead-auth-fail");
        Bytes out(ciphertext.size() - crypto_aead_chacha20poly1305_ietf_ABYTES);
        unsigned long long out_len = 0;
        if (crypto_aead_chacha20poly1305_ietf_decrypt(out.data(), &out_len, nullptr,
                                                      ciphertext.data(), ciphertext.size(),
                                                      aad.data(), aad.size(), nonce.data(),
                                                      key.bytes.data()) != 0)
            throw Error("aead-auth-fail");
        out.resize(out_len);
        return out;
    }
};

}  // namespace

const CryptoProvider& default_provider() {
    static const SodiumProvider provider;
    return provider;
}

}  // namespace metasim
