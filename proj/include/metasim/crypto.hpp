#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string_view>

#include "metasim/bytes.hpp"

namespace metasim {

inline constexpr std::size_t seed_size = 32;
inline constexpr std::size_t symmetric_key_size = 32;
inline constexpr std::size_t nonce_size = 12;

inline constexpr std::string_view x3dh_info = "metaverse-x3dh-v1";
inline constexpr std::string_view message_key_info = "metaverse-msg-v1";

struct PublicKey {
    Bytes bytes;
    auto operator<=>(const PublicKey&) const = default;
};

struct PrivateKey {
    Bytes bytes;
    bool operator==(const PrivateKey&) const = default;
};

// One logical identity key. Providers may keep linked DH and signing halves
// behind the same encoding, but the pair is valid for both roles.
struct KeyPair {
    PrivateKey private_key;
    PublicKey public_key;
    bool operator==(const KeyPair&) const = default;
};

struct Signature {
    Bytes bytes;
    bool operator==(const Signature&) const = default;
};

// Never written into transcripts or ledger entries.
struct SharedSecret {
    Bytes bytes;
    bool operator==(const SharedSecret&) const = default;
};

struct SymmetricKey {
    std::array<std::uint8_t, symmetric_key_size> bytes{};
    bool operator==(const SymmetricKey&) const = default;

    // Throws Error("bad-key-length") unless `raw` is exactly 32 bytes.
    static SymmetricKey from(ByteView raw);
};

using Nonce = std::array<std::uint8_t, nonce_size>;

// 12-byte nonce: four zero bytes followed by the big-endian counter.
Nonce counter_nonce(std::uint64_t counter);

// HKDF-SHA256 (RFC 5869) with the given salt. Exposed for conformance testing;
// protocol code goes through CryptoProvider::kdf.
Bytes hkdf_sha256(ByteView salt, ByteView ikm, ByteView info, std::size_t out_len);

// Pluggable primitive set: a DH group, a signature scheme, an AEAD and a
// hash-based KDF. All operations are pure; implementations hold no mutable
// state and may be used concurrently.
class CryptoProvider {
  public:
    virtual ~CryptoProvider() = default;

    virtual std::string_view name() const = 0;

    // Error "bad-seed" unless seed is exactly 32 bytes.
    virtual KeyPair generate_keypair(ByteView seed) const = 0;

    // Error "bad-public-key" when peer_public is not a valid group element.
    virtual SharedSecret dh(const PrivateKey& mine, const PublicKey& peer) const = 0;

    virtual Signature sign(const PrivateKey& key, ByteView message) const = 0;
    virtual bool verify(const PublicKey& key, ByteView message, const Signature& sig) const = 0;

    virtual Bytes aead_seal(const SymmetricKey& key, const Nonce& nonce, ByteView plaintext,
                            ByteView aad) const = 0;
    // Error "aead-auth-fail" on any mismatch of key, nonce, ciphertext or aad.
    virtual Bytes aead_open(const SymmetricKey& key, const Nonce& nonce, ByteView ciphertext,
                            ByteView aad) const = 0;

    // Inputs are framed with the canonical list encoding before extraction, so
    // ["ab","c"] and ["a","bc"] never collide. Errors: "kdf-empty" for no
    // inputs, "kdf-bad-length" for out_len outside [1, 255*32].
    virtual Bytes kdf(std::span<const Bytes> inputs, std::string_view info,
                      std::size_t out_len) const;
};

// libsodium: Ed25519 signing keys, X25519 DH over the birationally mapped
// keys, ChaCha20-Poly1305 (IETF) AEAD, HKDF-SHA256.
const CryptoProvider& default_provider();

// Tiny deterministic provider over a 62-bit safe-prime group: Schnorr
// signatures, SHA-256 keystream with an HMAC tag. Not secure; meant for oracle
// tests where values must be small enough to recompute by hand.
const CryptoProvider& test_provider();

// METASIM_PROVIDER=test|default (unset means default). Unknown values throw
// Error("bad-provider").
const CryptoProvider& provider_from_env();
const CryptoProvider& provider_by_name(std::string_view name);

// Three-leg X3DH without one-time prekeys. Both sides produce the leg list in
// initiator order:
//   DH(IK_init, SPK_resp), DH(EK_init, IK_resp), DH(EK_init, SPK_resp)
// and feed it to kdf under x3dh_info, yielding 32 bytes.
SharedSecret x3dh_initiator(const CryptoProvider& crypto, const KeyPair& my_identity,
                            const KeyPair& my_ephemeral, const PublicKey& peer_identity,
                            const PublicKey& peer_signed_prekey);

SharedSecret x3dh_responder(const CryptoProvider& crypto, const KeyPair& my_identity,
                            const KeyPair& my_signed_prekey, const PublicKey& peer_identity,
                            const PublicKey& peer_ephemeral);

}  // namespace metasim
