#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "metasim/contact_book.hpp"
#include "metasim/credential.hpp"
#include "metasim/crypto.hpp"
#include "metasim/ids.hpp"
#include "metasim/ledger.hpp"

namespace metasim {

// Holder/issuer agent. Owns key custody, held certificates, prekeys and the
// contact book. A wallet is a single-actor object: it may move between
// threads but must not be shared by concurrent flows.
class Wallet {
  public:
    // Deterministic in `seed`. Error "bad-seed" unless 32 bytes.
    static Wallet create(ByteView seed, const CryptoProvider& crypto = default_provider());

    const CryptoProvider& crypto() const { return *crypto_; }
    const WalletAddress& address() const { return address_; }
    const PublicKey& identity_public() const { return identity_.public_key; }
    const KeyPair& identity_keypair() const { return identity_; }
    Signature sign(ByteView message) const;

    const std::optional<IdentityNft>& nft() const { return nft_; }
    // Error "no-identity-nft" when nothing has been minted yet.
    const NftId& nft_id() const;

    // Self-attests the current identity key on the ledger.
    std::uint64_t publish_identity(Ledger& ledger) const;
    const IdentityNft& mint(Ledger& ledger);
    // Replaces the identity key and publishes the rotation, authorized by the
    // outgoing key. The wallet address is unchanged.
    std::uint64_t rotate_identity_key(ByteView new_seed, Ledger& ledger);

    // Errors: "no-identity-nft", "bad-count" (n outside [1, 100]).
    SignedPrekeyBundle create_prekey_bundle(std::size_t n);
    const KeyPair* prekey(std::uint32_t id) const;
    std::size_t prekey_count() const { return prekeys_.size(); }
    std::vector<std::uint32_t> prekey_ids() const;

    void hold_certificate(AttestationCertificate cert);
    const std::vector<AttestationCertificate>& certificates() const { return certs_; }
    // First held certificate for `predicate`, preferring issuers in `preferred`.
    std::optional<AttestationCertificate> find_certificate(
            const std::string& predicate, const std::vector<WalletAddress>& preferred = {}) const;

    ContactBook& contacts() { return contacts_; }
    const ContactBook& contacts() const { return contacts_; }

    // Everything a peer may learn about this wallet; carries no private key
    // material.
    Bytes public_view() const;

  private:
    Wallet(const CryptoProvider& crypto, KeyPair identity);

    const CryptoProvider* crypto_;
    WalletAddress address_;
    KeyPair identity_;
    std::optional<IdentityNft> nft_;
    std::vector<AttestationCertificate> certs_;
    std::map<std::uint32_t, KeyPair> prekeys_;
    std::uint32_t next_prekey_id_ = 1;
    ContactBook contacts_;
};

inline Wallet create_wallet(ByteView seed, const CryptoProvider& crypto = default_provider()) {
    return Wallet::create(seed, crypto);
}

// Errors: "unknown-predicate"; "unknown-wallet" when the issuer's current
// ledger key is missing or differs from the wallet's key. The certificate is
// stamped with the ledger head, which pins the issuer key for verification.
AttestationCertificate issue_attestation(const Wallet& issuer, const Claim& claim,
                                         const Ledger& ledger,
                                         const PredicateRegistry& vocabulary = {});

// Holder-signed binding of a certificate to a verifier's challenge nonce.
struct Presentation {
    AttestationCertificate cert;
    NftId holder_nft;
    std::uint64_t nonce = 0;
    Signature holder_signature;
    bool operator==(const Presentation&) const = default;

    Bytes signing_payload() const;
    Bytes encode() const;
    static Presentation decode(ByteView data);
};

// Error "not-holder" unless the wallet's nft is the certificate subject.
Presentation make_presentation(const Wallet& holder, const AttestationCertificate& cert,
                               std::uint64_t nonce);

struct PresentationCheck {
    bool ok = false;
    // "" on success, else one of bad-cert-sig | bad-holder-sig | nonce-mismatch | nft-mismatch.
    std::string reason;
    explicit operator bool() const { return ok; }
};

PresentationCheck verify_presentation(const Presentation& p, const Ledger& ledger,
                                      std::uint64_t expected_nonce);

}  // namespace metasim
