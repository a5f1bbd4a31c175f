#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "metasim/credential.hpp"
#include "metasim/crypto.hpp"
#include "metasim/ids.hpp"

namespace metasim {

// Soulbound: `owner` is fixed at mint and no operation can change it.
struct IdentityNft {
    NftId id;
    WalletAddress owner;
    std::uint64_t minted_at = 0;
    bool operator==(const IdentityNft&) const = default;
};

struct KeyRecord {
    WalletAddress owner;
    PublicKey identity_pub;
    std::uint64_t published_at = 0;
    Signature proof;
    // Present on every record after the first: signature by the previously
    // authoritative key over the rotation payload.
    std::optional<Signature> rotation_auth;
    bool operator==(const KeyRecord&) const = default;
};

struct AttestationRecord {
    AttestationCertificate cert;
    WalletAddress issuer;
    NftId subject_nft;
    std::uint64_t published_at = 0;
    bool operator==(const AttestationRecord&) const = default;

    static AttestationRecord from(const AttestationCertificate& cert) {
        return {cert, cert.issuer_id, cert.claim.subject_nft, 0};
    }
};

enum class EntryKind { mint, key_record, attestation, prekey_bundle };

std::string_view to_string(EntryKind kind);
std::optional<EntryKind> entry_kind_from(std::string_view name);

struct LogEntry {
    std::uint64_t seq = 0;
    EntryKind kind = EntryKind::mint;
    Bytes payload;
    bool operator==(const LogEntry&) const = default;
};

// Payload signed by a wallet's identity key when it self-attests that key.
Bytes key_record_payload(const WalletAddress& wallet, const PublicKey& identity_pub);

// Payload the outgoing key signs to authorize a rotation. Binds the sequence
// number of the record being replaced so authorizations cannot be replayed.
Bytes key_rotation_payload(const WalletAddress& wallet, const PublicKey& new_pub,
                           std::uint64_t replaced_seq);

// Simulated append-only SSI registry. A single writer appends under an
// exclusive lock; readers share a lock and always see a complete prefix.
// Sequence numbers start at 1 and increase by one per appended entry.
class Ledger {
  public:
    explicit Ledger(const CryptoProvider& crypto = default_provider()) : crypto_(&crypto) {}

    Ledger(const Ledger&) = delete;
    Ledger& operator=(const Ledger&) = delete;

    const CryptoProvider& crypto() const { return *crypto_; }

    // Called on every public read and write with the operation name and the
    // key it touches. Runs under the ledger lock and must not call back into
    // the ledger. Used by the simulator to trace ledger traffic.
    using Observer = std::function<void(bool write, std::string_view op, std::string_view key)>;
    void set_observer(Observer observer);

    // Errors: "bad-self-attestation" when `proof` does not verify or a first
    // record's key does not hash to `wallet`; "unauthorized-rotation" when a
    // later record lacks a valid authorization by the current key.
    std::uint64_t publish_key_record(const WalletAddress& wallet, const PublicKey& identity_pub,
                                     const Signature& proof,
                                     const std::optional<Signature>& rotation_auth = std::nullopt);

    // Errors: "unknown-wallet", "nft-exists".
    IdentityNft mint_identity_nft(const WalletAddress& wallet);

    // Always throws "soulbound-transfer-forbidden" and leaves the ledger untouched.
    [[noreturn]] void transfer_identity_nft(const NftId& nft, const WalletAddress& new_owner);

    // Errors: "unknown-subject-nft", "bad-issuer-signature".
    std::uint64_t publish_attestation(const AttestationRecord& record);

    // Entries are stored as published; consumers verify each one. The owner
    // nft must exist ("unknown-subject-nft"). Latest bundle per nft wins.
    std::uint64_t publish_prekey_bundle(const SignedPrekeyBundle& bundle);

    // Reads. "not-found" when nothing matches.
    KeyRecord fetch_key_record(const WalletAddress& wallet) const;
    std::optional<KeyRecord> key_record_at(const WalletAddress& wallet, std::uint64_t seq) const;
    std::vector<KeyRecord> key_history(const WalletAddress& wallet) const;
    IdentityNft resolve_nft(const NftId& nft) const;
    std::optional<IdentityNft> nft_of(const WalletAddress& wallet) const;
    std::vector<AttestationRecord> fetch_attestations(const NftId& nft) const;
    SignedPrekeyBundle fetch_prekey_bundle(const NftId& nft) const;

    // Identity key currently bound to the nft's owner. "not-found" when either
    // link is missing.
    PublicKey identity_key_of(const NftId& nft) const;

    // Certificate signature check against the issuer key pinned at issued_at.
    bool verify_certificate(const AttestationCertificate& cert) const;

    std::uint64_t head() const;
    std::size_t nft_count() const;
    std::vector<LogEntry> entries() const;

    // Persisted form: one `seq|kind|payload-hex` line per entry.
    std::string serialize() const;
    // Replays a persisted log into this (empty) ledger, re-running every
    // validation. Error "bad-log" with the offending line on failure.
    void load(std::string_view text);

    // Canonical encoding of every derived index; equal logs give equal digests.
    Bytes index_digest() const;

  private:
    void append(EntryKind kind, Bytes payload, std::uint64_t expected_seq);
    void apply(const LogEntry& entry);

    std::uint64_t apply_key_record(const WalletAddress& wallet, const PublicKey& pub,
                                   const Signature& proof,
                                   const std::optional<Signature>& rotation_auth);
    IdentityNft apply_mint(const WalletAddress& wallet);
    std::uint64_t apply_attestation(const AttestationRecord& record);
    std::uint64_t apply_prekey_bundle(const SignedPrekeyBundle& bundle);

    const KeyRecord* latest_key_locked(const WalletAddress& wallet) const;
    const KeyRecord* key_at_locked(const WalletAddress& wallet, std::uint64_t seq) const;
    bool verify_certificate_locked(const AttestationCertificate& cert) const;

    void notify(bool write, std::string_view op, std::string_view key) const {
        if (observer_)
            observer_(write, op, key);
    }

    const CryptoProvider* crypto_;
    Observer observer_;
    mutable std::shared_mutex mutex_;
    std::vector<LogEntry> log_;
    std::map<WalletAddress, std::vector<KeyRecord>> keys_;
    std::map<WalletAddress, NftId> nft_by_wallet_;
    std::map<NftId, IdentityNft> nfts_;
    std::map<NftId, std::vector<AttestationRecord>> attestations_;
    std::map<NftId, SignedPrekeyBundle> bundles_;
};

}  // namespace metasim
