#pragma once

#include <cstdint>
#include <initializer_list>
#include <set>
#include <string>
#include <vector>

#include "metasim/crypto.hpp"
#include "metasim/ids.hpp"

namespace metasim {

// A predicate over the subject, never the underlying attribute value.
struct Claim {
    std::string predicate;
    NftId subject_nft;
    bool operator==(const Claim&) const = default;
};

// Trusted-party signature over canonical(tag, predicate, subject, issuer, issued_at).
// `issued_at` is the ledger head when the certificate was signed, and pins the
// issuer key used for verification.
struct AttestationCertificate {
    Claim claim;
    WalletAddress issuer_id;
    std::uint64_t issued_at = 0;
    Signature signature;

    bool operator==(const AttestationCertificate&) const = default;

    Bytes signing_payload() const;
    Bytes encode() const;
    // Error "decode-error" on malformed input.
    static AttestationCertificate decode(ByteView data);
    Bytes digest() const { return sha256(encode()); }
};

struct PrekeyEntry {
    std::uint32_t prekey_id = 0;
    PublicKey prekey_pub;
    Signature owner_signature;
    bool operator==(const PrekeyEntry&) const = default;

    Bytes signing_payload(const NftId& owner_nft) const;
};

inline constexpr std::size_t max_prekeys_per_bundle = 100;

struct SignedPrekeyBundle {
    NftId owner_nft;
    std::vector<PrekeyEntry> entries;
    bool operator==(const SignedPrekeyBundle&) const = default;

    Bytes encode() const;
    static SignedPrekeyBundle decode(ByteView data);
};

bool verify_prekey_entry(const CryptoProvider& crypto, const PrekeyEntry& entry,
                         const NftId& owner_nft, const PublicKey& owner_identity);

// Closed vocabulary of predicates shared by issuers and verifiers.
class PredicateRegistry {
  public:
    PredicateRegistry() : PredicateRegistry({"age_over_18", "world_member", "kyc_verified"}) {}
    PredicateRegistry(std::initializer_list<std::string> predicates) : known_(predicates) {}

    bool contains(const std::string& predicate) const { return known_.count(predicate) != 0; }
    void add(std::string predicate) { known_.insert(std::move(predicate)); }
    const std::set<std::string>& predicates() const { return known_; }

  private:
    std::set<std::string> known_;
};

}  // namespace metasim
