#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "metasim/ids.hpp"
#include "metasim/ledger.hpp"
#include "metasim/wallet.hpp"

namespace metasim {

struct Challenge {
    std::uint64_t nonce = 0;
    std::string world_id;
    std::uint64_t issued_at = 0;
    bool operator==(const Challenge&) const = default;

    Bytes encode() const;
    static Challenge decode(ByteView data);
};

// What a wallet sends back for a challenge. The presentation is only needed
// for restricted worlds.
struct AuthResponse {
    NftId nft;
    Signature signature;
    std::optional<Presentation> presentation;
    bool operator==(const AuthResponse&) const = default;

    Bytes encode() const;
    static AuthResponse decode(ByteView data);
};

Bytes auth_signing_payload(const std::string& world_id, std::uint64_t nonce, const NftId& nft);

struct AuthResult {
    bool accepted = false;
    // "" when accepted. Rejections: bad-signature | no-nft | stale-challenge |
    // missing-claim | untrusted-issuer | bad-presentation.
    std::string reason;
    bool recognized_returning = false;
    std::string session_id;

    // Stable transcript rendering, e.g. "accepted(returning=false)" or
    // "rejected(missing-claim)".
    std::string outcome() const;
};

struct VisitRecord {
    std::uint64_t first_seen = 0;
    std::uint64_t visit_count = 0;
    bool operator==(const VisitRecord&) const = default;
};

// Holds only nft ids of accepted visitors and their visit counters.
class VisitorRegistry {
  public:
    bool contains(const NftId& nft) const { return visits_.count(nft) != 0; }
    const VisitRecord* find(const NftId& nft) const;
    void record_visit(const NftId& nft, std::uint64_t now);
    const std::map<NftId, VisitRecord>& visits() const { return visits_; }
    Bytes encode() const;

  private:
    std::map<NftId, VisitRecord> visits_;
};

// World-side authentication state: outstanding challenges and the visitor
// registry. Confined to the owning world's actor.
class Authenticator {
  public:
    Authenticator(std::string world_id, std::uint64_t rng_seed);

    const std::string& world_id() const { return world_id_; }

    // Fresh, never-before-issued nonce registered as outstanding.
    Challenge issue_challenge(const NftId& requester, std::uint64_t now);

    // Consumes the challenge named by `nonce` whatever the outcome.
    AuthResult authenticate_open(std::uint64_t nonce, const AuthResponse& response,
                                 const Ledger& ledger, std::uint64_t now);

    AuthResult authenticate_restricted(std::uint64_t nonce, const AuthResponse& response,
                                       const Ledger& ledger, const std::string& required_predicate,
                                       const std::set<WalletAddress>& trusted_issuers,
                                       std::uint64_t now);

    const VisitorRegistry& visitors() const { return visitors_; }
    std::size_t outstanding() const { return outstanding_.size(); }

    // Everything this authenticator stores, canonically encoded (for audits).
    Bytes encode_state() const;

  private:
    // Shared open-access checks; nullopt means they passed.
    std::optional<AuthResult> check_open(std::uint64_t nonce, const AuthResponse& response,
                                         const Ledger& ledger);
    AuthResult accept(const AuthResponse& response, std::uint64_t nonce, std::uint64_t now);

    std::string world_id_;
    std::mt19937_64 rng_;
    std::map<std::uint64_t, NftId> outstanding_;
    std::set<std::uint64_t> issued_;
    VisitorRegistry visitors_;
};

AuthResponse respond_open(const Wallet& wallet, const Challenge& challenge);

// Attaches a presentation of the first held certificate for `predicate`,
// preferring issuers in `preferred_issuers`. Without such a certificate the
// response carries no presentation.
AuthResponse respond_restricted(const Wallet& wallet, const Challenge& challenge,
                                const std::string& predicate,
                                const std::vector<WalletAddress>& preferred_issuers = {});

// Convenience wrappers running the wallet side and the world side in one call.
AuthResult authenticate_open(Authenticator& world, const Wallet& wallet, const Challenge& challenge,
                             const Ledger& ledger, std::uint64_t now);
AuthResult authenticate_restricted(Authenticator& world, const Wallet& wallet,
                                   const Challenge& challenge, const std::string& predicate,
                                   const std::set<WalletAddress>& trusted_issuers,
                                   const Ledger& ledger, std::uint64_t now);

}  // namespace metasim
