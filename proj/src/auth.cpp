#include "metasim/auth.hpp"

#include "metasim/canonical.hpp"
#include "metasim/error.hpp"

namespace metasim {

Bytes Challenge::encode() const {
    return Encoder{}.u64(nonce).str(world_id).u64(issued_at).take();
}

Challenge Challenge::decode(ByteView data) {
    Decoder d(data);
    Challenge c;
    c.nonce = d.u64();
    c.world_id = d.str();
    c.issued_at = d.u64();
    d.expect_end();
    return c;
}

Bytes AuthResponse::encode() const {
    Encoder e;
    e.str(nft.hex).bytes(signature.bytes).u8(presentation ? 1 : 0);
    if (presentation)
        e.bytes(presentation->encode());
    return std::move(e).take();
}

AuthResponse AuthResponse::decode(ByteView data) {
    Decoder d(data);
    AuthResponse r;
    r.nft.hex = d.str();
    r.signature.bytes = d.bytes();
    if (d.flag())
        r.presentation = Presentation::decode(d.bytes());
    d.expect_end();
    return r;
}

Bytes auth_signing_payload(const std::string& world_id, std::uint64_t nonce, const NftId& nft) {
    return Encoder{}.str("metasim/auth-response/v1").str(world_id).u64(nonce).str(nft.hex).take();
}

std::string AuthResult::outcome() const {
    if (accepted)
        return recognized_returning ? "accepted(returning=true)" : "accepted(returning=false)";
    return "rejected(" + reason + ")";
}

const VisitRecord* VisitorRegistry::find(const NftId& nft) const {
    auto it = visits_.find(nft);
    return it == visits_.end() ? nullptr : &it->second;
}

void VisitorRegistry::record_visit(const NftId& nft, std::uint64_t now) {
    auto [it, inserted] = visits_.try_emplace(nft, VisitRecord{now, 0});
    ++it->second.visit_count;
}

Bytes VisitorRegistry::encode() const {
    Encoder e;
    e.u32(static_cast<std::uint32_t>(visits_.size()));
    for (const auto& [id, v] : visits_)
        e.str(id.hex).u64(v.first_seen).u64(v.visit_count);
    return std::move(e).take();
}

Authenticator::Authenticator(std::string world_id, std::uint64_t rng_seed)
    : world_id_(std::move(world_id)), rng_(rng_seed) {}

Challenge Authenticator::issue_challenge(const NftId& requester, std::uint64_t now) {
    std::uint64_t nonce;
    do {
        nonce = rng_();
    } while (nonce == 0 || issued_.count(nonce));
    issued_.insert(nonce);
    outstanding_.emplace(nonce, requester);
    return Challenge{nonce, world_id_, now};
}

namespace {

AuthResult rejection(std::string code) {
    AuthResult r;
    r.reason = std::move(code);
    return r;
}

}  // namespace

std::optional<AuthResult> Authenticator::check_open(std::uint64_t nonce,
                                                    const AuthResponse& response,
                                                    const Ledger& ledger) {
    auto it = outstanding_.find(nonce);
    if (it == outstanding_.end())
        return rejection("stale-challenge");
    outstanding_.erase(it);

    if (response.nft.empty())
        return rejection("no-nft");
    PublicKey bound_key;
    try {
        bound_key = ledger.identity_key_of(response.nft);
    } catch (const Error&) {
        return rejection("no-nft");
    }
    if (!ledger.crypto().verify(bound_key, auth_signing_payload(world_id_, nonce, response.nft),
                                response.signature))
        return rejection("bad-signature");
    return std::nullopt;
}

AuthResult Authenticator::accept(const AuthResponse& response, std::uint64_t nonce,
                                 std::uint64_t now) {
    AuthResult result;
    result.accepted = true;
    result.recognized_returning = visitors_.contains(response.nft);
    result.session_id = to_hex(
            ByteView(sha256(Encoder{}.str(world_id_).u64(nonce).str(response.nft.hex).data()))
                    .first(8));
    visitors_.record_visit(response.nft, now);
    return result;
}

AuthResult Authenticator::authenticate_open(std::uint64_t nonce, const AuthResponse& response,
                                            const Ledger& ledger, std::uint64_t now) {
    if (auto rejected = check_open(nonce, response, ledger))
        return *rejected;
    return accept(response, nonce, now);
}

AuthResult Authenticator::authenticate_restricted(std::uint64_t nonce,
                                                  const AuthResponse& response,
                                                  const Ledger& ledger,
                                                  const std::string& required_predicate,
                                                  const std::set<WalletAddress>& trusted_issuers,
                                                  std::uint64_t now) {
    if (auto rejected = check_open(nonce, response, ledger))
        return *rejected;
    if (!response.presentation ||
        response.presentation->cert.claim.predicate != required_predicate)
        return rejection("missing-claim");
    if (!trusted_issuers.count(response.presentation->cert.issuer_id))
        return rejection("untrusted-issuer");
    if (response.presentation->holder_nft != response.nft ||
        !verify_presentation(*response.presentation, ledger, nonce))
        return rejection("bad-presentation");
    return accept(response, nonce, now);
}

Bytes Authenticator::encode_state() const {
    Encoder e;
    e.str(world_id_).u32(static_cast<std::uint32_t>(outstanding_.size()));
    for (const auto& [nonce, nft] : outstanding_)
        e.u64(nonce).str(nft.hex);
    e.u32(static_cast<std::uint32_t>(issued_.size()));
    for (auto nonce : issued_)
        e.u64(nonce);
    e.bytes(visitors_.encode());
    return std::move(e).take();
}

AuthResponse respond_open(const Wallet& wallet, const Challenge& challenge) {
    AuthResponse r;
    if (wallet.nft()) {
        r.nft = wallet.nft()->id;
        r.signature = wallet.sign(auth_signing_payload(challenge.world_id, challenge.nonce, r.nft));
    }
    return r;
}

AuthResponse respond_restricted(const Wallet& wallet, const Challenge& challenge,
                                const std::string& predicate,
                                const std::vector<WalletAddress>& preferred_issuers) {
    auto r = respond_open(wallet, challenge);
    if (!wallet.nft())
        return r;
    if (auto cert = wallet.find_certificate(predicate, preferred_issuers);
        cert && cert->claim.subject_nft == r.nft)
        r.presentation = make_presentation(wallet, *cert, challenge.nonce);
    return r;
}

AuthResult authenticate_open(Authenticator& world, const Wallet& wallet, const Challenge& challenge,
                             const Ledger& ledger, std::uint64_t now) {
    return world.authenticate_open(challenge.nonce, respond_open(wallet, challenge), ledger, now);
}

AuthResult authenticate_restricted(Authenticator& world, const Wallet& wallet,
                                   const Challenge& challenge, const std::string& predicate,
                                   const std::set<WalletAddress>& trusted_issuers,
                                   const Ledger& ledger, std::uint64_t now) {
    std::vector<WalletAddress> preferred(trusted_issuers.begin(), trusted_issuers.end());
    return world.authenticate_restricted(
            challenge.nonce, respond_restricted(wallet, challenge, predicate, preferred), ledger,
            predicate, trusted_issuers, now);
}

}  // namespace metasim
