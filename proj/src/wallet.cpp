#include "metasim/wallet.hpp"

#include <algorithm>

#include "metasim/canonical.hpp"
#include "metasim/error.hpp"

namespace metasim {

Wallet::Wallet(const CryptoProvider& crypto, KeyPair identity)
    : crypto_(&crypto),
      address_(derive_address(identity.public_key)),
      identity_(std::move(identity)) {}

Wallet Wallet::create(ByteView seed, const CryptoProvider& crypto) {
    return Wallet(crypto, crypto.generate_keypair(seed));
}

Signature Wallet::sign(ByteView message) const {
    return crypto_->sign(identity_.private_key, message);
}

const NftId& Wallet::nft_id() const {
    if (!nft_)
        throw Error("no-identity-nft");
    return nft_->id;
}

std::uint64_t Wallet::publish_identity(Ledger& ledger) const {
    return ledger.publish_key_record(address_, identity_.public_key,
                                     sign(key_record_payload(address_, identity_.public_key)));
}

const IdentityNft& Wallet::mint(Ledger& ledger) {
    nft_ = ledger.mint_identity_nft(address_);
    return *nft_;
}

std::uint64_t Wallet::rotate_identity_key(ByteView new_seed, Ledger& ledger) {
    auto next = crypto_->generate_keypair(new_seed);
    auto current = ledger.fetch_key_record(address_);
    auto proof = crypto_->sign(next.private_key, key_record_payload(address_, next.public_key));
    auto auth = sign(key_rotation_payload(address_, next.public_key, current.published_at));
    auto seq = ledger.publish_key_record(address_, next.public_key, proof, auth);
    identity_ = std::move(next);
    return seq;
}

SignedPrekeyBundle Wallet::create_prekey_bundle(std::size_t n) {
    if (!nft_)
        throw Error("no-identity-nft");
    if (n < 1 || n > max_prekeys_per_bundle)
        throw Error("bad-count");

    SignedPrekeyBundle bundle{nft_->id, {}};
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t id = next_prekey_id_++;
        const Bytes inputs[] = {identity_.private_key.bytes, Encoder{}.u32(id).take()};
        auto prekey = crypto_->generate_keypair(crypto_->kdf(inputs, "metaverse-prekey-v1", seed_size));
        PrekeyEntry entry{id, prekey.public_key, {}};
        entry.owner_signature = sign(entry.signing_payload(nft_->id));
        bundle.entries.push_back(std::move(entry));
        prekeys_.emplace(id, std::move(prekey));
    }
    return bundle;
}

const KeyPair* Wallet::prekey(std::uint32_t id) const {
    auto it = prekeys_.find(id);
    return it == prekeys_.end() ? nullptr : &it->second;
}

std::vector<std::uint32_t> Wallet::prekey_ids() const {
    std::vector<std::uint32_t> ids;
    for (const auto& [id, kp] : prekeys_)
        ids.push_back(id);
    return ids;
}

void Wallet::hold_certificate(AttestationCertificate cert) {
    if (std::find(certs_.begin(), certs_.end(), cert) == certs_.end())
        certs_.push_back(std::move(cert));
}

std::optional<AttestationCertificate> Wallet::find_certificate(
        const std::string& predicate, const std::vector<WalletAddress>& preferred) const {
    const AttestationCertificate* fallback = nullptr;
    for (const auto& c : certs_) {
        if (c.claim.predicate != predicate)
            continue;
        if (preferred.empty() ||
            std::find(preferred.begin(), preferred.end(), c.issuer_id) != preferred.end())
            return c;
        if (fallback == nullptr)
            fallback = &c;
    }
    if (fallback != nullptr)
        return *fallback;
    return std::nullopt;
}

Bytes Wallet::public_view() const {
    Encoder e;
    e.str(address_.hex).bytes(identity_.public_key.bytes);
    e.u8(nft_ ? 1 : 0);
    if (nft_)
        e.str(nft_->id.hex).u64(nft_->minted_at);
    e.u32(static_cast<std::uint32_t>(prekeys_.size()));
    for (const auto& [id, kp] : prekeys_)
        e.u32(id).bytes(kp.public_key.bytes);
    e.u32(static_cast<std::uint32_t>(certs_.size()));
    for (const auto& c : certs_)
        e.bytes(c.encode());
    return std::move(e).take();
}

AttestationCertificate issue_attestation(const Wallet& issuer, const Claim& claim,
                                         const Ledger& ledger,
                                         const PredicateRegistry& vocabulary) {
    if (!vocabulary.contains(claim.predicate))
        throw Error("unknown-predicate", claim.predicate);
    KeyRecord current;
    try {
        current = ledger.fetch_key_record(issuer.address());
    } catch (const Error&) {
        throw Error("unknown-wallet", "issuer has no key record");
    }
    if (current.identity_pub != issuer.identity_public())
        throw Error("unknown-wallet", "issuer key is not the published key");

    AttestationCertificate cert{claim, issuer.address(), ledger.head(), {}};
    cert.signature = issuer.sign(cert.signing_payload());
    return cert;
}

Bytes Presentation::signing_payload() const {
    return Encoder{}
            .str("metasim/presentation/v1")
            .bytes(cert.digest())
            .str(holder_nft.hex)
            .u64(nonce)
            .take();
}

Bytes Presentation::encode() const {
    return Encoder{}
            .bytes(cert.encode())
            .str(holder_nft.hex)
            .u64(nonce)
            .bytes(holder_signature.bytes)
            .take();
}

Presentation Presentation::decode(ByteView data) {
    Decoder d(data);
    Presentation p;
    p.cert = AttestationCertificate::decode(d.bytes());
    p.holder_nft.hex = d.str();
    p.nonce = d.u64();
    p.holder_signature.bytes = d.bytes();
    d.expect_end();
    return p;
}

Presentation make_presentation(const Wallet& holder, const AttestationCertificate& cert,
                               std::uint64_t nonce) {
    if (!holder.nft() || holder.nft()->id != cert.claim.subject_nft)
        throw Error("not-holder");
    Presentation p{cert, holder.nft()->id, nonce, {}};
    p.holder_signature = holder.sign(p.signing_payload());
    return p;
}

PresentationCheck verify_presentation(const Presentation& p, const Ledger& ledger,
                                      std::uint64_t expected_nonce) {
    if (p.nonce != expected_nonce)
        return {false, "nonce-mismatch"};
    if (!ledger.verify_certificate(p.cert))
        return {false, "bad-cert-sig"};
    if (p.holder_nft != p.cert.claim.subject_nft)
        return {false, "nft-mismatch"};
    PublicKey holder_key;
    try {
        holder_key = ledger.identity_key_of(p.holder_nft);
    } catch (const Error&) {
        return {false, "nft-mismatch"};
    }
    if (!ledger.crypto().verify(holder_key, p.signing_payload(), p.holder_signature))
        return {false, "bad-holder-sig"};
    return {true, ""};
}

}  // namespace metasim
