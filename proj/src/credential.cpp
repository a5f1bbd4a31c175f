#include "metasim/credential.hpp"

#include "metasim/canonical.hpp"
#include "metasim/error.hpp"

namespace metasim {

Bytes AttestationCertificate::signing_payload() const {
    return Encoder{}
            .str("metasim/attestation/v1")
            .str(claim.predicate)
            .str(claim.subject_nft.hex)
            .str(issuer_id.hex)
            .u64(issued_at)
            .take();
}

Bytes AttestationCertificate::encode() const {
    return Encoder{}
            .str(claim.predicate)
            .str(claim.subject_nft.hex)
            .str(issuer_id.hex)
            .u64(issued_at)
            .bytes(signature.bytes)
            .take();
}

AttestationCertificate AttestationCertificate::decode(ByteView data) {
    Decoder d(data);
    AttestationCertificate c;
    c.claim.predicate = d.str();
    c.claim.subject_nft.hex = d.str();
    c.issuer_id.hex = d.str();
    c.issued_at = d.u64();
    c.signature.bytes = d.bytes();
    d.expect_end();
    return c;
}

Bytes PrekeyEntry::signing_payload(const NftId& owner_nft) const {
    return Encoder{}
            .str("metasim/prekey/v1")
            .u32(prekey_id)
            .bytes(prekey_pub.bytes)
            .str(owner_nft.hex)
            .take();
}

Bytes SignedPrekeyBundle::encode() const {
    Encoder e;
    e.str(owner_nft.hex).u32(static_cast<std::uint32_t>(entries.size()));
    for (const auto& entry : entries)
        e.u32(entry.prekey_id).bytes(entry.prekey_pub.bytes).bytes(entry.owner_signature.bytes);
    return std::move(e).take();
}

SignedPrekeyBundle SignedPrekeyBundle::decode(ByteView data) {
    Decoder d(data);
    SignedPrekeyBundle b;
    b.owner_nft.hex = d.str();
    auto n = d.u32();
    if (n > max_prekeys_per_bundle)
        throw Error("decode-error", "too many prekeys");
    for (std::uint32_t i = 0; i < n; ++i) {
        PrekeyEntry entry;
        entry.prekey_id = d.u32();
        entry.prekey_pub.bytes = d.bytes();
        entry.owner_signature.bytes = d.bytes();
        b.entries.push_back(std::move(entry));
    }
    d.expect_end();
    return b;
}

bool verify_prekey_entry(const CryptoProvider& crypto, const PrekeyEntry& entry,
                         const NftId& owner_nft, const PublicKey& owner_identity) {
    return crypto.verify(owner_identity, entry.signing_payload(owner_nft), entry.owner_signature);
}

}  // namespace metasim
